#include "bilbog/product_set.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "bilbog/fourier.hpp"

namespace bilbog {

namespace {

constexpr size_t kGridGuard = size_t(1) << 13;  // N above this would need > 8 MiB per grid

size_t line_words(size_t n_pts) { return (n_pts + 63) / 64; }

bool line_test(const Line& l, size_t i) { return (l[i >> 6] >> (i & 63)) & 1; }

void line_set(Line& l, size_t i) { l[i >> 6] |= uint64_t(1) << (i & 63); }

}  // namespace

size_t line_popcount(const Line& l) {
  size_t c = 0;
  for (uint64_t w : l) c += size_t(__builtin_popcountll(w));
  return c;
}

std::vector<size_t> line_indices(const Line& l, size_t n_pts) {
  std::vector<size_t> out;
  for (size_t i = 0; i < n_pts; ++i)
    if (line_test(l, i)) out.push_back(i);
  return out;
}

ProductSet::ProductSet(const Ambient& amb) : amb_(amb), n_(amb.size()) {
  if (n_ > kGridGuard) throw GuardError("ProductSet: p^n too large for a dense grid");
  bits_.assign((n_ * n_ + 63) / 64, 0);
}

ProductSet ProductSet::full(const Ambient& amb) {
  ProductSet a(amb);
  std::fill(a.bits_.begin(), a.bits_.end(), ~uint64_t(0));
  const size_t used = a.n_ * a.n_;
  if (used & 63) a.bits_.back() &= (uint64_t(1) << (used & 63)) - 1;
  return a;
}

void ProductSet::set(size_t x, size_t y, bool value) {
  const size_t b = x * n_ + y;
  if (value)
    bits_[b >> 6] |= uint64_t(1) << (b & 63);
  else
    bits_[b >> 6] &= ~(uint64_t(1) << (b & 63));
}

Line ProductSet::row(size_t x) const {
  Line l(line_words(n_), 0);
  for (size_t y = 0; y < n_; ++y)
    if (test(x, y)) line_set(l, y);
  return l;
}

Line ProductSet::col(size_t y) const {
  Line l(line_words(n_), 0);
  for (size_t x = 0; x < n_; ++x)
    if (test(x, y)) line_set(l, x);
  return l;
}

std::vector<size_t> ProductSet::row_indices(size_t x) const { return line_indices(row(x), n_); }

void ProductSet::assign_row(size_t x, const Line& l) {
  for (size_t y = 0; y < n_; ++y) set(x, y, line_test(l, y));
}

ProductSet ProductSet::transposed() const {
  ProductSet t(amb_);
  for (size_t x = 0; x < n_; ++x)
    for (size_t y = 0; y < n_; ++y)
      if (test(x, y)) t.set(y, x);
  return t;
}

int64_t ProductSet::popcount() const {
  int64_t c = 0;
  for (uint64_t w : bits_) c += __builtin_popcountll(w);
  return c;
}

bool ProductSet::is_subset_of(const ProductSet& o) const {
  if (!(amb_ == o.amb_)) throw MismatchError("is_subset_of: ambient mismatch");
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~o.bits_[i]) return false;
  return true;
}

std::vector<std::pair<size_t, size_t>> ProductSet::subset_violations(const ProductSet& o,
                                                                     size_t cap) const {
  if (!(amb_ == o.amb_)) throw MismatchError("subset_violations: ambient mismatch");
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < bits_.size() && out.size() < cap; ++i) {
    uint64_t bad = bits_[i] & ~o.bits_[i];
    while (bad && out.size() < cap) {
      const size_t b = i * 64 + size_t(__builtin_ctzll(bad));
      out.emplace_back(b / n_, b % n_);
      bad &= bad - 1;
    }
  }
  return out;
}

double density(const ProductSet& a) {
  const double n = double(a.side());
  return double(a.popcount()) / (n * n);
}

namespace {

Line line_diff_direct(const Line& l, const Ambient& amb, size_t n_pts) {
  Line out(line_words(n_pts), 0);
  for (size_t h = 0; h < n_pts; ++h) {
    for (size_t y = 0; y < n_pts; ++y) {
      if (line_test(l, y) && line_test(l, idx_add(amb, y, h))) {
        line_set(out, h);
        break;
      }
    }
  }
  return out;
}

// counts(h) = |L ^ (L - h)| via the transform; integers, so rounding is exact.
Line line_diff_fft(const Line& l, const Ambient& amb, size_t n_pts) {
  std::vector<cd> v(n_pts, cd(0.0, 0.0));
  for (size_t y = 0; y < n_pts; ++y)
    if (line_test(l, y)) v[y] = cd(1.0, 0.0);
  dft_inplace(v, amb, false);
  for (cd& z : v) z = cd(std::norm(z), 0.0);
  dft_inplace(v, amb, true);
  Line out(line_words(n_pts), 0);
  for (size_t h = 0; h < n_pts; ++h) {
    const int64_t count = llround(v[h].real() * double(n_pts));
    if (count > 0) line_set(out, h);
  }
  return out;
}

}  // namespace

Line line_diff_support(const Line& l, const Ambient& amb) {
  const size_t n_pts = amb.size();
  return n_pts < 32 ? line_diff_direct(l, amb, n_pts) : line_diff_fft(l, amb, n_pts);
}

Line line_sumdiff_support(const Line& l, const Ambient& amb) {
  // L + L - L - L = D - D for the symmetric D = L - L.
  return line_diff_support(line_diff_support(l, amb), amb);
}

namespace {

ProductSet per_line(const ProductSet& a, Axis axis, unsigned threads,
                    Line (*op)(const Line&, const Ambient&)) {
  const Ambient amb = a.ambient();
  const ProductSet src = axis == Axis::Row ? a : a.transposed();
  ProductSet dst(amb);
  std::vector<Line> lines(a.side());
  parallel_for(a.side(), threads, [&](size_t i) { lines[i] = op(src.row(i), amb); });
  for (size_t i = 0; i < a.side(); ++i) dst.assign_row(i, lines[i]);
  return axis == Axis::Row ? dst : dst.transposed();
}

}  // namespace

ProductSet directional_diff_support(const ProductSet& a, Axis axis, unsigned threads) {
  return per_line(a, axis, threads, line_diff_support);
}

ProductSet directional_sumdiff_support(const ProductSet& a, Axis axis, unsigned threads) {
  return per_line(a, axis, threads, line_sumdiff_support);
}

PipelineSets pipeline_a3(const ProductSet& a, unsigned threads) {
  ProductSet a1 = directional_diff_support(a, Axis::Row, threads);
  ProductSet a2 = directional_sumdiff_support(a1, Axis::Col, threads);
  ProductSet a3 = directional_sumdiff_support(a2, Axis::Row, threads);
  return PipelineSets{std::move(a1), std::move(a2), std::move(a3)};
}

int64_t parallelogram_count(const ProductSet& a, size_t w, size_t h) {
  const Ambient amb = a.ambient();
  const size_t n_pts = a.side();
  if (w >= n_pts || h >= n_pts) throw MismatchError("parallelogram_count: offset out of range");
  // c[x] = |{ y : (x,y) and (x,y+h) in A }|, then sum_x c[x] c[x+w].
  std::vector<int64_t> c(n_pts, 0);
  for (size_t x = 0; x < n_pts; ++x) {
    int64_t cnt = 0;
    for (size_t y = 0; y < n_pts; ++y)
      if (a.test(x, y) && a.test(x, idx_add(amb, y, h))) ++cnt;
    c[x] = cnt;
  }
  int64_t total = 0;
  for (size_t x = 0; x < n_pts; ++x) total += c[x] * c[idx_add(amb, x, w)];
  return total;
}

void write_set_binary(const std::string& path, const ProductSet& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const char magic[6] = {'F', 'P', 'S', 'E', 'T', '\0'};
  out.write(magic, 6);
  const uint8_t header[3] = {1, uint8_t(a.ambient().p), uint8_t(a.ambient().n)};
  out.write(reinterpret_cast<const char*>(header), 3);
  const size_t nbits = a.side() * a.side();
  const size_t nbytes = (nbits + 7) / 8;
  std::vector<uint8_t> buf(nbytes, 0);
  const auto& words = a.words();
  for (size_t b = 0; b < nbytes; ++b) {
    const size_t bit = b * 8;
    buf[b] = uint8_t((words[bit >> 6] >> (bit & 63)) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(nbytes));
  if (!out) throw IoError("write failed: " + path);
}

void write_set_text(const std::string& path, const ProductSet& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  const Ambient amb = a.ambient();
  out << "# p " << amb.p << " n " << amb.n << '\n';
  for (size_t x = 0; x < a.side(); ++x) {
    for (size_t y = 0; y < a.side(); ++y) {
      if (!a.test(x, y)) continue;
      const GVector vx = GVector::decode(amb, x);
      const GVector vy = GVector::decode(amb, y);
      for (uint32_t i = 0; i < amb.n; ++i) out << (i ? "," : "") << int(vx.c[i]);
      out << ';';
      for (uint32_t i = 0; i < amb.n; ++i) out << (i ? "," : "") << int(vy.c[i]);
      out << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

ProductSet read_set_binary(const std::vector<char>& data, const std::string& path) {
  if (data.size() < 9) throw ParseError(path + ": truncated header", data.size());
  if (data[6] != 1) throw ParseError(path + ": unsupported version", 6);
  const uint8_t p = uint8_t(data[7]);
  const uint8_t n = uint8_t(data[8]);
  Ambient amb;
  try {
    amb = Ambient(p, n);
  } catch (const MismatchError& e) {
    throw ParseError(path + ": bad ambient: " + e.what(), 7);
  }
  ProductSet a(amb);
  const size_t nbits = a.side() * a.side();
  const size_t nbytes = (nbits + 7) / 8;
  if (data.size() != 9 + nbytes)
    throw ParseError(path + ": payload size mismatch", data.size() < 9 + nbytes ? data.size() : 9 + nbytes);
  for (size_t b = 0; b < nbits; ++b)
    if ((uint8_t(data[9 + b / 8]) >> (b % 8)) & 1) a.set(b / a.side(), b % a.side());
  return a;
}

ProductSet read_set_text(const std::vector<char>& data, const std::string& path) {
  // An optional "# p <p> n <n>" header pins the ambient; otherwise the shape
  // is inferred (same coordinate count everywhere, p = smallest prime above
  // every residue seen).
  std::vector<std::pair<std::vector<uint8_t>, std::vector<uint8_t>>> pairs;
  size_t pos = 0;
  uint32_t n = 0;
  uint32_t max_digit = 0;
  uint32_t header_p = 0, header_n = 0;
  const size_t len = data.size();
  if (len > 0 && data[0] == '#') {
    size_t end = 0;
    while (end < len && data[end] != '\n') ++end;
    const std::string header(data.begin(), data.begin() + std::ptrdiff_t(end));
    if (std::sscanf(header.c_str(), "# p %u n %u", &header_p, &header_n) != 2)
      throw ParseError(path + ": bad header line", 0);
    pos = end;
  }
  while (pos < len) {
    while (pos < len && (data[pos] == '\n' || data[pos] == '\r')) ++pos;
    if (pos >= len) break;
    const size_t line_start = pos;
    std::vector<uint8_t> xs, ys;
    std::vector<uint8_t>* cur = &xs;
    uint32_t val = 0;
    bool have_digit = false;
    for (; pos <= len; ++pos) {
      const char ch = pos < len ? data[pos] : '\n';
      if (ch >= '0' && ch <= '9') {
        val = val * 10 + uint32_t(ch - '0');
        if (val > 250) throw ParseError(path + ": coordinate too large", pos);
        have_digit = true;
      } else if (ch == ',' || ch == ';' || ch == '\n' || ch == '\r') {
        if (!have_digit) throw ParseError(path + ": empty coordinate", pos);
        cur->push_back(uint8_t(val));
        max_digit = std::max(max_digit, val);
        val = 0;
        have_digit = false;
        if (ch == ';') {
          if (cur == &ys) throw ParseError(path + ": second ';' in pair", pos);
          cur = &ys;
        } else if (ch == '\n' || ch == '\r') {
          ++pos;
          break;
        }
      } else {
        throw ParseError(path + ": unexpected character", pos);
      }
    }
    if (cur != &ys || ys.empty()) throw ParseError(path + ": pair missing ';'", line_start);
    if (xs.size() != ys.size()) throw ParseError(path + ": x/y length mismatch", line_start);
    if (n == 0)
      n = uint32_t(xs.size());
    else if (xs.size() != n)
      throw ParseError(path + ": inconsistent coordinate count", line_start);
    pairs.emplace_back(std::move(xs), std::move(ys));
  }
  // A header-only file is a valid empty set; without the header there is no
  // way to recover (p, n), so refuse.
  if (pairs.empty() && (header_p == 0 || header_n == 0))
    throw ParseError(path + ": no pairs and no header", 0);
  if (pairs.empty()) n = header_n;
  if (header_n != 0 && n != header_n) throw ParseError(path + ": header n mismatch", 0);
  if (header_p != 0 && max_digit >= header_p)
    throw ParseError(path + ": coordinate exceeds header p", 0);
  uint32_t p = header_p;
  if (p == 0) {
    p = max_digit + 1;
    while (!is_prime(p)) ++p;
  } else if (!is_prime(p) || p > 251) {
    throw ParseError(path + ": header p must be prime and <= 251", 0);
  }
  if (n < 1 || n > 40) throw ParseError(path + ": unsupported dimension", 0);
  const Ambient amb(p, n);
  ProductSet a(amb);
  for (const auto& [xs, ys] : pairs)
    a.set(GVector(amb, xs).encode(), GVector(amb, ys).encode());
  return a;
}

}  // namespace

ProductSet read_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() >= 6 && std::memcmp(data.data(), "FPSET\0", 6) == 0)
    return read_set_binary(data, path);
  return read_set_text(data, path);
}

}  // namespace bilbog
