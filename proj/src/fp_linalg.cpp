#include "bilbog/fp_linalg.hpp"

#include <algorithm>
#include <cassert>

namespace bilbog {

Ambient::Ambient(uint32_t p_, uint32_t n_) {
  if (!is_prime(p_) || p_ > 251) throw MismatchError("Ambient: p must be prime and <= 251");
  if (n_ < 1 || n_ > 40) throw MismatchError("Ambient: n out of range");
  p = uint16_t(p_);
  n = uint16_t(n_);
  size();  // overflow guard
}

size_t Ambient::size() const {
  size_t s = 1;
  for (uint32_t i = 0; i < n; ++i) {
    if (s > (size_t(1) << 50) / p) throw GuardError("Ambient: p^n exceeds the supported range");
    s *= p;
  }
  return s;
}

uint8_t mod_inverse(uint8_t a, uint16_t p) {
  assert(a % p != 0);
  // Extended Euclid on (a, p).
  int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    int64_t q = r / new_r;
    std::swap(t -= q * new_t, new_t);
    std::swap(r -= q * new_r, new_r);
  }
  if (t < 0) t += p;
  return uint8_t(t);
}

size_t idx_add(const Ambient& amb, size_t a, size_t b) {
  if (amb.p == 2) return a ^ b;
  size_t out = 0, mul = 1;
  for (uint32_t i = 0; i < amb.n; ++i) {
    uint32_t s = uint32_t(a % amb.p) + uint32_t(b % amb.p);
    if (s >= amb.p) s -= amb.p;
    out += s * mul;
    a /= amb.p;
    b /= amb.p;
    mul *= amb.p;
  }
  return out;
}

size_t idx_sub(const Ambient& amb, size_t a, size_t b) {
  if (amb.p == 2) return a ^ b;
  size_t out = 0, mul = 1;
  for (uint32_t i = 0; i < amb.n; ++i) {
    uint32_t s = uint32_t(a % amb.p) + amb.p - uint32_t(b % amb.p);
    if (s >= amb.p) s -= amb.p;
    out += s * mul;
    a /= amb.p;
    b /= amb.p;
    mul *= amb.p;
  }
  return out;
}

size_t idx_neg(const Ambient& amb, size_t a) { return idx_sub(amb, 0, a); }

uint8_t idx_dot(const Ambient& amb, size_t a, size_t b) {
  if (amb.p == 2) return uint8_t(__builtin_parityll(a & b));
  uint32_t acc = 0;
  for (uint32_t i = 0; i < amb.n; ++i) {
    acc += uint32_t(a % amb.p) * uint32_t(b % amb.p);
    a /= amb.p;
    b /= amb.p;
  }
  return uint8_t(acc % amb.p);
}

uint8_t idx_digit(const Ambient& amb, size_t x, uint32_t i) {
  if (amb.p == 2) return uint8_t((x >> i) & 1);
  for (uint32_t k = 0; k < i; ++k) x /= amb.p;
  return uint8_t(x % amb.p);
}

GVector::GVector(Ambient a, std::vector<uint8_t> coords) : amb(a), c(std::move(coords)) {
  if (c.size() != amb.n) throw MismatchError("GVector: coordinate count != n");
  for (uint8_t d : c)
    if (d >= amb.p) throw MismatchError("GVector: coordinate out of range");
}

GVector GVector::zero(const Ambient& amb) { return GVector(amb, std::vector<uint8_t>(amb.n, 0)); }

GVector GVector::unit(const Ambient& amb, uint32_t i) {
  GVector v = zero(amb);
  v.c.at(i) = 1;
  return v;
}

GVector GVector::decode(const Ambient& amb, size_t idx) {
  GVector v = zero(amb);
  for (uint32_t i = 0; i < amb.n; ++i) {
    v.c[i] = uint8_t(idx % amb.p);
    idx /= amb.p;
  }
  return v;
}

size_t GVector::encode() const {
  size_t out = 0;
  for (uint32_t i = amb.n; i-- > 0;) out = out * amb.p + c[i];
  return out;
}

bool GVector::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](uint8_t d) { return d == 0; });
}

GVector GVector::operator+(const GVector& o) const {
  if (amb != o.amb) throw MismatchError("GVector+: ambient mismatch");
  GVector out = *this;
  for (uint32_t i = 0; i < amb.n; ++i) out.c[i] = uint8_t((out.c[i] + o.c[i]) % amb.p);
  return out;
}

GVector GVector::operator-(const GVector& o) const {
  if (amb != o.amb) throw MismatchError("GVector-: ambient mismatch");
  GVector out = *this;
  for (uint32_t i = 0; i < amb.n; ++i)
    out.c[i] = uint8_t((out.c[i] + amb.p - o.c[i]) % amb.p);
  return out;
}

GVector GVector::negated() const { return zero(amb) - *this; }

GVector GVector::scaled(uint8_t lambda) const {
  GVector out = *this;
  for (uint32_t i = 0; i < amb.n; ++i) out.c[i] = uint8_t(out.c[i] * lambda % amb.p);
  return out;
}

uint8_t GVector::dot(const GVector& o) const {
  if (amb != o.amb) throw MismatchError("GVector::dot: ambient mismatch");
  uint32_t acc = 0;
  for (uint32_t i = 0; i < amb.n; ++i) acc += uint32_t(c[i]) * o.c[i];
  return uint8_t(acc % amb.p);
}

FpMatrix::FpMatrix(Ambient ambient) : amb(ambient), a(size_t(ambient.n) * ambient.n, 0) {}

FpMatrix FpMatrix::identity(const Ambient& amb) {
  FpMatrix m(amb);
  for (uint32_t i = 0; i < amb.n; ++i) m.at(i, i) = 1;
  return m;
}

GVector FpMatrix::apply(const GVector& x) const {
  if (x.amb != amb) throw MismatchError("FpMatrix::apply: ambient mismatch");
  GVector out = GVector::zero(amb);
  for (uint32_t i = 0; i < amb.n; ++i) {
    uint32_t acc = 0;
    for (uint32_t j = 0; j < amb.n; ++j) acc += uint32_t(at(i, j)) * x.c[j];
    out.c[i] = uint8_t(acc % amb.p);
  }
  return out;
}

size_t FpMatrix::apply_idx(size_t x) const {
  size_t out = 0, mul = 1;
  for (uint32_t i = 0; i < amb.n; ++i) {
    uint32_t acc = 0;
    size_t xx = x;
    for (uint32_t j = 0; j < amb.n; ++j) {
      acc += uint32_t(at(i, j)) * uint32_t(xx % amb.p);
      xx /= amb.p;
    }
    out += (acc % amb.p) * mul;
    mul *= amb.p;
  }
  return out;
}

FpMatrix FpMatrix::transposed() const {
  FpMatrix m(amb);
  for (uint32_t i = 0; i < amb.n; ++i)
    for (uint32_t j = 0; j < amb.n; ++j) m.at(j, i) = at(i, j);
  return m;
}

void FpMatrix::add_scaled(const FpMatrix& o, uint8_t lambda) {
  if (o.amb != amb) throw MismatchError("FpMatrix::add_scaled: ambient mismatch");
  for (size_t k = 0; k < a.size(); ++k)
    a[k] = uint8_t((a[k] + uint32_t(lambda) * o.a[k]) % amb.p);
}

bool FpMatrix::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](uint8_t d) { return d == 0; });
}

namespace {

// In-place reduced row echelon form; returns pivot columns, drops zero rows.
std::vector<uint32_t> rref(std::vector<std::vector<uint8_t>>& rows, uint16_t p, uint32_t ncols) {
  std::vector<uint32_t> pivots;
  size_t rank = 0;
  for (uint32_t col = 0; col < ncols && rank < rows.size(); ++col) {
    size_t sel = rank;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    const uint8_t inv = mod_inverse(rows[rank][col], p);
    for (uint32_t j = col; j < ncols; ++j)
      rows[rank][j] = uint8_t(rows[rank][j] * inv % p);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      const uint32_t f = rows[i][col];
      for (uint32_t j = col; j < ncols; ++j)
        rows[i][j] = uint8_t((rows[i][j] + (p - f) * rows[rank][j]) % p);
    }
    pivots.push_back(col);
    ++rank;
  }
  rows.resize(rank);
  return pivots;
}

// RREF basis of { x : rows . x = 0 }.
std::vector<std::vector<uint8_t>> kernel_of_rows(std::vector<std::vector<uint8_t>> rows,
                                                 uint16_t p, uint32_t n) {
  const std::vector<uint32_t> pivots = rref(rows, p, n);
  std::vector<bool> is_pivot(n, false);
  for (uint32_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<uint8_t>> kern;
  for (uint32_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<uint8_t> v(n, 0);
    v[f] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = uint8_t((p - rows[r][f]) % p);
    kern.push_back(std::move(v));
  }
  rref(kern, p, n);  // canonical form
  return kern;
}

}  // namespace

Subspace subspace_from_rref(const Ambient& amb, std::vector<std::vector<uint8_t>> rows,
                            std::vector<uint32_t> pivots) {
  Subspace s;
  s.amb_ = amb;
  s.rows_ = std::move(rows);
  s.pivots_ = std::move(pivots);
  return s;
}

Subspace Subspace::zero(const Ambient& amb) { return subspace_from_rref(amb, {}, {}); }

Subspace Subspace::full(const Ambient& amb) {
  std::vector<std::vector<uint8_t>> rows;
  std::vector<uint32_t> piv;
  for (uint32_t i = 0; i < amb.n; ++i) {
    std::vector<uint8_t> v(amb.n, 0);
    v[i] = 1;
    rows.push_back(std::move(v));
    piv.push_back(i);
  }
  return subspace_from_rref(amb, std::move(rows), std::move(piv));
}

Subspace Subspace::span(const Ambient& amb, const std::vector<GVector>& gens) {
  std::vector<std::vector<uint8_t>> rows;
  rows.reserve(gens.size());
  for (const GVector& g : gens) {
    if (g.amb != amb) throw MismatchError("Subspace::span: ambient mismatch");
    rows.push_back(g.c);
  }
  std::vector<uint32_t> piv = rref(rows, amb.p, amb.n);
  return subspace_from_rref(amb, std::move(rows), std::move(piv));
}

std::vector<GVector> Subspace::basis() const {
  std::vector<GVector> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.emplace_back(amb_, r);
  return out;
}

std::vector<uint8_t> Subspace::reduce(std::vector<uint8_t> v) const {
  if (v.size() != amb_.n) throw MismatchError("Subspace::reduce: length mismatch");
  for (size_t r = 0; r < rows_.size(); ++r) {
    const uint32_t f = v[pivots_[r]];
    if (f == 0) continue;
    for (uint32_t j = 0; j < amb_.n; ++j)
      v[j] = uint8_t((v[j] + (amb_.p - f) * rows_[r][j]) % amb_.p);
  }
  return v;
}

bool Subspace::contains(const GVector& v) const {
  if (v.amb != amb_) throw MismatchError("Subspace::contains: ambient mismatch");
  const std::vector<uint8_t> res = reduce(v.c);
  return std::all_of(res.begin(), res.end(), [](uint8_t d) { return d == 0; });
}

bool Subspace::contains_idx(size_t idx) const { return contains(GVector::decode(amb_, idx)); }

Subspace orthogonal_complement(const Subspace& s) {
  const Ambient& amb = s.ambient();
  std::vector<std::vector<uint8_t>> kern = kernel_of_rows(s.rows(), amb.p, amb.n);
  std::vector<std::vector<uint8_t>> rows = kern;
  std::vector<uint32_t> piv = rref(rows, amb.p, amb.n);
  return subspace_from_rref(amb, std::move(rows), std::move(piv));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (!(a.ambient() == b.ambient())) throw MismatchError("intersect: ambient mismatch");
  // (a ^ b) = (a^perp + b^perp)^perp; the standard form is non-degenerate.
  const Subspace ca = orthogonal_complement(a);
  const Subspace cb = orthogonal_complement(b);
  std::vector<GVector> gens = ca.basis();
  for (GVector& v : cb.basis()) gens.push_back(std::move(v));
  return orthogonal_complement(Subspace::span(a.ambient(), gens));
}

Subspace preimage_subspace(const FpMatrix& l, const Subspace& s) {
  const Ambient& amb = s.ambient();
  if (!(l.amb == amb)) throw MismatchError("preimage_subspace: ambient mismatch");
  // x in preimage iff C L x = 0 where the rows of C cut out s.
  const Subspace c = orthogonal_complement(s);
  std::vector<std::vector<uint8_t>> rows;
  for (const auto& crow : c.rows()) {
    std::vector<uint8_t> row(amb.n, 0);
    for (uint32_t j = 0; j < amb.n; ++j) {
      uint32_t acc = 0;
      for (uint32_t m = 0; m < amb.n; ++m) acc += uint32_t(crow[m]) * l.at(m, j);
      row[j] = uint8_t(acc % amb.p);
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::vector<uint8_t>> kern = kernel_of_rows(std::move(rows), amb.p, amb.n);
  std::vector<uint32_t> piv = rref(kern, amb.p, amb.n);
  return subspace_from_rref(amb, std::move(kern), std::move(piv));
}

Subspace greedy_avoiding_subspace(const Subspace& v0, const std::vector<GVector>& r) {
  const Ambient& amb = v0.ambient();
  std::vector<GVector> targets = r;
  std::sort(targets.begin(), targets.end(),
            [](const GVector& a, const GVector& b) { return a.encode() < b.encode(); });
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  Subspace v1 = v0;
  std::vector<std::vector<uint8_t>> funcals;  // chosen functionals, echelonized
  for (bool progress = true; progress;) {
    progress = false;
    for (const GVector& t : targets) {
      if (t.is_zero() || !v1.contains(t)) continue;
      GVector f = t;
      if (t.dot(t) == 0) {
        std::vector<std::vector<uint8_t>> probe = funcals;
        std::vector<uint32_t> piv = rref(probe, amb.p, amb.n);
        std::vector<bool> taken(amb.n, false);
        for (uint32_t c : piv) taken[c] = true;
        uint32_t j = amb.n;
        for (uint32_t i = 0; i < amb.n; ++i)
          if (t.c[i] != 0 && !taken[i]) { j = i; break; }
        if (j == amb.n)
          for (uint32_t i = 0; i < amb.n; ++i)
            if (t.c[i] != 0) { j = i; break; }
        f = GVector::unit(amb, j);
      }
      assert(f.dot(t) != 0);
      funcals.push_back(f.c);
      v1 = intersect(v1, orthogonal_complement(Subspace::span(amb, {f})));
      progress = true;
    }
  }
  return v1;
}

std::vector<size_t> elements_sorted(const Subspace& s, size_t guard) {
  size_t count = 1;
  for (size_t i = 0; i < s.dim(); ++i) {
    count *= s.ambient().p;
    if (count > guard) throw GuardError("elements_sorted: subspace too large to enumerate");
  }
  const Ambient& amb = s.ambient();
  std::vector<size_t> out{0};
  out.reserve(count);
  for (const auto& row : s.rows()) {
    const size_t base = GVector(amb, row).encode();
    const size_t cur = out.size();
    size_t shift = base;
    for (uint16_t lambda = 1; lambda < amb.p; ++lambda) {
      for (size_t i = 0; i < cur; ++i) out.push_back(idx_add(amb, out[i], shift));
      shift = idx_add(amb, shift, base);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Coset Coset::empty_coset(const Ambient& amb) {
  Coset c;
  c.empty = true;
  c.space = Subspace::zero(amb);
  c.rep = GVector::zero(amb);
  return c;
}

Coset Coset::of(Subspace w, const GVector& rep) {
  if (!(w.ambient() == rep.amb)) throw MismatchError("Coset: ambient mismatch");
  Coset c;
  c.empty = false;
  c.rep = GVector(rep.amb, w.reduce(rep.c));
  c.space = std::move(w);
  return c;
}

bool Coset::contains(const GVector& v) const {
  if (empty) return false;
  return space.contains(v - rep);
}

bool Coset::contains_idx(size_t idx) const {
  if (empty) return false;
  return contains(GVector::decode(space.ambient(), idx));
}

AffineEndo::AffineEndo(FpMatrix l, GVector t) : linear(std::move(l)), translation(std::move(t)) {
  if (!(linear.amb == translation.amb)) throw MismatchError("AffineEndo: ambient mismatch");
}

AffineEndo AffineEndo::zero(const Ambient& amb) {
  return AffineEndo(FpMatrix(amb), GVector::zero(amb));
}

AffineEndo AffineEndo::constant(const GVector& t) { return AffineEndo(FpMatrix(t.amb), t); }

GVector AffineEndo::operator()(const GVector& y) const { return linear.apply(y) + translation; }

size_t AffineEndo::apply_idx(size_t y) const {
  return idx_add(linear.amb, linear.apply_idx(y), translation.encode());
}

AffineEndo AffineEndo::linearization() const {
  return AffineEndo(linear, GVector::zero(linear.amb));
}

FpMatrix AffineEndo::adjoint() const { return linear.transposed(); }

std::vector<uint8_t> AffineEndo::encode_key() const {
  std::vector<uint8_t> key = linear.a;
  key.insert(key.end(), translation.c.begin(), translation.c.end());
  return key;
}

std::optional<AffineEndo> solve_affine_from_points(
    const Ambient& amb, const std::vector<std::pair<GVector, GVector>>& pts) {
  const uint32_t n = amb.n;
  const uint32_t cols = n + 1;      // unknowns per output coordinate: one L row and one t entry
  const uint32_t width = cols + n;  // augmented with all n output coordinates at once
  std::vector<std::vector<uint8_t>> rows;
  rows.reserve(pts.size());
  for (const auto& [x, y] : pts) {
    if (x.amb != amb || y.amb != amb)
      throw MismatchError("solve_affine_from_points: ambient mismatch");
    std::vector<uint8_t> row(width, 0);
    for (uint32_t j = 0; j < n; ++j) row[j] = x.c[j];
    row[n] = 1;
    for (uint32_t i = 0; i < n; ++i) row[cols + i] = y.c[i];
    rows.push_back(std::move(row));
  }
  // Pivot only inside the coefficient block; a leftover nonzero RHS row means
  // the points admit no affine map.
  std::vector<uint32_t> pivots;
  size_t rank = 0;
  for (uint32_t col = 0; col < cols && rank < rows.size(); ++col) {
    size_t sel = rank;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    const uint8_t inv = mod_inverse(rows[rank][col], amb.p);
    for (uint32_t j = 0; j < width; ++j) rows[rank][j] = uint8_t(rows[rank][j] * inv % amb.p);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      const uint32_t f = rows[i][col];
      for (uint32_t j = 0; j < width; ++j)
        rows[i][j] = uint8_t((rows[i][j] + (amb.p - f) * rows[rank][j]) % amb.p);
    }
    pivots.push_back(col);
    ++rank;
  }
  for (size_t i = rank; i < rows.size(); ++i)
    for (uint32_t j = cols; j < width; ++j)
      if (rows[i][j] != 0) return std::nullopt;

  FpMatrix l(amb);
  GVector t = GVector::zero(amb);
  for (size_t r = 0; r < pivots.size(); ++r) {
    for (uint32_t i = 0; i < n; ++i) {
      const uint8_t val = rows[r][cols + i];
      if (pivots[r] < n)
        l.at(i, pivots[r]) = val;
      else
        t.c[i] = val;
    }
  }
  return AffineEndo(std::move(l), std::move(t));
}

}  // namespace bilbog
