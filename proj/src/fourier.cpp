#include "bilbog/fourier.hpp"

#include <cmath>
#include <numbers>

namespace bilbog {

DenseFn::DenseFn(const Ambient& ambient, std::vector<cd> values)
    : amb(ambient), v(std::move(values)) {
  if (v.size() != amb.size()) throw MismatchError("DenseFn: table size != p^n");
}

DenseFn DenseFn::constant(const Ambient& amb, cd value) {
  DenseFn f(amb);
  std::fill(f.v.begin(), f.v.end(), value);
  return f;
}

DenseFn DenseFn::indicator(const Ambient& amb, const std::vector<size_t>& points) {
  DenseFn f(amb);
  for (size_t x : points) f.v.at(x) = cd(1.0, 0.0);
  return f;
}

cd DenseFn::mean() const {
  cd acc(0.0, 0.0);
  for (const cd& z : v) acc += z;
  return acc / double(v.size());
}

double DenseFn::mean_abs2() const {
  double acc = 0.0;
  for (const cd& z : v) acc += std::norm(z);
  return acc / double(v.size());
}

void dft_inplace(std::vector<cd>& v, const Ambient& amb, bool inverse) {
  const size_t n_pts = amb.size();
  if (v.size() != n_pts) throw MismatchError("dft_inplace: table size != p^n");
  const uint32_t p = amb.p;
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cd> w(p);
  for (uint32_t m = 0; m < p; ++m)
    w[m] = std::polar(1.0, sign * 2.0 * std::numbers::pi * double(m) / double(p));

  std::vector<cd> in(p), out(p);
  size_t stride = 1;
  for (uint32_t axis = 0; axis < amb.n; ++axis, stride *= p) {
    const size_t block = stride * p;
    for (size_t base = 0; base < n_pts; base += block) {
      for (size_t off = 0; off < stride; ++off) {
        const size_t start = base + off;
        for (uint32_t j = 0; j < p; ++j) in[j] = v[start + j * stride];
        for (uint32_t j = 0; j < p; ++j) {
          cd acc(0.0, 0.0);
          uint32_t jk = 0;
          for (uint32_t k = 0; k < p; ++k) {
            acc += in[k] * w[jk];
            jk += j;
            if (jk >= p) jk -= p;
          }
          out[j] = acc;
        }
        for (uint32_t j = 0; j < p; ++j) v[start + j * stride] = out[j];
      }
    }
  }
  if (!inverse) {
    const double scale = 1.0 / double(n_pts);
    for (cd& z : v) z *= scale;
  }
}

DenseFn dft(const DenseFn& f) {
  DenseFn out = f;
  dft_inplace(out.v, out.amb, false);
  return out;
}

DenseFn idft(const DenseFn& f) {
  DenseFn out = f;
  dft_inplace(out.v, out.amb, true);
  return out;
}

DenseFn dft_naive(const DenseFn& f) {
  const size_t n_pts = f.size();
  DenseFn out(f.amb);
  for (size_t r = 0; r < n_pts; ++r) {
    cd acc(0.0, 0.0);
    for (size_t x = 0; x < n_pts; ++x) {
      const double ang = -2.0 * std::numbers::pi * double(idx_dot(f.amb, r, x)) / double(f.amb.p);
      acc += f.v[x] * std::polar(1.0, ang);
    }
    out.v[r] = acc / double(n_pts);
  }
  return out;
}

DenseFn idft_naive(const DenseFn& f) {
  const size_t n_pts = f.size();
  DenseFn out(f.amb);
  for (size_t x = 0; x < n_pts; ++x) {
    cd acc(0.0, 0.0);
    for (size_t r = 0; r < n_pts; ++r) {
      const double ang = 2.0 * std::numbers::pi * double(idx_dot(f.amb, r, x)) / double(f.amb.p);
      acc += f.v[r] * std::polar(1.0, ang);
    }
    out.v[x] = acc;
  }
  return out;
}

DenseFn convolve(const DenseFn& f, const DenseFn& g) {
  if (!(f.amb == g.amb)) throw MismatchError("convolve: ambient mismatch");
  DenseFn fh = dft(f);
  const DenseFn gh = dft(g);
  for (size_t r = 0; r < fh.size(); ++r) fh.v[r] *= std::conj(gh.v[r]);
  dft_inplace(fh.v, fh.amb, true);
  return fh;
}

DenseFn convolve_naive(const DenseFn& f, const DenseFn& g) {
  if (!(f.amb == g.amb)) throw MismatchError("convolve_naive: ambient mismatch");
  const size_t n_pts = f.size();
  DenseFn out(f.amb);
  for (size_t x = 0; x < n_pts; ++x) {
    cd acc(0.0, 0.0);
    for (size_t y = 0; y < n_pts; ++y) acc += f.v[idx_add(f.amb, y, x)] * std::conj(g.v[y]);
    out.v[x] = acc / double(n_pts);
  }
  return out;
}

bool Spectrum::contains(size_t r) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), r,
                             [](const auto& e, size_t key) { return e.first < key; });
  return it != entries.end() && it->first == r;
}

std::vector<GVector> Spectrum::frequencies(const Ambient& amb) const {
  std::vector<GVector> out;
  out.reserve(entries.size());
  for (const auto& [r, coef] : entries) out.push_back(GVector::decode(amb, r));
  return out;
}

Spectrum large_spectrum(const DenseFn& f, double theta) {
  const DenseFn fh = dft(f);
  Spectrum s;
  s.threshold = theta;
  for (size_t r = 0; r < fh.size(); ++r)
    if (std::abs(fh.v[r]) >= theta) s.entries.emplace_back(r, fh.v[r]);
  return s;
}

std::vector<size_t> support(const DenseFn& f, double tol) {
  std::vector<size_t> out;
  for (size_t x = 0; x < f.size(); ++x)
    if (std::abs(f.v[x]) > tol) out.push_back(x);
  return out;
}

std::vector<int64_t> correlate_counts(const std::vector<int64_t>& a,
                                      const std::vector<int64_t>& b, const Ambient& amb) {
  const size_t n_pts = amb.size();
  if (a.size() != n_pts || b.size() != n_pts)
    throw MismatchError("correlate_counts: table size != p^n");
  std::vector<int64_t> out(n_pts, 0);
  for (size_t x = 0; x < n_pts; ++x) {
    int64_t acc = 0;
    for (size_t y = 0; y < n_pts; ++y) acc += a[idx_add(amb, y, x)] * b[y];
    out[x] = acc;
  }
  return out;
}

}  // namespace bilbog
