#pragma once

// Normalized discrete Fourier analysis on G = F_p^n:
//   fhat(r) = E_x f(x) w^{-r.x},  w = exp(2 pi i / p),
//   idft(F)(x) = sum_r F(r) w^{r.x},
//   (f * g)(x) = E_y f(y + x) conj(g(y)), with transform fhat . conj(ghat).
// The fast transform applies the length-p kernel along coordinate 0 first,
// then 1, ..., with a fixed accumulation order, so results are bit-stable.

#include <complex>
#include <cstdint>
#include <vector>

#include "bilbog/fp_linalg.hpp"

namespace bilbog {

using cd = std::complex<double>;

struct DenseFn {
  Ambient amb;
  std::vector<cd> v;

  explicit DenseFn(const Ambient& ambient) : amb(ambient), v(ambient.size(), cd(0.0, 0.0)) {}
  DenseFn(const Ambient& ambient, std::vector<cd> values);

  static DenseFn constant(const Ambient& amb, cd value);
  static DenseFn indicator(const Ambient& amb, const std::vector<size_t>& points);

  size_t size() const { return v.size(); }
  cd& operator[](size_t i) { return v[i]; }
  const cd& operator[](size_t i) const { return v[i]; }
  cd mean() const;
  double mean_abs2() const;
};

// In-place transform of one table over `amb`; shared by the batched line
// transforms. inverse=false: forward (with 1/N); inverse=true: unscaled dual.
void dft_inplace(std::vector<cd>& v, const Ambient& amb, bool inverse);

DenseFn dft(const DenseFn& f);
DenseFn idft(const DenseFn& f);
// Quadratic-time oracles with independently computed twiddles.
DenseFn dft_naive(const DenseFn& f);
DenseFn idft_naive(const DenseFn& f);

DenseFn convolve(const DenseFn& f, const DenseFn& g);
DenseFn convolve_naive(const DenseFn& f, const DenseFn& g);

struct Spectrum {
  double threshold = 0.0;
  // (encoded frequency, coefficient), frequencies strictly increasing.
  std::vector<std::pair<size_t, cd>> entries;

  bool contains(size_t r) const;
  std::vector<GVector> frequencies(const Ambient& amb) const;
};

// { r : |fhat(r)| >= theta }, ties at the threshold included.
Spectrum large_spectrum(const DenseFn& f, double theta);

// { x : |f(x)| > tol }, encoded, increasing.
std::vector<size_t> support(const DenseFn& f, double tol);

// Exact integer correlation c[x] = sum_y a[y + x] b[y] over G; the integer
// backbone for deciding convolution supports without float ambiguity.
std::vector<int64_t> correlate_counts(const std::vector<int64_t>& a,
                                      const std::vector<int64_t>& b, const Ambient& amb);

}  // namespace bilbog
