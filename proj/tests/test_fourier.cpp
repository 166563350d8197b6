#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "bilbog/fourier.hpp"
#include "doctest.h"

using namespace bilbog;

namespace {

DenseFn random_fn(const Ambient& amb, SplitMix64& rng) {
  DenseFn f(amb);
  for (auto& v : f.v) v = cd(rng.unit() * 2.0 - 1.0, rng.unit() * 2.0 - 1.0);
  return f;
}

double max_err(const DenseFn& a, const DenseFn& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

}  // namespace

TEST_CASE("forward transform: constants and point masses") {
  const Ambient f23(2, 3);
  DenseFn ones = DenseFn::constant(f23, 1.0);
  DenseFn h = dft(ones);
  CHECK(std::abs(h.v[0] - 1.0) < 1e-12);
  for (size_t r = 1; r < 8; ++r) CHECK(std::abs(h.v[r]) < 1e-12);

  const Ambient f21(2, 1);
  DenseFn mass = DenseFn::indicator(f21, {0});
  h = dft(mass);
  CHECK(std::abs(h.v[0] - 0.5) < 1e-12);
  CHECK(std::abs(h.v[1] - 0.5) < 1e-12);

  const Ambient f31(3, 1);
  mass = DenseFn::indicator(f31, {1});
  h = dft(mass);
  for (size_t r = 0; r < 3; ++r) {
    const double ang = -2.0 * std::numbers::pi * double(r) / 3.0;
    CHECK(std::abs(h.v[r] - cd(std::cos(ang), std::sin(ang)) / 3.0) < 1e-12);
  }
}

TEST_CASE("inverse transform: delta, round-trip, linearity") {
  const Ambient f25(2, 5);
  DenseFn delta(f25);
  delta.v[0] = 1.0;
  DenseFn back = idft(delta);
  for (size_t x = 0; x < 32; ++x) CHECK(std::abs(back.v[x] - 1.0) < 1e-12);

  SplitMix64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    DenseFn f = random_fn(f25, rng);
    CHECK(max_err(idft(dft(f)), f) < 1e-9);
  }

  DenseFn f = random_fn(f25, rng), g = random_fn(f25, rng);
  const cd a(0.7, -0.2), b(-1.3, 0.4);
  DenseFn combo(f25);
  for (size_t i = 0; i < 32; ++i) combo.v[i] = a * f.v[i] + b * g.v[i];
  DenseFn lhs = idft(combo);
  DenseFn rf = idft(f), rg = idft(g);
  for (size_t i = 0; i < 32; ++i) CHECK(std::abs(lhs.v[i] - (a * rf.v[i] + b * rg.v[i])) < 1e-9);
}

TEST_CASE("convolution: definition cases and naive agreement") {
  const Ambient f21(2, 1);
  DenseFn ones = DenseFn::constant(f21, 1.0);
  DenseFn c = convolve(ones, ones);
  CHECK(std::abs(c.v[0] - 1.0) < 1e-12);
  CHECK(std::abs(c.v[1] - 1.0) < 1e-12);

  DenseFn mass = DenseFn::indicator(f21, {0});
  c = convolve(mass, mass);
  CHECK(std::abs(c.v[0] - 0.5) < 1e-12);
  CHECK(std::abs(c.v[1]) < 1e-12);

  const Ambient f33(3, 3);
  SplitMix64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    DenseFn f = random_fn(f33, rng), g = random_fn(f33, rng);
    CHECK(max_err(convolve(f, g), convolve_naive(f, g)) < 1e-9);
  }
}

TEST_CASE("convolution theorem") {
  const Ambient amb(3, 3);
  SplitMix64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    DenseFn f = random_fn(amb, rng), g = random_fn(amb, rng);
    DenseFn lhs = dft(convolve(f, g));
    DenseFn fh = dft(f), gh = dft(g);
    for (size_t r = 0; r < amb.size(); ++r)
      CHECK(std::abs(lhs.v[r] - fh.v[r] * std::conj(gh.v[r])) < 1e-9);
  }
}

TEST_CASE("large spectrum: threshold cases") {
  const Ambient f23(2, 3);
  DenseFn ones = DenseFn::constant(f23, 1.0);
  Spectrum s = large_spectrum(ones, 0.5);
  REQUIRE(s.entries.size() == 1);
  CHECK(s.entries[0].first == 0);

  // Hyperplane W = {x : x_0 = 0}: transform of 1_W is 1/2 exactly on W-perp.
  std::vector<size_t> w_pts;
  for (size_t x = 0; x < 8; ++x)
    if ((x & 1) == 0) w_pts.push_back(x);
  DenseFn w_ind = DenseFn::indicator(f23, w_pts);
  s = large_spectrum(w_ind, 0.3);
  REQUIRE(s.entries.size() == 2);
  CHECK(s.entries[0].first == 0);
  CHECK(s.entries[1].first == 1);  // the functional x -> x_0
  CHECK(std::abs(s.entries[0].second - 0.5) < 1e-12);
  CHECK(std::abs(s.entries[1].second - 0.5) < 1e-12);

  CHECK(large_spectrum(ones, 0.0).entries.size() == 8);
}

TEST_CASE("large spectrum: ties at the threshold are included") {
  const Ambient f21(2, 1);
  DenseFn mass = DenseFn::indicator(f21, {0});  // fhat = 1/2 everywhere
  Spectrum s = large_spectrum(mass, 0.5);
  CHECK(s.entries.size() == 2);
}

TEST_CASE("support: empty, full, difference set") {
  const Ambient f22(2, 2);
  CHECK(support(DenseFn(f22), 0.0).empty());
  CHECK(support(DenseFn::constant(f22, 1.0), 0.5).size() == 4);
  DenseFn b = DenseFn::indicator(f22, {0, 1});  // B = {0, e_1}
  std::vector<size_t> supp = support(convolve(b, b), 0.5 / 4.0);
  CHECK(supp == std::vector<size_t>{0, 1});
}

TEST_CASE("Parseval") {
  SplitMix64 rng(8);
  for (const Ambient amb : {Ambient(2, 6), Ambient(3, 3), Ambient(5, 2)}) {
    for (int trial = 0; trial < 10; ++trial) {
      DenseFn f = random_fn(amb, rng);
      DenseFn h = dft(f);
      double sum = 0;
      for (const cd& v : h.v) sum += std::norm(v);
      CHECK(std::abs(sum - f.mean_abs2()) <= 1e-9 * std::max(1.0, f.mean_abs2()));
    }
  }
}

TEST_CASE("fast transform equals naive oracle") {
  SplitMix64 rng(10);
  for (const Ambient amb : {Ambient(2, 8), Ambient(3, 4), Ambient(5, 3)}) {
    for (int trial = 0; trial < 5; ++trial) {
      DenseFn f = random_fn(amb, rng);
      CHECK(max_err(dft(f), dft_naive(f)) < 1e-9);
      CHECK(max_err(idft(f), idft_naive(f)) < 1e-9);
    }
  }
}

TEST_CASE("correlate_counts matches the defining double loop") {
  const Ambient amb(3, 2);
  SplitMix64 rng(12);
  std::vector<int64_t> a(9), b(9);
  for (auto& v : a) v = int64_t(rng.below(5));
  for (auto& v : b) v = int64_t(rng.below(5));
  const std::vector<int64_t> c = correlate_counts(a, b, amb);
  for (size_t x = 0; x < 9; ++x) {
    int64_t want = 0;
    for (size_t y = 0; y < 9; ++y) want += a[idx_add(amb, y, x)] * b[y];
    CHECK(c[x] == want);
  }
}
