#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bilbog/core.hpp"

namespace bilbog {

LineBogolyubov bogolyubov_line(const DenseFn& f, int64_t denominator) {
  const Ambient amb = f.amb;
  const size_t n_pts = amb.size();
  if (denominator <= 0) throw MismatchError("bogolyubov_line: denominator must be positive");
  // Overflow guard for the exact 4-fold correlation: values reach N^3 D^4.
  const double worst = std::pow(double(n_pts), 3.0) * std::pow(double(denominator), 4.0);
  if (worst > 0x1p62) throw GuardError("bogolyubov_line: N^3 D^4 exceeds the integer range");

  std::vector<int64_t> num(n_pts);
  for (size_t x = 0; x < n_pts; ++x) {
    const double scaled = f.v[x].real() * double(denominator);
    num[x] = llround(scaled);
    if (std::abs(f.v[x].imag()) > 1e-12 || std::abs(scaled - double(num[x])) > 1e-6 ||
        num[x] < 0 || num[x] > denominator)
      throw MismatchError("bogolyubov_line: f is not rational over the given denominator");
  }

  LineBogolyubov out{Spectrum{}, Subspace::full(amb), {}, false};
  const double fhat0 = double(std::accumulate(num.begin(), num.end(), int64_t(0))) /
                       (double(denominator) * double(n_pts));
  if (fhat0 <= 0.0) {
    out.degenerate = true;
    out.s.threshold = 0.0;
    return out;
  }

  const double theta = std::pow(fhat0, 1.5);
  out.s = large_spectrum(f, theta);
  std::vector<GVector> freqs = out.s.frequencies(amb);
  out.s_perp = orthogonal_complement(Subspace::span(amb, freqs));

  const std::vector<int64_t> g = correlate_counts(num, num, amb);
  const std::vector<int64_t> h4 = correlate_counts(g, g, amb);
  for (size_t x = 0; x < n_pts; ++x)
    if (h4[x] != 0) out.supp4.push_back(x);
  return out;
}

int64_t additive_quadruples(const Ambient& amb,
                            const std::vector<std::pair<size_t, size_t>>& phi) {
  const size_t n_pts = amb.size();
  if (phi.size() > (size_t(1) << 12))
    throw GuardError("additive_quadruples: domain too large for the pair table");
  std::vector<uint64_t> keys;
  keys.reserve(phi.size() * phi.size());
  for (const auto& [a, fa] : phi)
    for (const auto& [b, fb] : phi)
      keys.push_back(uint64_t(idx_add(amb, a, b)) * n_pts + idx_add(amb, fa, fb));
  std::sort(keys.begin(), keys.end());
  int64_t total = 0;
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    total += int64_t(j - i) * int64_t(j - i);
    i = j;
  }
  return total;
}

namespace {

// Fast agreement scoring. For p = 2 the encoded index is the coordinate bit
// mask, so L y is n parities.
struct CompiledAffine {
  const Ambient amb;
  bool p2;
  std::vector<uint64_t> row_masks;
  uint64_t t_bits = 0;
  const AffineEndo* generic;

  CompiledAffine(const Ambient& a, const AffineEndo& m) : amb(a), p2(a.p == 2), generic(&m) {
    if (!p2) return;
    row_masks.resize(amb.n);
    for (uint32_t i = 0; i < amb.n; ++i) {
      uint64_t mask = 0;
      for (uint32_t j = 0; j < amb.n; ++j)
        if (m.linear.at(i, j)) mask |= uint64_t(1) << j;
      row_masks[i] = mask;
    }
    t_bits = m.translation.encode();
  }

  size_t apply(size_t y) const {
    if (!p2) return generic->apply_idx(y);
    uint64_t out = t_bits;
    for (uint32_t i = 0; i < amb.n; ++i)
      out ^= uint64_t(__builtin_parityll(row_masks[i] & y)) << i;
    return out;
  }
};

int64_t score_agreement(const Ambient& amb, const AffineEndo& map,
                        const std::vector<std::pair<size_t, size_t>>& phi) {
  const CompiledAffine ca(amb, map);
  int64_t agree = 0;
  for (const auto& [y, r] : phi)
    if (ca.apply(y) == r) ++agree;
  return agree;
}

int resolved_min_agreement(const Ambient& amb, size_t dom_size, int requested) {
  if (requested > 0) return requested;
  return int(std::min<size_t>(dom_size, size_t(amb.n) + 2));
}

}  // namespace

std::optional<AffineFit> ransac_affine(const Ambient& amb,
                                       const std::vector<std::pair<size_t, size_t>>& phi,
                                       int budget, uint64_t seed, int min_agreement,
                                       unsigned threads) {
  if (budget <= 0 || phi.empty()) return std::nullopt;
  const size_t sample_size = std::min<size_t>(phi.size(), size_t(amb.n) + 1);
  const int need = resolved_min_agreement(amb, phi.size(), min_agreement);

  // Samples are drawn sequentially so the hypothesis list is seed-determined;
  // scoring then parallelizes and the reduction below is order-fixed.
  SplitMix64 rng(seed);
  std::vector<uint32_t> samples(size_t(budget) * sample_size);
  std::vector<uint32_t> pool(phi.size());
  for (int it = 0; it < budget; ++it) {
    for (size_t i = 0; i < pool.size(); ++i) pool[i] = uint32_t(i);
    for (size_t i = 0; i < sample_size; ++i) {
      const size_t j = i + size_t(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      samples[size_t(it) * sample_size + i] = pool[i];
    }
  }

  std::vector<int64_t> agreement(size_t(budget), -1);
  parallel_for(size_t(budget), threads, [&](size_t it) {
    std::vector<std::pair<GVector, GVector>> pts;
    pts.reserve(sample_size);
    for (size_t i = 0; i < sample_size; ++i) {
      const auto& [y, r] = phi[samples[it * sample_size + i]];
      pts.emplace_back(GVector::decode(amb, y), GVector::decode(amb, r));
    }
    const std::optional<AffineEndo> fit = solve_affine_from_points(amb, pts);
    if (fit) agreement[it] = score_agreement(amb, *fit, phi);
  });

  int64_t best = -1;
  for (int64_t a : agreement) best = std::max(best, a);
  if (best < need) return std::nullopt;

  // Among the top-agreement hypotheses keep the smallest encoded map.
  std::optional<AffineFit> out;
  std::vector<uint8_t> best_key;
  for (size_t it = 0; it < size_t(budget); ++it) {
    if (agreement[it] != best) continue;
    std::vector<std::pair<GVector, GVector>> pts;
    for (size_t i = 0; i < sample_size; ++i) {
      const auto& [y, r] = phi[samples[it * sample_size + i]];
      pts.emplace_back(GVector::decode(amb, y), GVector::decode(amb, r));
    }
    AffineEndo map = *solve_affine_from_points(amb, pts);
    std::vector<uint8_t> key = map.encode_key();
    if (!out || key < best_key) {
      out = AffineFit{std::move(map), best};
      best_key = std::move(key);
    }
  }
  return out;
}

bool exhaustive_affine_available(const Ambient& amb) {
  double count = 1.0;
  for (uint32_t i = 0; i < uint32_t(amb.n) * amb.n + amb.n; ++i) {
    count *= amb.p;
    if (count > double(size_t(1) << 20)) return false;
  }
  return true;
}

std::optional<AffineFit> exhaustive_affine(const Ambient& amb,
                                           const std::vector<std::pair<size_t, size_t>>& phi,
                                           int min_agreement) {
  if (!exhaustive_affine_available(amb))
    throw GuardError("exhaustive_affine: p^(n^2+n) exceeds 2^20");
  if (phi.empty()) return std::nullopt;
  const int need = resolved_min_agreement(amb, phi.size(), min_agreement);
  const uint32_t digits = uint32_t(amb.n) * amb.n + amb.n;

  // Odometer over the encode_key digits, most significant first, so maps
  // appear in increasing key order and "first best" is the canonical winner.
  std::vector<uint8_t> key(digits, 0);
  std::optional<AffineFit> out;
  for (;;) {
    FpMatrix l(amb);
    std::copy(key.begin(), key.begin() + size_t(amb.n) * amb.n, l.a.begin());
    GVector t(amb, std::vector<uint8_t>(key.end() - amb.n, key.end()));
    AffineEndo map(std::move(l), std::move(t));
    const int64_t agree = score_agreement(amb, map, phi);
    if (agree >= need && (!out || agree > out->agreement))
      out = AffineFit{std::move(map), agree};

    uint32_t pos = digits;
    while (pos > 0) {
      --pos;
      if (++key[pos] < amb.p) break;
      key[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

LinearityResult fourier_linearity(const DenseFn& f2d, const std::vector<size_t>& b, double xi,
                                  const PipelineConfig& cfg) {
  if (f2d.amb.n % 2 != 0)
    throw MismatchError("fourier_linearity: table must live on G x G (even digit count)");
  const Ambient amb(f2d.amb.p, f2d.amb.n / 2);
  const size_t n_pts = amb.size();
  if (xi <= 0.0) throw MismatchError("fourier_linearity: xi must be positive");

  // g(x, .) = f_{x.} * f_{x.}, rows transformed independently.
  std::vector<cd> g(n_pts * n_pts);
  parallel_for(n_pts, cfg.threads, [&](size_t x) {
    std::vector<cd> row(f2d.v.begin() + ptrdiff_t(x * n_pts),
                        f2d.v.begin() + ptrdiff_t((x + 1) * n_pts));
    dft_inplace(row, amb, false);
    for (cd& z : row) z = cd(std::norm(z), 0.0);
    dft_inplace(row, amb, true);
    std::copy(row.begin(), row.end(), g.begin() + ptrdiff_t(x * n_pts));
  });

  // Large column coefficients, per y in b.
  LinearityResult res;
  res.listed_bound = 1.0 / (xi * xi);
  std::vector<std::vector<uint32_t>> listed(b.size());
  parallel_for(b.size(), cfg.threads, [&](size_t bi) {
    const size_t y = b[bi];
    std::vector<cd> col(n_pts);
    for (size_t x = 0; x < n_pts; ++x) col[x] = g[x * n_pts + y];
    dft_inplace(col, amb, false);
    for (size_t r = 0; r < n_pts; ++r)
      if (std::abs(col[r]) >= xi) listed[bi].push_back(uint32_t(r));
  });
  const std::vector<std::vector<uint32_t>> listed_orig = listed;
  for (const auto& l : listed) res.max_listed_per_y = std::max(res.max_listed_per_y, l.size());

  auto active_count = [&] {
    size_t c = 0;
    for (const auto& l : listed) c += !l.empty();
    return c;
  };

  res.certified = true;
  size_t round_index = 0;
  while (double(active_count()) > xi * double(b.size())) {
    if (int(res.maps.size()) >= cfg.k_cap) {
      res.certified = false;
      res.note = "k cap reached before the active set shrank below xi |B|";
      break;
    }
    // sigma: each active column contributes its smallest unexplained r.
    std::vector<std::pair<size_t, size_t>> sigma;
    for (size_t bi = 0; bi < b.size(); ++bi)
      if (!listed[bi].empty()) sigma.emplace_back(b[bi], listed[bi].front());

    LinearityRound round;
    round.sigma_size = sigma.size();
    round.sigma_quadruples = additive_quadruples(amb, sigma);

    const uint64_t round_seed = mix_seed(cfg.seed, round_index);
    std::optional<AffineFit> fit;
    if (cfg.ransac_exhaustive && exhaustive_affine_available(amb))
      fit = exhaustive_affine(amb, sigma, cfg.ransac_min_agreement);
    else
      fit = ransac_affine(amb, sigma, cfg.ransac_budget, round_seed, cfg.ransac_min_agreement,
                          cfg.threads);
    if (!fit) {
      res.certified = false;
      res.note = "affine search failed on the remaining sigma map";
      break;
    }

    const CompiledAffine ca(amb, fit->map);
    size_t removed = 0;
    for (size_t bi = 0; bi < b.size(); ++bi) {
      if (listed[bi].empty()) continue;
      const uint32_t r = uint32_t(ca.apply(b[bi]));
      auto it = std::lower_bound(listed[bi].begin(), listed[bi].end(), r);
      if (it != listed[bi].end() && *it == r) {
        listed[bi].erase(it);
        ++removed;
      }
    }
    round.agreement = fit->agreement;
    round.removed = removed;
    round.map_key = fit->map.encode_key();
    res.rounds.push_back(std::move(round));
    res.maps.push_back(std::move(fit->map));
    ++round_index;
    if (removed == 0) {
      res.certified = false;
      res.note = "selected map explained no remaining coefficient";
      break;
    }
  }

  for (size_t bi = 0; bi < b.size(); ++bi)
    if (listed[bi].empty()) res.b_prime.push_back(b[bi]);

  // Coverage re-check against the original lists: every large coefficient of
  // a cleared column must be hit by some recovered map.
  for (size_t bi = 0; bi < b.size() && res.certified; ++bi) {
    if (!listed[bi].empty()) continue;
    for (uint32_t r : listed_orig[bi]) {
      bool hit = false;
      for (const AffineEndo& al : res.maps)
        if (al.apply_idx(b[bi]) == r) {
          hit = true;
          break;
        }
      if (!hit) {
        res.certified = false;
        res.note = "coverage re-check failed";
        break;
      }
    }
  }
  if (res.certified &&
      double(res.b_prime.size()) + 1e-9 < (1.0 - xi) * double(b.size())) {
    res.certified = false;
    res.note = "cleared column count fell short of (1 - xi)|B|";
  }
  return res;
}

DenseFn masked_coset_spectrum_all(const DenseFn& chi, const GVector& u0, const Subspace& w) {
  const Ambient amb = chi.amb;
  if (!(u0.amb == amb) || !(w.ambient() == amb))
    throw MismatchError("masked_coset_spectrum: ambient mismatch");
  const DenseFn chihat = dft(chi);
  const Subspace wperp = orthogonal_complement(w);
  const std::vector<size_t> dual = elements_sorted(wperp);
  const size_t u0i = u0.encode();
  DenseFn out(amb);
  for (size_t r = 0; r < amb.size(); ++r) {
    cd acc(0.0, 0.0);
    for (size_t s : dual) {
      const double ang =
          2.0 * std::numbers::pi * double(idx_dot(amb, u0i, s)) / double(amb.p);
      acc += std::polar(1.0, ang) * chihat.v[idx_add(amb, r, s)];
    }
    out.v[r] = acc / double(dual.size());
  }
  return out;
}

cd masked_coset_spectrum(const DenseFn& chi, const GVector& u0, const Subspace& w,
                         const GVector& r) {
  const Ambient amb = chi.amb;
  if (!(r.amb == amb)) throw MismatchError("masked_coset_spectrum: ambient mismatch");
  const DenseFn chihat = dft(chi);
  const Subspace wperp = orthogonal_complement(w);
  const size_t u0i = u0.encode();
  const size_t ri = r.encode();
  cd acc(0.0, 0.0);
  size_t count = 0;
  for (size_t s : elements_sorted(wperp)) {
    const double ang = 2.0 * std::numbers::pi * double(idx_dot(amb, u0i, s)) / double(amb.p);
    acc += std::polar(1.0, ang) * chihat.v[idx_add(amb, ri, s)];
    ++count;
  }
  return acc / double(count);
}

DenseColumnResult dense_column_subspace(const Ambient& amb, const std::vector<size_t>& s,
                                        const std::vector<AffineEndo>& alphas, int k_cap,
                                        size_t guard) {
  const size_t k = alphas.size();
  const size_t n_pts = amb.size();
  if (int(k) > k_cap) {
    double budget = 1.0;
    for (size_t i = 0; i < k; ++i) budget *= amb.p;
    throw GuardError("dense_column_subspace: k = " + std::to_string(k) + " exceeds the cap " +
                     std::to_string(k_cap) + " (p^k = " + std::to_string(budget) +
                     " lambda combinations)");
  }
  if (s.empty()) throw GuardError("dense_column_subspace: S is empty");
  const double c = double(s.size()) / double(n_pts);
  const double pk = std::pow(double(amb.p), double(k));

  DenseColumnResult out{Subspace::full(amb), Subspace::full(amb), Subspace::full(amb),
                        Subspace::full(amb), 0, 0.0, 0, 0.0, false, 0, false};

  // V0 kills the translations, so the forms restricted to V0 are bilinear.
  std::vector<GVector> translations;
  for (const AffineEndo& al : alphas) translations.push_back(al.translation);
  out.v0 = orthogonal_complement(Subspace::span(amb, translations));

  // Frequencies of 1_S at height c / (2 p^k); V1 avoids them inside V0.
  const double r_threshold = c / (2.0 * pk);
  const Spectrum r_spec = large_spectrum(DenseFn::indicator(amb, s), r_threshold);
  out.r_size = r_spec.entries.size();
  out.r_bound = 4.0 * pk * pk / c;
  out.v1 = greedy_avoiding_subspace(out.v0, r_spec.frequencies(amb));

  // V2 pulls V1 back through every lambda-combination of the adjoints.
  out.v2 = Subspace::full(amb);
  std::vector<uint8_t> lambda(k, 0);
  for (;;) {
    FpMatrix comb(amb);
    for (size_t i = 0; i < k; ++i) comb.add_scaled(alphas[i].adjoint(), lambda[i]);
    out.v2 = intersect(out.v2, preimage_subspace(comb, out.v1));
    size_t pos = k;
    bool done = k == 0;
    while (pos > 0) {
      --pos;
      if (++lambda[pos] < amb.p) break;
      lambda[pos] = 0;
      if (pos == 0) done = true;
    }
    if (done) break;
  }

  // The pullbacks do not force membership in V0 when some adjoint combination
  // vanishes, so the guarantee needs the explicit intersection with V0.
  out.v = intersect(out.v0, out.v2);

  const double bound_raw = pk * (double(k) + out.r_bound);
  out.codim_bound = size_t(std::min(double(amb.n), bound_raw));
  out.codim_ok = out.v.codim() <= out.codim_bound;

  // Exhaustive row-count check: every x in V must meet >= c N / (2 p^k)
  // columns y in S on the variety.
  out.rx_bound = c * double(n_pts) / (2.0 * pk);
  out.min_rx = int64_t(n_pts) + 1;
  for (size_t x : elements_sorted(out.v, guard)) {
    const GVector vx = GVector::decode(amb, x);
    std::vector<size_t> normals;
    std::vector<uint8_t> offsets;
    for (const AffineEndo& al : alphas) {
      normals.push_back(al.adjoint().apply(vx).encode());
      offsets.push_back(vx.dot(al.translation));
    }
    int64_t rx = 0;
    for (size_t y : s) {
      bool on = true;
      for (size_t i = 0; i < normals.size() && on; ++i)
        on = (uint32_t(idx_dot(amb, normals[i], y)) + offsets[i]) % amb.p == 0;
      rx += on;
    }
    out.min_rx = std::min(out.min_rx, rx);
  }
  out.rx_ok = double(out.min_rx) + 1e-9 >= out.rx_bound;
  return out;
}

}  // namespace bilbog
