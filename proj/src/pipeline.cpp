#include <chrono>
#include <cmath>

#include "bilbog/core.hpp"

namespace bilbog {

namespace {

ContainmentRecord record_subset(const ProductSet& lhs, const ProductSet& rhs) {
  ContainmentRecord rec;
  rec.holds = lhs.is_subset_of(rhs);
  rec.lhs_size = lhs.popcount();
  if (!rec.holds) rec.witnesses = lhs.subset_violations(rhs);
  return rec;
}

ContainmentRecord record_containment(const ContainmentReport& rep) {
  ContainmentRecord rec;
  rec.holds = rep.contained;
  rec.lhs_size = rep.structured_size;
  rec.witnesses = rep.witnesses;
  return rec;
}

}  // namespace

PipelineRun bilinear_bogolyubov(const ProductSet& a, const PipelineConfig& cfg,
                                const std::string& input_label) {
  const auto t_start = std::chrono::steady_clock::now();
  const Ambient amb = a.ambient();
  const size_t n_pts = a.side();
  const int64_t pop = a.popcount();
  if (pop == 0) throw GuardError("bilinear_bogolyubov: the input set is empty");

  Certificate cert;
  cert.input_path = input_label;
  cert.p = amb.p;
  cert.n = amb.n;
  cert.group_size = n_pts;
  cert.popcount = pop;
  cert.c = double(pop) / (double(n_pts) * double(n_pts));
  cert.seed = cfg.seed;
  cert.budget = cfg.ransac_budget;
  cert.k_cap = cfg.k_cap;
  cert.adaptive_t = cfg.adaptive_t_threshold;
  const double c = cert.c;

  // Exact directional pipeline sets.
  PipelineSets sets = pipeline_a3(a, cfg.threads);

  // f(x, y) = (A_{x.} * A_{x.})(y), exact row correlation counts over N.
  std::vector<std::vector<int64_t>> f_counts(n_pts);
  parallel_for(n_pts, cfg.threads, [&](size_t x) {
    std::vector<int64_t> row(n_pts, 0);
    for (size_t y : a.row_indices(x)) row[y] = 1;
    f_counts[x] = correlate_counts(row, row, amb);
  });

  int64_t f_total = 0;
  std::vector<int64_t> col_sums(n_pts, 0);
  for (size_t x = 0; x < n_pts; ++x)
    for (size_t y = 0; y < n_pts; ++y) {
      f_total += f_counts[x][y];
      col_sums[y] += f_counts[x][y];
    }
  const double n3 = double(n_pts) * double(n_pts) * double(n_pts);
  cert.ef.achieved = double(f_total) / n3;  // E f with f = counts / N
  cert.ef.bound = c * c;
  cert.ef.ok = cert.ef.achieved + 1e-12 >= cert.ef.bound;

  // Y = columns of mean at least c^2 / 2.
  const double y_threshold = cfg.y_threshold_override.value_or(c * c / 2.0);
  for (size_t y = 0; y < n_pts; ++y) {
    const double mean = double(col_sums[y]) / (double(n_pts) * double(n_pts));
    if (mean >= y_threshold) cert.y_set.push_back(y);
  }
  cert.y_size.achieved = double(cert.y_set.size());
  cert.y_size.bound = c * c * double(n_pts) / 2.0;
  cert.y_size.ok = cert.y_size.achieved + 1e-9 >= cert.y_size.bound;

  // One-line Bogolyubov bound on every selected column: the spectrum of
  // f_{.y} at |fhat(0)|^{3/2} has at most |fhat(0)|^{-2} entries.
  cert.max_sy_ratio = 0.0;
  std::vector<double> sy_ratio(cert.y_set.size(), 0.0);
  parallel_for(cert.y_set.size(), cfg.threads, [&](size_t yi) {
    const size_t y = cert.y_set[yi];
    DenseFn fy(amb);
    for (size_t x = 0; x < n_pts; ++x)
      fy.v[x] = cd(double(f_counts[x][y]) / double(n_pts), 0.0);
    const double fhat0 = double(col_sums[y]) / (double(n_pts) * double(n_pts));
    const Spectrum sy = large_spectrum(fy, std::pow(fhat0, 1.5));
    sy_ratio[yi] = double(sy.entries.size()) * fhat0 * fhat0;
  });
  for (double r : sy_ratio) cert.max_sy_ratio = std::max(cert.max_sy_ratio, r);
  cert.sy_ok = cert.max_sy_ratio <= 1.0 + 1e-9;

  // Linearize the large column spectra of g built from 1_A.
  cert.xi = cfg.xi_override.value_or(c * c * c / 4.0);
  DenseFn ind(Ambient(amb.p, uint32_t(amb.n) * 2));
  for (size_t x = 0; x < n_pts; ++x)
    for (size_t y = 0; y < n_pts; ++y)
      if (a.test(x, y)) ind.v[x * n_pts + y] = cd(1.0, 0.0);
  LinearityResult fl = fourier_linearity(ind, cert.y_set, cert.xi, cfg);
  cert.fl_certified = fl.certified;
  cert.fl_note = fl.note;
  cert.k = fl.maps.size();
  cert.y_prime = fl.b_prime;
  cert.y_prime_size.achieved = double(fl.b_prime.size());
  cert.y_prime_size.bound = (1.0 - cert.xi) * double(cert.y_set.size());
  cert.y_prime_size.ok = cert.y_prime_size.achieved + 1e-9 >= cert.y_prime_size.bound;
  cert.max_listed_per_y = fl.max_listed_per_y;
  cert.listed_bound = fl.listed_bound;
  cert.listed_ok = double(fl.max_listed_per_y) <= fl.listed_bound + 1e-9;
  cert.rounds = fl.rounds;
  cert.alphas = fl.maps;

  // The variety cut out by the recovered maps, and C = (G x Y') ^ B.
  BohrVariety variety = BohrVariety::from_affine_family(amb, fl.maps);
  cert.variety_codim_upper = variety.codim_upper();
  ProductSet c_set(amb);
  std::vector<char> in_y_prime(n_pts, 0);
  for (size_t y : fl.b_prime) in_y_prime[y] = 1;
  for (size_t x = 0; x < n_pts; ++x) {
    const Coset row = variety.row_coset(x);
    if (row.empty) continue;
    for (size_t y0 : elements_sorted(row.space, cfg.enumeration_guard)) {
      const size_t y = idx_add(amb, y0, row.rep.encode());
      if (in_y_prime[y]) c_set.set(x, y);
    }
  }
  cert.c_set_size = c_set.popcount();
  cert.c_in_a2 = record_subset(c_set, sets.a2);

  // D: row-wise 4-fold supports of C.
  ProductSet d_set = directional_sumdiff_support(c_set, Axis::Row, cfg.threads);
  cert.d_in_a3 = record_subset(d_set, sets.a3);

  // Dense column subspace on S = Y'; c' = |Y'| / N.
  StructuredSet structured{Subspace::zero(amb), Subspace::zero(amb), variety};
  if (!fl.b_prime.empty()) {
    const DenseColumnResult dc =
        dense_column_subspace(amb, fl.b_prime, fl.maps, cfg.k_cap, cfg.enumeration_guard);
    cert.codim_v0 = dc.v0.codim();
    cert.codim_v1 = dc.v1.codim();
    cert.codim_v2 = dc.v2.codim();
    cert.codim_v = dc.v.codim();
    cert.r_size = dc.r_size;
    cert.r_bound = dc.r_bound;
    cert.r_ok = double(dc.r_size) <= dc.r_bound + 1e-9;
    cert.codim_v_check.achieved = double(dc.v.codim());
    cert.codim_v_check.bound = double(dc.codim_bound);
    cert.codim_v_check.ok = dc.codim_ok;
    cert.min_rx = dc.min_rx;
    cert.rx_bound = dc.rx_bound;
    cert.rx_ok = dc.rx_ok;
    cert.min_cx = double(dc.min_rx) / double(n_pts);

    const double pk = std::pow(double(amb.p), double(cert.k));
    cert.codim_v_dilute.achieved = double(dc.v.codim());
    cert.codim_v_dilute.bound = 20.0 * pk * pk * pk / (c * c);
    cert.codim_v_dilute.ok =
        cert.codim_v_dilute.achieved <= cert.codim_v_dilute.bound + 1e-9;

    // Output spectrum T of 1_{Y'}.
    cert.t_threshold_fixed = c * c * c / (24.0 * std::pow(double(amb.p), 1.5 * double(cert.k)));
    cert.t_mode = cfg.adaptive_t_threshold ? "adaptive" : "fixed";
    double t_threshold = cfg.adaptive_t_threshold ? std::pow(cert.min_cx, 1.5)
                                                  : cert.t_threshold_fixed;
    if (cfg.t_threshold_override) t_threshold = *cfg.t_threshold_override;
    cert.t_threshold = t_threshold;
    cert.t_sound = t_threshold <= std::pow(cert.min_cx, 1.5) + 1e-12;
    const Spectrum t_spec = large_spectrum(DenseFn::indicator(amb, fl.b_prime), t_threshold);
    cert.t_size = t_spec.entries.size();
    cert.t_bound = 600.0 * pk * pk * pk / std::pow(c, 6.0);
    cert.t_ok = double(cert.t_size) <= cert.t_bound + 1e-9;

    structured.u = dc.v;
    structured.v = orthogonal_complement(Subspace::span(amb, t_spec.frequencies(amb)));
    structured.variety = variety.linear_part();
  } else {
    cert.fl_certified = false;
    if (cert.fl_note.empty()) cert.fl_note = "no cleared columns";
    structured.variety = variety.linear_part();
  }
  cert.codim_u_out = structured.u.codim();
  cert.codim_tperp = structured.v.codim();
  for (const auto& row : structured.u.rows()) cert.u_basis.push_back(row);
  for (const auto& row : structured.v.rows()) cert.tperp_basis.push_back(row);

  const ContainmentReport in_d = containment_check(structured, d_set, cfg.enumeration_guard);
  cert.s_in_d = record_containment(in_d);
  const ContainmentReport in_a3 = containment_check(structured, sets.a3, cfg.enumeration_guard);
  cert.s_in_a3 = record_containment(in_a3);
  cert.structured_size = in_a3.structured_size;

  cert.pass = cert.ef.ok && cert.y_size.ok && cert.sy_ok && cert.fl_certified &&
              cert.y_prime_size.ok && cert.listed_ok && cert.c_in_a2.holds &&
              cert.d_in_a3.holds && cert.r_ok && cert.codim_v_check.ok &&
              cert.codim_v_dilute.ok && cert.rx_ok && cert.t_sound && cert.t_ok &&
              cert.s_in_d.holds && cert.s_in_a3.holds;

  cert.total_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
  return PipelineRun{std::move(structured), std::move(cert), std::move(sets), std::move(c_set),
                     std::move(d_set)};
}

}  // namespace bilbog
