#pragma once

// The certified pipeline and its stage operations. Every guarantee the
// output claims is re-checked here with exact arithmetic and recorded in the
// Certificate; pass means every recorded check held, nothing is assumed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bilbog/bohr.hpp"
#include "bilbog/fourier.hpp"
#include "bilbog/fp_linalg.hpp"
#include "bilbog/product_set.hpp"

namespace bilbog {

struct PipelineConfig {
  uint64_t seed = 1;
  unsigned threads = 1;
  int ransac_budget = 10000;
  // 0 = auto: min(|domain|, n + 2).
  int ransac_min_agreement = 0;
  bool ransac_exhaustive = false;
  int k_cap = 6;
  // Spectrum threshold for the output component T: false = fixed dilution
  // threshold c^3 / (24 p^{3k/2}), true = (min_x C_x)^{3/2} measured on V.
  bool adaptive_t_threshold = false;
  std::optional<double> xi_override;
  std::optional<double> y_threshold_override;
  std::optional<double> t_threshold_override;
  size_t enumeration_guard = size_t(1) << 24;
};

// One-line Bogolyubov step for f : G -> [0, 1] with exactly representable
// values f(x) = m(x) / denominator. S is the spectrum at |fhat(0)|^{3/2}
// (ties included); supp4 is the support of (f*f)*(f*f) decided by integer
// correlations, so S^perp subset supp4 is checkable without float ambiguity.
struct LineBogolyubov {
  Spectrum s;
  Subspace s_perp;
  std::vector<size_t> supp4;
  bool degenerate = false;  // f identically zero
};

LineBogolyubov bogolyubov_line(const DenseFn& f, int64_t denominator);

// Ordered 4-tuples (a, b, c, d) from the domain of phi with a + b = c + d and
// phi(a) + phi(b) = phi(c) + phi(d). Absolute count, no normalization.
int64_t additive_quadruples(const Ambient& amb, const std::vector<std::pair<size_t, size_t>>& phi);

struct AffineFit {
  AffineEndo map;
  int64_t agreement = 0;
};

// Seeded sampling search for an affine map agreeing with phi on many points.
// Ties break toward the smallest encode_key(). Returns nothing if no sampled
// hypothesis reaches min_agreement (0 = auto) or the budget is non-positive.
std::optional<AffineFit> ransac_affine(const Ambient& amb,
                                       const std::vector<std::pair<size_t, size_t>>& phi,
                                       int budget, uint64_t seed, int min_agreement = 0,
                                       unsigned threads = 1);

// Scores every affine map; only allowed when p^(n^2 + n) <= 2^20.
bool exhaustive_affine_available(const Ambient& amb);
std::optional<AffineFit> exhaustive_affine(const Ambient& amb,
                                           const std::vector<std::pair<size_t, size_t>>& phi,
                                           int min_agreement = 0);

struct LinearityRound {
  size_t sigma_size = 0;
  int64_t sigma_quadruples = 0;  // absolute ordered-quadruple count on sigma
  int64_t agreement = 0;
  size_t removed = 0;
  std::vector<uint8_t> map_key;
};

struct LinearityResult {
  std::vector<size_t> b_prime;   // cleared columns, increasing
  std::vector<AffineEndo> maps;  // alpha_1 .. alpha_k in discovery order
  bool certified = false;
  std::string note;              // why certification failed, if it did
  size_t max_listed_per_y = 0;
  double listed_bound = 0.0;     // xi^{-2}
  std::vector<LinearityRound> rounds;
};

// For f on G x G (index enc(x) * N + enc(y), |f| <= 1) forms
// g(x, y) = (f_{x.} * f_{x.})(y) and iteratively explains every column
// coefficient |ghat_{.y}(r)| >= xi for y in b by affine maps r = alpha_i(y).
// Certified means: |b_prime| >= (1 - xi)|b| and the coverage re-check passed.
LinearityResult fourier_linearity(const DenseFn& f2d, const std::vector<size_t>& b, double xi,
                                  const PipelineConfig& cfg);

// Transform of chi restricted to the coset u0 + w, evaluated at r through the
// subgroup identity: |W^perp|^{-1} sum_{s in W^perp} w^{u0.s} chihat(r + s).
cd masked_coset_spectrum(const DenseFn& chi, const GVector& u0, const Subspace& w,
                         const GVector& r);
// Same value for every r at the cost of one transform.
DenseFn masked_coset_spectrum_all(const DenseFn& chi, const GVector& u0, const Subspace& w);

struct DenseColumnResult {
  Subspace v;
  Subspace v0, v1, v2;
  size_t r_size = 0;       // |{ r : |Shat(r)| >= c / (2 p^k) }|
  double r_bound = 0.0;    // 4 c^{-1} p^{2k}
  int64_t min_rx = 0;      // min over x in V of |{ y in S : x in B_{.y} }|
  double rx_bound = 0.0;   // c N / (2 p^k)
  bool rx_ok = false;
  size_t codim_bound = 0;  // min(n, p^k (k + 4 c^{-1} p^{2k}))
  bool codim_ok = false;
};

// Subspace V of columns x whose row count through the variety of the alphas
// stays >= c N / (2 p^k) for every x in V, c = |s| / N. The guarantee is
// checked exhaustively on every call. Throws GuardError when k > k_cap.
DenseColumnResult dense_column_subspace(const Ambient& amb, const std::vector<size_t>& s,
                                        const std::vector<AffineEndo>& alphas, int k_cap = 6,
                                        size_t guard = size_t(1) << 24);

struct BoundCheck {
  double achieved = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct ContainmentRecord {
  bool holds = false;
  int64_t lhs_size = 0;
  std::vector<std::pair<size_t, size_t>> witnesses;
};

struct Certificate {
  // Input.
  std::string input_path;
  uint32_t p = 0, n = 0;
  size_t group_size = 0;
  int64_t popcount = 0;
  double c = 0.0;  // density of A

  // Config echo (thread count deliberately omitted: certificates emitted
  // with the same seed must be byte-identical for every thread count).
  uint64_t seed = 0;
  int budget = 0;
  int k_cap = 0;
  bool adaptive_t = false;

  // Stage: row autocorrelation mean.
  BoundCheck ef;  // E f >= c^2

  // Stage: dense columns.
  std::vector<size_t> y_set;
  BoundCheck y_size;  // |Y| >= c^2 N / 2

  // Stage: per-column one-line Bogolyubov bound, worst case over Y.
  double max_sy_ratio = 0.0;  // max_y |S_y| * fhat_{.y}(0)^2
  bool sy_ok = false;

  // Stage: linearization of large column spectra.
  double xi = 0.0;
  bool fl_certified = false;
  std::string fl_note;
  size_t k = 0;
  std::vector<size_t> y_prime;
  BoundCheck y_prime_size;  // |Y'| >= (1 - xi)|Y|
  size_t max_listed_per_y = 0;
  double listed_bound = 0.0;
  bool listed_ok = false;
  std::vector<LinearityRound> rounds;
  std::vector<AffineEndo> alphas;

  // Stage: variety and the exactly verified containments.
  size_t variety_codim_upper = 0;
  int64_t c_set_size = 0;
  ContainmentRecord c_in_a2;

  // Stage: dense column subspace.
  size_t codim_v0 = 0, codim_v1 = 0, codim_v2 = 0, codim_v = 0;
  size_t r_size = 0;
  double r_bound = 0.0;
  bool r_ok = false;
  BoundCheck codim_v_check;   // codim V <= min(n, p^k (k + 4 c'^{-1} p^{2k}))
  BoundCheck codim_v_dilute;  // codim V vs 20 c^{-2} p^{3k}
  int64_t min_rx = 0;
  double rx_bound = 0.0;
  bool rx_ok = false;
  double min_cx = 0.0;  // min_rx / N

  // Stage: output spectrum T on Y'.
  std::string t_mode;  // "fixed" or "adaptive"
  double t_threshold = 0.0;
  double t_threshold_fixed = 0.0;  // c^3 / (24 p^{3k/2})
  bool t_sound = false;            // t_threshold <= min_cx^{3/2}
  size_t t_size = 0;
  double t_bound = 0.0;  // 600 c^{-6} p^{3k}
  bool t_ok = false;

  // Output shape. Basis rows are RREF, enough to rebuild the structured set.
  size_t codim_u_out = 0, codim_tperp = 0;
  std::vector<std::vector<uint8_t>> u_basis;
  std::vector<std::vector<uint8_t>> tperp_basis;
  int64_t structured_size = 0;
  ContainmentRecord s_in_d, d_in_a3, s_in_a3;

  bool pass = false;

  // Wall-clock only; never serialized (see seed note above).
  double total_ms = 0.0;
};

struct PipelineRun {
  StructuredSet structured;
  Certificate cert;
  PipelineSets sets;  // A1, A2, A3
  ProductSet c_set;   // (G x Y') ^ B
  ProductSet d_set;   // row-wise 4-fold supports of c_set
};

// The full certified run: directional convolutions, column selection,
// linearization, variety extraction, dense column subspace, output spectrum,
// and exact containment verification of (U x T^perp) ^ B^L inside A3.
PipelineRun bilinear_bogolyubov(const ProductSet& a, const PipelineConfig& cfg,
                                const std::string& input_label = "");

// Serialization of certificates: a human-readable report and a byte-stable
// JSON record (the record round-trips everything verify needs).
std::string certificate_report(const Certificate& cert);
std::string certificate_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

// Rebuilds the structured set recorded in a certificate.
StructuredSet structured_from_certificate(const Certificate& cert);

}  // namespace bilbog
