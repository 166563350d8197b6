#pragma once

// Bilinear Bohr varieties: common zero sets of biaffine forms
//   beta_i(x, y) = x^T M_i y + a_i . x + b_i . y + c_i
// on G x G. Families built from affine maps alpha_i (forms x . alpha_i(y))
// have b_i = 0, c_i = 0; that shape is called theorem form here.

#include <cstdint>
#include <string>
#include <vector>

#include "bilbog/fp_linalg.hpp"
#include "bilbog/product_set.hpp"

namespace bilbog {

struct BiaffineForm {
  FpMatrix m;
  GVector a, b;
  uint8_t c = 0;

  uint8_t eval(const GVector& x, const GVector& y) const;
};

class BohrVariety {
 public:
  BohrVariety(const Ambient& amb, std::vector<BiaffineForm> forms);

  // Forms x . alpha_i(y): M_i is the linear part of alpha_i, a_i its
  // translation, b_i = 0, c_i = 0.
  static BohrVariety from_affine_family(const Ambient& amb,
                                        const std::vector<AffineEndo>& alphas);

  const Ambient& ambient() const { return amb_; }
  size_t k() const { return forms_.size(); }
  const std::vector<BiaffineForm>& forms() const { return forms_; }
  bool theorem_form() const { return theorem_form_; }

  // Keeps only the bilinear kernels x^T M_i y. Only defined in theorem form.
  BohrVariety linear_part() const;

  bool member(const GVector& x, const GVector& y) const;
  bool member_idx(size_t x, size_t y) const;

  // { y : (x, y) in B } for fixed x; an affine solution coset (or empty).
  Coset row_coset(size_t x) const;

  // Number of independent constraints the forms can impose: min(k, rank of
  // the stacked coefficient vectors).
  size_t codim_upper() const;

  ProductSet to_grid() const;

  // Text format: "p n k", then per form n matrix rows, then a, b, and c.
  std::string to_text() const;
  static BohrVariety from_text(const std::string& text);

  bool operator==(const BohrVariety& o) const;

 private:
  Ambient amb_;
  std::vector<BiaffineForm> forms_;
  bool theorem_form_;
};

// (U x V) ^ B: the certified output shape of the pipeline.
struct StructuredSet {
  Subspace u;
  Subspace v;
  BohrVariety variety;
};

// All (x, y) in the structured set, in increasing (x, y) order.
// Guarded: |U| * |V| must stay within `guard` pairs.
std::vector<std::pair<size_t, size_t>> enumerate_structured(const StructuredSet& s,
                                                            size_t guard = size_t(1) << 24);

struct ContainmentReport {
  bool contained = true;
  int64_t structured_size = 0;
  // First violations in increasing order, at most 10 kept.
  std::vector<std::pair<size_t, size_t>> witnesses;
};

ContainmentReport containment_check(const StructuredSet& s, const ProductSet& a,
                                    size_t guard = size_t(1) << 24);

}  // namespace bilbog
