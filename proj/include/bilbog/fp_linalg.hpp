#pragma once

// Exact linear algebra over G = F_p^n: vectors, subspaces in reduced row
// echelon form, affine endomorphisms, cosets. Everything is integer
// arithmetic mod p; no floating point enters here.
//
// Group elements are also handled as encoded indices in [0, p^n), written
// little-endian base p: coordinate 0 is the least significant digit.

#include <cstdint>
#include <optional>
#include <vector>

#include "bilbog/common.hpp"

namespace bilbog {

struct Ambient {
  uint16_t p = 2;
  uint16_t n = 1;

  Ambient() = default;
  Ambient(uint32_t p_, uint32_t n_);

  size_t size() const;  // p^n, guarded against overflow
  bool operator==(const Ambient&) const = default;
};

uint8_t mod_inverse(uint8_t a, uint16_t p);

// Index arithmetic on encoded group elements (hot paths avoid decoding).
size_t idx_add(const Ambient& amb, size_t a, size_t b);
size_t idx_sub(const Ambient& amb, size_t a, size_t b);
size_t idx_neg(const Ambient& amb, size_t a);
uint8_t idx_dot(const Ambient& amb, size_t a, size_t b);  // standard bilinear form
uint8_t idx_digit(const Ambient& amb, size_t x, uint32_t i);

struct GVector {
  Ambient amb;
  std::vector<uint8_t> c;  // length n, residues in [0, p)

  GVector() = default;
  GVector(Ambient a, std::vector<uint8_t> coords);

  static GVector zero(const Ambient& amb);
  static GVector unit(const Ambient& amb, uint32_t i);
  static GVector decode(const Ambient& amb, size_t idx);
  size_t encode() const;

  bool is_zero() const;
  GVector operator+(const GVector& o) const;
  GVector operator-(const GVector& o) const;
  GVector negated() const;
  GVector scaled(uint8_t lambda) const;
  uint8_t dot(const GVector& o) const;
  bool operator==(const GVector&) const = default;
};

// Square matrix over F_p acting on G, row-major.
struct FpMatrix {
  Ambient amb;
  std::vector<uint8_t> a;  // n*n entries

  FpMatrix() = default;
  explicit FpMatrix(Ambient ambient);

  static FpMatrix identity(const Ambient& amb);

  uint8_t& at(uint32_t i, uint32_t j) { return a[size_t(i) * amb.n + j]; }
  uint8_t at(uint32_t i, uint32_t j) const { return a[size_t(i) * amb.n + j]; }

  GVector apply(const GVector& x) const;
  size_t apply_idx(size_t x) const;
  FpMatrix transposed() const;
  // this += lambda * o
  void add_scaled(const FpMatrix& o, uint8_t lambda);
  bool is_zero() const;
  bool operator==(const FpMatrix&) const = default;
};

// Subspace of G held in reduced row echelon form; the RREF basis is the
// canonical representative, so operator== is plain row comparison.
class Subspace {
 public:
  static Subspace zero(const Ambient& amb);
  static Subspace full(const Ambient& amb);
  static Subspace span(const Ambient& amb, const std::vector<GVector>& gens);

  const Ambient& ambient() const { return amb_; }
  size_t dim() const { return rows_.size(); }
  size_t codim() const { return amb_.n - rows_.size(); }
  const std::vector<std::vector<uint8_t>>& rows() const { return rows_; }
  std::vector<GVector> basis() const;

  bool contains(const GVector& v) const;
  bool contains_idx(size_t idx) const;
  // Eliminates pivot coordinates of v against the basis; the residual is the
  // canonical coset representative of v + this.
  std::vector<uint8_t> reduce(std::vector<uint8_t> v) const;

  bool operator==(const Subspace& o) const { return amb_ == o.amb_ && rows_ == o.rows_; }

 private:
  Ambient amb_;
  std::vector<std::vector<uint8_t>> rows_;
  std::vector<uint32_t> pivots_;
  friend Subspace subspace_from_rref(const Ambient&, std::vector<std::vector<uint8_t>>,
                                     std::vector<uint32_t>);
};

Subspace orthogonal_complement(const Subspace& s);
Subspace intersect(const Subspace& a, const Subspace& b);
// { x : L x in s }
Subspace preimage_subspace(const FpMatrix& l, const Subspace& s);

// Largest-effort subspace of v0 meeting r only at 0, built by intersecting
// one deterministic hyperplane per offending element: the functional x -> x.r
// when r.r != 0, otherwise the first coordinate functional that is nonzero on
// r and not already a pivot of the chosen functionals. Each step costs
// codimension at most 1, so codim within v0 is at most |r \ {0}|.
Subspace greedy_avoiding_subspace(const Subspace& v0, const std::vector<GVector>& r);

// Encoded elements of s in increasing order. Guarded.
std::vector<size_t> elements_sorted(const Subspace& s, size_t guard = size_t(1) << 24);

// Coset rep + W with canonical representative (reduced mod W), or empty.
struct Coset {
  bool empty = true;
  Subspace space;
  GVector rep;

  static Coset empty_coset(const Ambient& amb);
  static Coset of(Subspace w, const GVector& rep);
  bool contains(const GVector& v) const;
  bool contains_idx(size_t idx) const;
};

// Affine endomorphism y -> L y + t of G.
struct AffineEndo {
  FpMatrix linear;
  GVector translation;

  AffineEndo() = default;
  AffineEndo(FpMatrix l, GVector t);

  static AffineEndo zero(const Ambient& amb);
  static AffineEndo constant(const GVector& t);

  const Ambient& ambient() const { return linear.amb; }
  GVector operator()(const GVector& y) const;
  size_t apply_idx(size_t y) const;
  AffineEndo linearization() const;  // drops the translation
  FpMatrix adjoint() const;          // transpose of the linear part
  // Digits (L row-major, then t); lexicographic order on this key is the
  // canonical tie-break order on affine maps.
  std::vector<uint8_t> encode_key() const;
  bool operator==(const AffineEndo&) const = default;
};

// Least-squares-free exact fit: the affine map through the given
// (input, output) pairs, with coordinates unconstrained by the data set to 0.
// Empty result when the pairs are inconsistent.
std::optional<AffineEndo> solve_affine_from_points(
    const Ambient& amb, const std::vector<std::pair<GVector, GVector>>& pts);

}  // namespace bilbog
