#pragma once

// Dense subsets of G x G as bit grids, plus the per-line set arithmetic the
// directional pipeline runs on.
//
// Axis convention (the one place it is defined):
//   row x   = { y : (x, y) in A }   first coordinate fixed,
//   col y   = { x : (x, y) in A }   second coordinate fixed,
//   bit index of (x, y) is enc(x) * N + enc(y)  (row-major).
// The pipeline stages are
//   A1 = per-row difference supports        (transforms each A_{x.}),
//   A2 = per-column 4-fold supports on A1   (transforms each A1_{.y}),
//   A3 = per-row 4-fold supports on A2,
// with L + L - L - L realized as (L - L) - (L - L); both read the same set.

#include <cstdint>
#include <string>
#include <vector>

#include "bilbog/fp_linalg.hpp"

namespace bilbog {

enum class Axis { Row, Col };

// One line of a grid: N bits packed little-endian into 64-bit words.
using Line = std::vector<uint64_t>;

size_t line_popcount(const Line& l);
std::vector<size_t> line_indices(const Line& l, size_t n_pts);

class ProductSet {
 public:
  explicit ProductSet(const Ambient& amb);
  static ProductSet full(const Ambient& amb);

  const Ambient& ambient() const { return amb_; }
  size_t side() const { return n_; }

  bool test(size_t x, size_t y) const {
    const size_t b = x * n_ + y;
    return (bits_[b >> 6] >> (b & 63)) & 1;
  }
  void set(size_t x, size_t y, bool value = true);

  Line row(size_t x) const;
  Line col(size_t y) const;
  std::vector<size_t> row_indices(size_t x) const;
  void assign_row(size_t x, const Line& l);

  ProductSet transposed() const;
  int64_t popcount() const;
  bool is_subset_of(const ProductSet& o) const;
  // Up to `cap` elements of this \ o, in increasing (x, y) order.
  std::vector<std::pair<size_t, size_t>> subset_violations(const ProductSet& o,
                                                           size_t cap = 10) const;
  bool operator==(const ProductSet& o) const { return amb_ == o.amb_ && bits_ == o.bits_; }

  const std::vector<uint64_t>& words() const { return bits_; }

 private:
  Ambient amb_;
  size_t n_;
  std::vector<uint64_t> bits_;
};

double density(const ProductSet& a);

// L - L and L + L - L - L as supports. Direct bit arithmetic below N = 32,
// transform-and-round (exact: the underlying counts are integers) above.
Line line_diff_support(const Line& l, const Ambient& amb);
Line line_sumdiff_support(const Line& l, const Ambient& amb);

ProductSet directional_diff_support(const ProductSet& a, Axis axis, unsigned threads = 1);
ProductSet directional_sumdiff_support(const ProductSet& a, Axis axis, unsigned threads = 1);

struct PipelineSets {
  ProductSet a1, a2, a3;
};

PipelineSets pipeline_a3(const ProductSet& a, unsigned threads = 1);

// Number of (x, y, z) with (x,y), (x,y+h), (x+w,z), (x+w,z+h) all in A:
// vertical pair counts per row first, then correlated across rows.
int64_t parallelogram_count(const ProductSet& a, size_t w, size_t h);

// Binary format: "FPSET\0", version u8, p u8, n u8, ceil(N^2/8) bytes of
// row-major bits (bit b at byte b/8, position b%8). Text format: one pair per
// line, "x_1,...,x_n;y_1,...,y_n". read_set sniffs the magic.
void write_set_binary(const std::string& path, const ProductSet& a);
void write_set_text(const std::string& path, const ProductSet& a);
ProductSet read_set(const std::string& path);

}  // namespace bilbog
