#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "bilbog/fp_linalg.hpp"
#include "doctest.h"

using namespace bilbog;

namespace {

GVector gv(const Ambient& amb, std::vector<uint8_t> c) { return GVector(amb, std::move(c)); }

std::vector<size_t> brute_elements(const Subspace& s) {
  std::vector<size_t> out;
  for (size_t x = 0; x < s.ambient().size(); ++x)
    if (s.contains_idx(x)) out.push_back(x);
  return out;
}

}  // namespace

TEST_CASE("span: empty, standard basis, hand reduction") {
  const Ambient f22(2, 2), f33(3, 3);
  CHECK(Subspace::span(f22, {}).dim() == 0);
  CHECK(Subspace::span(f22, {GVector::unit(f22, 0), GVector::unit(f22, 1)}) ==
        Subspace::full(f22));
  const Subspace s =
      Subspace::span(f33, {gv(f33, {1, 1, 0}), gv(f33, {2, 2, 0}), gv(f33, {0, 1, 2})});
  CHECK(s.dim() == 2);
  CHECK(s.rows() == std::vector<std::vector<uint8_t>>{{1, 0, 1}, {0, 1, 2}});
}

TEST_CASE("span: idempotent and order/duplication independent") {
  const Ambient amb(3, 3);
  SplitMix64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<GVector> gens;
    for (int i = 0; i < 4; ++i) gens.push_back(GVector::decode(amb, rng.below(amb.size())));
    const Subspace a = Subspace::span(amb, gens);
    std::vector<GVector> shuffled = gens;
    std::reverse(shuffled.begin(), shuffled.end());
    shuffled.push_back(gens[0]);
    shuffled.push_back(gens[2]);
    CHECK(Subspace::span(amb, shuffled) == a);
    std::vector<GVector> rebased;
    for (const auto& r : a.basis()) rebased.push_back(r);
    CHECK(Subspace::span(amb, rebased) == a);
  }
}

TEST_CASE("orthogonal complement: examples and involution") {
  const Ambient f22(2, 2), f33(3, 3);
  CHECK(orthogonal_complement(Subspace::zero(f22)) == Subspace::full(f22));
  CHECK(orthogonal_complement(Subspace::span(f22, {gv(f22, {1, 0})})) ==
        Subspace::span(f22, {gv(f22, {0, 1})}));
  const Subspace s = Subspace::span(f33, {gv(f33, {1, 1, 0}), gv(f33, {0, 1, 2})});
  const Subspace sp = orthogonal_complement(s);
  CHECK(sp == Subspace::span(f33, {gv(f33, {2, 1, 1})}));
  // Exhaustive: exactly the vectors annihilating s.
  for (size_t x = 0; x < f33.size(); ++x) {
    bool kills = true;
    for (const auto& b : s.basis())
      if (GVector::decode(f33, x).dot(b) != 0) kills = false;
    CHECK(sp.contains_idx(x) == kills);
  }
}

TEST_CASE("orthogonal complement: dim sum and double complement") {
  SplitMix64 rng(5);
  for (const Ambient amb : {Ambient(2, 5), Ambient(3, 3), Ambient(5, 2)}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<GVector> gens;
      for (int i = 0; i < 3; ++i) gens.push_back(GVector::decode(amb, rng.below(amb.size())));
      const Subspace s = Subspace::span(amb, gens);
      const Subspace sp = orthogonal_complement(s);
      CHECK(s.dim() + sp.dim() == amb.n);
      CHECK(orthogonal_complement(sp) == s);
    }
  }
}

TEST_CASE("intersect: identity, hyperplanes, isotropic-free line") {
  const Ambient f23(2, 3), f32(3, 2);
  SplitMix64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<GVector> gens = {GVector::decode(f23, rng.below(8)),
                                 GVector::decode(f23, rng.below(8))};
    const Subspace s = Subspace::span(f23, gens);
    CHECK(intersect(s, Subspace::full(f23)) == s);
  }
  const Subspace h1 = orthogonal_complement(Subspace::span(f23, {gv(f23, {1, 0, 0})}));
  const Subspace h2 = orthogonal_complement(Subspace::span(f23, {gv(f23, {0, 1, 0})}));
  const Subspace both = intersect(h1, h2);
  CHECK(both.dim() == 1);
  for (size_t x = 0; x < 8; ++x)
    CHECK(both.contains_idx(x) == (h1.contains_idx(x) && h2.contains_idx(x)));
  const Subspace diag = Subspace::span(f32, {gv(f32, {1, 1})});
  CHECK(gv(f32, {1, 1}).dot(gv(f32, {1, 1})) == 2);
  CHECK(intersect(diag, orthogonal_complement(diag)) == Subspace::zero(f32));
}

TEST_CASE("preimage: identity, zero, exhaustive random") {
  const Ambient amb(2, 4);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<GVector> gens = {GVector::decode(amb, rng.below(16)),
                                 GVector::decode(amb, rng.below(16))};
    const Subspace s = Subspace::span(amb, gens);
    CHECK(preimage_subspace(FpMatrix::identity(amb), s) == s);
    CHECK(preimage_subspace(FpMatrix(amb), s) == Subspace::full(amb));
    FpMatrix l(amb);
    for (uint32_t i = 0; i < 4; ++i)
      for (uint32_t j = 0; j < 4; ++j) l.at(i, j) = uint8_t(rng.below(2));
    const Subspace pre = preimage_subspace(l, s);
    for (size_t x = 0; x < 16; ++x)
      CHECK(pre.contains_idx(x) == s.contains_idx(l.apply_idx(x)));
  }
}

TEST_CASE("affine evaluation and adjoint") {
  const Ambient f32(3, 2);
  const AffineEndo id(FpMatrix::identity(f32), GVector::zero(f32));
  CHECK(id(gv(f32, {2, 1})) == gv(f32, {2, 1}));
  const AffineEndo cst = AffineEndo::constant(gv(f32, {1, 2}));
  CHECK(cst(gv(f32, {2, 1})) == gv(f32, {1, 2}));
  CHECK(cst.adjoint().is_zero());

  FpMatrix l(f32);
  l.at(0, 0) = 1;
  l.at(0, 1) = 2;
  l.at(1, 0) = 0;
  l.at(1, 1) = 1;
  const AffineEndo a(l, gv(f32, {1, 0}));
  CHECK(a(gv(f32, {1, 1})) == gv(f32, {1, 1}));
  const FpMatrix adj = a.adjoint();
  CHECK(adj.at(0, 0) == 1);
  CHECK(adj.at(0, 1) == 0);
  CHECK(adj.at(1, 0) == 2);
  CHECK(adj.at(1, 1) == 1);
  CHECK(id.adjoint() == FpMatrix::identity(f32));
}

TEST_CASE("adjoint identity x . L y = (L^T x) . y, exhaustive") {
  SplitMix64 rng(9);
  for (const Ambient amb : {Ambient(2, 5), Ambient(3, 3)}) {
    FpMatrix l(amb);
    for (uint32_t i = 0; i < amb.n; ++i)
      for (uint32_t j = 0; j < amb.n; ++j) l.at(i, j) = uint8_t(rng.below(amb.p));
    const AffineEndo a(l, GVector::decode(amb, rng.below(amb.size())));
    const FpMatrix adj = a.adjoint();
    for (size_t x = 0; x < amb.size(); ++x)
      for (size_t y = 0; y < amb.size(); ++y)
        CHECK(idx_dot(amb, x, a.linearization().apply_idx(y)) ==
              idx_dot(amb, adj.apply_idx(x), y));
  }
}

TEST_CASE("solve_affine_from_points: identity, contradiction, planted round-trip") {
  const Ambient amb(3, 3);
  std::vector<std::pair<GVector, GVector>> pts;
  pts.emplace_back(GVector::zero(amb), GVector::zero(amb));
  for (uint32_t i = 0; i < 3; ++i)
    pts.emplace_back(GVector::unit(amb, i), GVector::unit(amb, i));
  auto sol = solve_affine_from_points(amb, pts);
  REQUIRE(sol.has_value());
  CHECK(sol->linear == FpMatrix::identity(amb));
  CHECK(sol->translation.is_zero());

  auto bad = solve_affine_from_points(
      amb, {{GVector::zero(amb), gv(amb, {1, 0, 0})}, {GVector::zero(amb), gv(amb, {2, 0, 0})}});
  CHECK(!bad.has_value());

  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    FpMatrix l(amb);
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 3; ++j) l.at(i, j) = uint8_t(rng.below(3));
    const AffineEndo planted(l, GVector::decode(amb, rng.below(27)));
    // 0, e_1, ..., e_n are affinely independent and affinely span G.
    std::vector<std::pair<GVector, GVector>> sam;
    sam.emplace_back(GVector::zero(amb), planted(GVector::zero(amb)));
    for (uint32_t i = 0; i < 3; ++i)
      sam.emplace_back(GVector::unit(amb, i), planted(GVector::unit(amb, i)));
    auto rec = solve_affine_from_points(amb, sam);
    REQUIRE(rec.has_value());
    CHECK(*rec == planted);
  }
}

TEST_CASE("solve_affine_from_points: consistent on underdetermined data") {
  const Ambient amb(2, 4);
  SplitMix64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<GVector, GVector>> pts;
    const int m = 1 + int(rng.below(4));
    for (int i = 0; i < m; ++i)
      pts.emplace_back(GVector::decode(amb, rng.below(16)), GVector::decode(amb, rng.below(16)));
    auto sol = solve_affine_from_points(amb, pts);
    if (!sol) continue;  // inconsistent draw
    for (const auto& [x, y] : pts) CHECK((*sol)(x) == y);
  }
}

TEST_CASE("greedy_avoiding_subspace: examples and bounds") {
  const Ambient f23(2, 3), f24(2, 4);
  const Subspace v0 = Subspace::full(f23);
  CHECK(greedy_avoiding_subspace(v0, {}) == v0);
  const Subspace v1 = greedy_avoiding_subspace(v0, {GVector::unit(f23, 0)});
  CHECK(!v1.contains(GVector::unit(f23, 0)));
  CHECK(v1.dim() == 2);

  SplitMix64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<GVector> r;
    for (int i = 0; i < 3; ++i) {
      const size_t e = 1 + rng.below(15);
      r.push_back(GVector::decode(f24, e));
    }
    const Subspace out = greedy_avoiding_subspace(Subspace::full(f24), r);
    std::set<size_t> distinct;
    for (const auto& v : r) {
      CHECK(!out.contains(v));
      distinct.insert(v.encode());
    }
    CHECK(out.dim() + distinct.size() >= 4);  // codim <= |R \ {0}|
  }
  // Nested: the result stays inside v0.
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GVector> gens = {GVector::decode(f24, rng.below(16)),
                                 GVector::decode(f24, rng.below(16)),
                                 GVector::decode(f24, rng.below(16))};
    const Subspace base = Subspace::span(f24, gens);
    std::vector<GVector> r = {GVector::decode(f24, 1 + rng.below(15))};
    const Subspace out = greedy_avoiding_subspace(base, r);
    CHECK(intersect(out, base) == out);
    if (!r[0].is_zero()) CHECK(!out.contains(r[0]));
  }
}

TEST_CASE("coset reduction is canonical") {
  const Ambient amb(3, 3);
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GVector> gens = {GVector::decode(amb, rng.below(27)),
                                 GVector::decode(amb, rng.below(27))};
    const Subspace w = Subspace::span(amb, gens);
    const GVector rep = GVector::decode(amb, rng.below(27));
    const Coset c = Coset::of(w, rep);
    CHECK(c.contains(rep));
    // Same coset from a shifted representative gives the same canonical rep.
    for (const auto& b : w.basis()) {
      const Coset c2 = Coset::of(w, rep + b.scaled(2));
      CHECK(c2.rep == c.rep);
    }
    CHECK(Coset::empty_coset(amb).empty);
  }
}

TEST_CASE("elements_sorted matches exhaustive membership") {
  const Ambient amb(3, 3);
  SplitMix64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<GVector> gens = {GVector::decode(amb, rng.below(27)),
                                 GVector::decode(amb, rng.below(27))};
    const Subspace s = Subspace::span(amb, gens);
    CHECK(elements_sorted(s) == brute_elements(s));
  }
}

TEST_CASE("ambient mismatch is rejected") {
  const Ambient a(2, 2), b(3, 2);
  CHECK_THROWS_AS(Subspace::span(a, {GVector::decode(a, 1), GVector::decode(b, 1)}),
                  MismatchError);
  CHECK_THROWS_AS((void)gv(a, {0, 1}).dot(gv(b, {0, 1})), MismatchError);
  CHECK_THROWS_AS(intersect(Subspace::full(a), Subspace::full(b)), MismatchError);
}

TEST_CASE("index arithmetic round-trips the digit encoding") {
  for (const Ambient amb : {Ambient(2, 3), Ambient(3, 2), Ambient(5, 2)}) {
    for (size_t x = 0; x < amb.size(); ++x) {
      CHECK(GVector::decode(amb, x).encode() == x);
      for (size_t y = 0; y < amb.size(); ++y) {
        CHECK(idx_add(amb, x, y) == (GVector::decode(amb, x) + GVector::decode(amb, y)).encode());
        CHECK(idx_sub(amb, x, y) == (GVector::decode(amb, x) - GVector::decode(amb, y)).encode());
        CHECK(idx_dot(amb, x, y) == GVector::decode(amb, x).dot(GVector::decode(amb, y)));
      }
      CHECK(idx_neg(amb, x) == GVector::decode(amb, x).negated().encode());
    }
  }
}
