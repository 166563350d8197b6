#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "bilbog/bohr.hpp"
#include "doctest.h"

using namespace bilbog;

namespace {

AffineEndo random_affine(const Ambient& amb, SplitMix64& rng) {
  FpMatrix l(amb);
  for (uint32_t i = 0; i < amb.n; ++i)
    for (uint32_t j = 0; j < amb.n; ++j) l.at(i, j) = uint8_t(rng.below(amb.p));
  return AffineEndo(l, GVector::decode(amb, rng.below(amb.size())));
}

}  // namespace

TEST_CASE("from_affine_family: empty, identity, constant") {
  const Ambient amb(2, 2);
  BohrVariety everything = BohrVariety::from_affine_family(amb, {});
  for (size_t x = 0; x < 4; ++x)
    for (size_t y = 0; y < 4; ++y) CHECK(everything.member_idx(x, y));

  const AffineEndo id(FpMatrix::identity(amb), GVector::zero(amb));
  BohrVariety b = BohrVariety::from_affine_family(amb, {id});
  CHECK(b.theorem_form());
  CHECK(b.member(GVector::unit(amb, 0), GVector::unit(amb, 1)));
  CHECK(!b.member(GVector::unit(amb, 0), GVector::unit(amb, 0)));

  const GVector t = GVector(amb, {1, 0});
  BohrVariety c = BohrVariety::from_affine_family(amb, {AffineEndo::constant(t)});
  for (size_t x = 0; x < 4; ++x)
    for (size_t y = 0; y < 4; ++y)
      CHECK(c.member_idx(x, y) == (idx_dot(amb, x, t.encode()) == 0));
}

TEST_CASE("linear_part: translation dropped, constants vanish, axes inside") {
  const Ambient amb(2, 2);
  const AffineEndo shift(FpMatrix::identity(amb), GVector(amb, {1, 1}));
  BohrVariety bl = BohrVariety::from_affine_family(amb, {shift}).linear_part();
  for (size_t x = 0; x < 4; ++x)
    for (size_t y = 0; y < 4; ++y) CHECK(bl.member_idx(x, y) == (idx_dot(amb, x, y) == 0));

  BohrVariety cl =
      BohrVariety::from_affine_family(amb, {AffineEndo::constant(GVector(amb, {1, 0}))})
          .linear_part();
  for (size_t x = 0; x < 4; ++x)
    for (size_t y = 0; y < 4; ++y) CHECK(cl.member_idx(x, y));

  SplitMix64 rng(1);
  const Ambient f32(3, 2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<AffineEndo> fam = {random_affine(f32, rng), random_affine(f32, rng)};
    BohrVariety lp = BohrVariety::from_affine_family(f32, fam).linear_part();
    for (size_t y = 0; y < 9; ++y) CHECK(lp.member_idx(0, y));
    for (size_t x = 0; x < 9; ++x) CHECK(lp.member_idx(x, 0));
  }
}

TEST_CASE("linear_part rejects general biaffine forms") {
  const Ambient amb(2, 2);
  BiaffineForm f;
  f.m = FpMatrix::identity(amb);
  f.a = GVector::zero(amb);
  f.b = GVector(amb, {1, 0});  // y-linear term puts this outside theorem form
  f.c = 0;
  BohrVariety general(amb, {f});
  CHECK(!general.theorem_form());
  CHECK_THROWS_AS(general.linear_part(), MismatchError);
  // row_coset is defined for every form shape; it must agree with member.
  for (size_t x = 0; x < 4; ++x) {
    const Coset row = general.row_coset(x);
    for (size_t y = 0; y < 4; ++y) CHECK(row.contains_idx(y) == general.member_idx(x, y));
  }
}

TEST_CASE("membership: theorem form basics") {
  const Ambient amb(2, 2);
  SplitMix64 rng(2);
  // a_i = 0 families contain (0, y) for every y.
  std::vector<AffineEndo> lin = {random_affine(amb, rng).linearization()};
  BohrVariety b = BohrVariety::from_affine_family(amb, lin);
  for (size_t y = 0; y < 4; ++y) CHECK(b.member_idx(0, y));

  const AffineEndo id(FpMatrix::identity(amb), GVector::zero(amb));
  BohrVariety bid = BohrVariety::from_affine_family(amb, {id});
  CHECK(bid.member(GVector(amb, {1, 1}), GVector(amb, {1, 1})));  // 1 + 1 = 0 mod 2

  BohrVariety none(amb, {});
  CHECK(none.member_idx(3, 3));
}

TEST_CASE("row_coset: subspace case, inconsistent case, exhaustive agreement") {
  const Ambient amb(2, 3);
  const AffineEndo id(FpMatrix::identity(amb), GVector::zero(amb));
  BohrVariety b = BohrVariety::from_affine_family(amb, {id});
  for (size_t x = 1; x < 8; ++x) {
    Coset c = b.row_coset(x);
    REQUIRE(!c.empty);
    CHECK(c.rep.is_zero());
    CHECK(c.space ==
          orthogonal_complement(Subspace::span(amb, {GVector::decode(amb, x)})));
  }

  // alpha constant t: the form is x . t = 0, independent of y.
  const GVector t(amb, {1, 0, 0});
  BohrVariety c = BohrVariety::from_affine_family(amb, {AffineEndo::constant(t)});
  CHECK(c.row_coset(1).empty);        // x . t = 1
  CHECK(!c.row_coset(2).empty);       // x . t = 0
  CHECK(c.row_coset(2).space == Subspace::full(amb));

  SplitMix64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<AffineEndo> fam = {random_affine(amb, rng), random_affine(amb, rng)};
    BohrVariety v = BohrVariety::from_affine_family(amb, fam);
    for (size_t x = 0; x < 8; ++x) {
      Coset coset = v.row_coset(x);
      for (size_t y = 0; y < 8; ++y) CHECK(coset.contains_idx(y) == v.member_idx(x, y));
    }
  }
}

TEST_CASE("enumerate_structured: trivial shapes and filter oracle") {
  const Ambient amb(2, 3);
  SplitMix64 rng(4);
  const AffineEndo lin = random_affine(amb, rng).linearization();
  StructuredSet zero{Subspace::zero(amb), Subspace::zero(amb),
                     BohrVariety::from_affine_family(amb, {lin})};
  CHECK(enumerate_structured(zero) ==
        std::vector<std::pair<size_t, size_t>>{{0, 0}});

  StructuredSet all{Subspace::full(amb), Subspace::full(amb),
                    BohrVariety::from_affine_family(amb, {})};
  CHECK(enumerate_structured(all).size() == 64);

  for (int trial = 0; trial < 15; ++trial) {
    std::vector<GVector> ug = {GVector::decode(amb, rng.below(8)),
                               GVector::decode(amb, rng.below(8))};
    std::vector<GVector> vg = {GVector::decode(amb, rng.below(8)),
                               GVector::decode(amb, rng.below(8))};
    StructuredSet s{Subspace::span(amb, ug), Subspace::span(amb, vg),
                    BohrVariety::from_affine_family(amb, {random_affine(amb, rng)})};
    std::vector<std::pair<size_t, size_t>> want;
    for (size_t x = 0; x < 8; ++x)
      for (size_t y = 0; y < 8; ++y)
        if (s.u.contains_idx(x) && s.v.contains_idx(y) && s.variety.member_idx(x, y))
          want.emplace_back(x, y);
    CHECK(enumerate_structured(s) == want);
  }
}

TEST_CASE("containment_check: contained, reported size, planted violation") {
  const Ambient amb(2, 3);
  SplitMix64 rng(5);
  StructuredSet s{Subspace::full(amb), Subspace::full(amb),
                  BohrVariety::from_affine_family(amb, {random_affine(amb, rng)})};
  ProductSet everything = ProductSet::full(amb);
  ContainmentReport rep = containment_check(s, everything);
  CHECK(rep.contained);
  CHECK(rep.structured_size == int64_t(enumerate_structured(s).size()));
  CHECK(rep.witnesses.empty());

  auto members = enumerate_structured(s);
  REQUIRE(!members.empty());
  const auto removed = members[members.size() / 2];
  ProductSet holed = everything;
  holed.set(removed.first, removed.second, false);
  rep = containment_check(s, holed);
  CHECK(!rep.contained);
  REQUIRE(rep.witnesses.size() == 1);
  CHECK(rep.witnesses[0] == removed);
}

TEST_CASE("variety density is at least p^{-k} for homogeneous families") {
  SplitMix64 rng(6);
  for (const Ambient amb : {Ambient(2, 4), Ambient(3, 2)}) {
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<AffineEndo> fam;
      const size_t k = 1 + rng.below(2);
      for (size_t i = 0; i < k; ++i) fam.push_back(random_affine(amb, rng).linearization());
      BohrVariety b = BohrVariety::from_affine_family(amb, fam);
      ProductSet grid = b.to_grid();
      const double num = double(grid.popcount());
      const double denom = double(amb.size()) * double(amb.size());
      double bound = 1.0;
      for (size_t i = 0; i < k; ++i) bound /= double(amb.p);
      CHECK(num / denom >= bound - 1e-12);
      CHECK(b.codim_upper() <= k);
    }
  }
}

TEST_CASE("codim_upper is capped by the rank of the stacked coefficients") {
  const Ambient amb(2, 3);
  const AffineEndo id(FpMatrix::identity(amb), GVector::zero(amb));
  // The same form twice: rank of the stacked system stays 1.
  BohrVariety b = BohrVariety::from_affine_family(amb, {id, id});
  CHECK(b.k() == 2);
  CHECK(b.codim_upper() == 1);
}

TEST_CASE("text round-trip") {
  SplitMix64 rng(7);
  for (const Ambient amb : {Ambient(2, 3), Ambient(3, 2)}) {
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<AffineEndo> fam = {random_affine(amb, rng), random_affine(amb, rng)};
      BohrVariety b = BohrVariety::from_affine_family(amb, fam);
      BohrVariety back = BohrVariety::from_text(b.to_text());
      CHECK(back == b);
      CHECK(back.theorem_form());
    }
  }
  BiaffineForm f;
  const Ambient amb(3, 2);
  f.m = FpMatrix::identity(amb);
  f.a = GVector(amb, {1, 2});
  f.b = GVector(amb, {0, 1});
  f.c = 2;
  BohrVariety general(amb, {f});
  BohrVariety back = BohrVariety::from_text(general.to_text());
  CHECK(back == general);
  CHECK(!back.theorem_form());

  CHECK_THROWS_AS(BohrVariety::from_text("4 2 1\n1 0\n0 1\n0 0\n0 0\n0\n"), ParseError);
  CHECK_THROWS_AS(BohrVariety::from_text("2 2 1\n1 0\n"), ParseError);
}

TEST_CASE("enumeration guard refuses oversized products") {
  const Ambient amb(2, 13);
  StructuredSet s{Subspace::full(amb), Subspace::full(amb),
                  BohrVariety::from_affine_family(amb, {})};
  CHECK_THROWS_AS(enumerate_structured(s), GuardError);
  CHECK_THROWS_AS(containment_check(s, ProductSet(amb)), GuardError);
}
