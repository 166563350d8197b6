#include <vector>

#include "bilbog/generators.hpp"

namespace bilbog {

namespace {

FpMatrix random_matrix(const Ambient& amb, SplitMix64& rng) {
  FpMatrix m(amb);
  for (uint32_t i = 0; i < amb.n; ++i)
    for (uint32_t j = 0; j < amb.n; ++j) m.at(i, j) = uint8_t(rng.below(amb.p));
  return m;
}

size_t matrix_rank(const FpMatrix& m) {
  const Ambient& amb = m.amb;
  std::vector<GVector> rows;
  for (uint32_t i = 0; i < amb.n; ++i) {
    std::vector<uint8_t> r(amb.n);
    for (uint32_t j = 0; j < amb.n; ++j) r[j] = m.at(i, j);
    rows.emplace_back(amb, std::move(r));
  }
  return Subspace::span(amb, rows).dim();
}

// d independent functionals drawn by rejection; their common kernel has codim d.
Subspace random_subspace_of_codim(const Ambient& amb, uint32_t codim, SplitMix64& rng) {
  if (codim > amb.n) throw MismatchError("codim exceeds dimension");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<GVector> normals;
    for (uint32_t i = 0; i < codim; ++i) {
      std::vector<uint8_t> r(amb.n);
      for (uint32_t j = 0; j < amb.n; ++j) r[j] = uint8_t(rng.below(amb.p));
      normals.emplace_back(amb, std::move(r));
    }
    Subspace sp = Subspace::span(amb, normals);
    if (sp.dim() == codim) return orthogonal_complement(sp);
  }
  throw MismatchError("failed to draw independent functionals");
}

void fill_bisubspace(ProductSet& a, const FpMatrix& m) {
  const Ambient& amb = m.amb;
  const size_t big = amb.size();
  const FpMatrix mt = m.transposed();
  for (size_t x = 0; x < big; ++x) {
    const size_t w = mt.apply_idx(x);  // x^T M y = (M^T x) . y
    if (w == 0) {
      for (size_t y = 0; y < big; ++y) a.set(x, y);
    } else {
      for (size_t y = 0; y < big; ++y)
        if (idx_dot(amb, w, y) == 0) a.set(x, y);
    }
  }
}

}  // namespace

FpMatrix bisubspace_matrix(const Ambient& amb, int rank, SplitMix64& rng) {
  if (rank < 0) return random_matrix(amb, rng);
  if (uint32_t(rank) > amb.n) throw MismatchError("rank exceeds dimension");
  if (rank == 0) return FpMatrix(amb);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // M = P Q with P n x r and Q r x n has rank at most r; rejection makes it exact.
    std::vector<std::vector<uint8_t>> pm(amb.n, std::vector<uint8_t>(size_t(rank)));
    std::vector<std::vector<uint8_t>> qm(size_t(rank), std::vector<uint8_t>(amb.n));
    for (auto& row : pm)
      for (auto& v : row) v = uint8_t(rng.below(amb.p));
    for (auto& row : qm)
      for (auto& v : row) v = uint8_t(rng.below(amb.p));
    FpMatrix m(amb);
    for (uint32_t i = 0; i < amb.n; ++i)
      for (uint32_t j = 0; j < amb.n; ++j) {
        uint32_t acc = 0;
        for (int t = 0; t < rank; ++t) acc += uint32_t(pm[i][size_t(t)]) * qm[size_t(t)][j];
        m.at(i, j) = uint8_t(acc % amb.p);
      }
    if (matrix_rank(m) == size_t(rank)) return m;
  }
  throw MismatchError("failed to draw matrix of requested rank");
}

ProductSet generate_instance(const GenSpec& spec) {
  const Ambient amb(spec.p, spec.n);
  const size_t big = amb.size();
  ProductSet a(amb);
  SplitMix64 rng(spec.seed);
  if (spec.name == "random") {
    if (!(spec.density > 0.0 && spec.density <= 1.0))
      throw MismatchError("density must lie in (0, 1]");
    for (size_t x = 0; x < big; ++x)
      for (size_t y = 0; y < big; ++y)
        if (rng.unit() < spec.density) a.set(x, y);
  } else if (spec.name == "bisubspace") {
    fill_bisubspace(a, bisubspace_matrix(amb, spec.rank, rng));
  } else if (spec.name == "product") {
    const Subspace u = random_subspace_of_codim(amb, spec.codim_u, rng);
    const Subspace v = random_subspace_of_codim(amb, spec.codim_v, rng);
    for (size_t x : elements_sorted(u))
      for (size_t y : elements_sorted(v)) a.set(x, y);
  } else if (spec.name == "planted-noise") {
    if (!(spec.noise >= 0.0 && spec.noise <= 1.0))
      throw MismatchError("noise must lie in [0, 1]");
    fill_bisubspace(a, bisubspace_matrix(amb, spec.rank, rng));
    for (size_t x = 0; x < big; ++x)
      for (size_t y = 0; y < big; ++y) {
        if (a.test(x, y)) continue;
        if (rng.unit() < spec.noise) a.set(x, y);
      }
  } else {
    throw MismatchError("unknown generator: " + spec.name);
  }
  return a;
}

}  // namespace bilbog
