// Seeded instance generators for A subset G x G. Every generator draws all of
// its randomness from one SplitMix64 stream, so a GenSpec (including seed)
// determines the output set bit for bit.
#pragma once

#include <cstdint>
#include <string>

#include "bilbog/product_set.hpp"

namespace bilbog {

struct GenSpec {
  std::string name = "random";  // random | bisubspace | product | planted-noise
  uint32_t p = 2;
  uint32_t n = 4;
  double density = 0.5;  // random: iid bit probability
  uint64_t seed = 1;
  int rank = -1;          // bisubspace, planted-noise: rank of M (-1 = unconstrained)
  uint32_t codim_u = 1;   // product: codim of the row-side subspace
  uint32_t codim_v = 1;   // product: codim of the column-side subspace
  double noise = 0.05;    // planted-noise: iid rate for bits outside the structure
};

// Throws MismatchError on an unknown generator name or out-of-range parameters.
ProductSet generate_instance(const GenSpec& spec);

// The bilinear map behind a bisubspace draw, exposed so tests can cross-check
// membership against x^T M y = 0 directly.
FpMatrix bisubspace_matrix(const Ambient& amb, int rank, SplitMix64& rng);

}  // namespace bilbog
