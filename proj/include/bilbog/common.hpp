#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace bilbog {

// Contract violations: mismatched ambients, malformed arguments.
struct MismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Refusal to do work past a desk-scale guard (size limits, k cap).
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File and stream problems.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : IoError {
  size_t byte_offset;
  ParseError(const std::string& what, size_t off)
      : IoError(what + " (byte " + std::to_string(off) + ")"), byte_offset(off) {}
};

// Deterministic 64-bit generator (splitmix64). Every random draw in the
// library flows through this, so a fixed seed reproduces bit-identical runs
// on any platform and with any thread count.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, bound), bound >= 1. Rejection keeps it exact.
  uint64_t below(uint64_t bound);

  // Uniform double in [0, 1).
  double unit() { return double(next() >> 11) * 0x1.0p-53; }
};

// Derives an independent stream seed; used to give each pipeline stage its
// own generator without coupling draw counts between stages.
uint64_t mix_seed(uint64_t seed, uint64_t stream);

bool is_prime(uint32_t p);

// Runs fn(i) for i in [0, count) on up to `threads` workers in fixed
// contiguous chunks. Each index must write only its own slots; outputs are
// then identical for every thread count.
void parallel_for(size_t count, unsigned threads, const std::function<void(size_t)>& fn);

}  // namespace bilbog
