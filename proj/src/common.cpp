#include "bilbog/common.hpp"

#include <thread>
#include <vector>

namespace bilbog {

uint64_t SplitMix64::below(uint64_t bound) {
  if (bound == 0) throw MismatchError("SplitMix64::below: bound must be positive");
  if (bound == 1) return 0;
  // Reject the tail that would bias the modulus.
  const uint64_t limit = uint64_t(-1) - uint64_t(-1) % bound;
  uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  SplitMix64 g(seed ^ (0xa0761d6478bd642fULL * (stream + 1)));
  return g.next();
}

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void parallel_for(size_t count, unsigned threads, const std::function<void(size_t)>& fn) {
  if (count == 0) return;
  size_t workers = threads == 0 ? 1 : threads;
  if (workers > count) workers = count;
  if (workers == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const size_t chunk = (count + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    const size_t lo = w * chunk;
    const size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bilbog
