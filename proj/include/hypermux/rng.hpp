#pragma once
#include <cstdint>
#include <random>
#include <vector>

namespace hypermux {

// Finalizer of the splitmix64 generator; used to turn (seed, stream id)
// pairs into decorrelated substream seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x517cc1b727220a95ULL));
}

// All randomness in the library flows through this generator. It wraps
// std::mt19937_64 (whose output sequence is pinned by the standard, so
// streams are portable across platforms) and converts to doubles and
// bounded integers itself instead of relying on std::*_distribution,
// whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

  // Unbiased integer in [0, n), n >= 1. Rejection on the top range.
  uint64_t next_below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Independent generator for a logical sub-task (trial index, pipeline
  // stage, ...). Deterministic in (seed, stream).
  Rng substream(uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

  // Fisher-Yates; std::shuffle is not reproducible across standard
  // libraries, this is.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace hypermux
