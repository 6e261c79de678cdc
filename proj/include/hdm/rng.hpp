#ifndef HDM_RNG_HPP_
#define HDM_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace hdm {

// Stateless 64-bit finalizer (splitmix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Folds a tag into a key. Order-sensitive, so distinct task paths land on
// distinct streams regardless of scheduling.
constexpr std::uint64_t fold_key(std::uint64_t key, std::uint64_t tag) {
  return mix64(key ^ mix64(tag ^ 0xa0761d6478bd642full));
}

// Well-known tags naming the independent task levels. Every consumer of
// randomness derives its stream as fold_key(seed, tag) plus indices, which is
// what makes results independent of the worker count.
namespace stream_tag {
constexpr std::uint64_t bootstrap = 0x626f6f74ull;     // per-replicate bootstrap draws
constexpr std::uint64_t tau_resample = 0x74726573ull;  // tau selection: size resamples
constexpr std::uint64_t tau_test = 0x74746573ull;      // tau selection: per-resample test seed
constexpr std::uint64_t sim_data = 0x73646174ull;      // harness: per-replicate data generation
constexpr std::uint64_t sim_test = 0x73746573ull;      // harness: per-replicate test seed
}  // namespace stream_tag

// xoshiro256++ stream with splitmix64-derived state. Value-like; each task
// owns its own stream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) {
    std::uint64_t x = key;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ull;
      word = mix64(x);
    }
  }

  static RngStream from_path(std::initializer_list<std::uint64_t> path) {
    std::uint64_t key = 0;
    for (std::uint64_t tag : path) key = fold_key(key, tag);
    return RngStream(key);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double uniform_open01() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller, caching the second deviate of each pair.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open01()));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * uniform01();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Poisson deviate by Knuth's product method; intended for small means.
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double threshold = std::exp(-mean);
    long count = -1;
    double product = 1.0;
    do {
      ++count;
      product *= uniform01();
    } while (product > threshold);
    return count;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hdm

#endif  // HDM_RNG_HPP_
