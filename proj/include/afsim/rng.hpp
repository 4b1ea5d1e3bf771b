#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace afsim {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

// Named pseudo-random stream. The engine seed is a pure function of the
// master seed and the stream label, so adding a stream never shifts the
// draws of another one.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label);

  // Uniform in [0, 1) built from the top 53 bits; independent of the
  // standard library's distribution implementations.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace afsim
