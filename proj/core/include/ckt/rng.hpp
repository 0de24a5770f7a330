#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ckt {

// Mixes a master seed with a stream index (splitmix64 finalizer). Every
// replicate, bootstrap draw and sample split gets its own stream so results do
// not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Uniform integer on {0, ..., n - 1}; n must be positive.
  std::size_t index(std::size_t n);
  // Standard normal by Box-Muller; the second variate of each pair is cached.
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ckt
