#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ckt/box.hpp"
#include "ckt/hypothesis.hpp"
#include "ckt/rng.hpp"
#include "ckt/sample.hpp"

namespace ckt {

enum class Scheme { classical, conditional };
enum class Statistic { inf, l2 };

const char* to_string(Scheme s);

struct BootstrapConfig {
  std::size_t B = 1000;
  Scheme scheme = Scheme::classical;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool smoothed = false;        // (1 + #exceed) / (B + 1)
  std::size_t max_redraws = 100;
};

// A resample as row references into the original sample: conditioned part of
// draw r comes from conditioned_rows[r], conditioning part from
// conditioning_rows[r]. The classical scheme uses the same row for both.
struct Resample {
  std::vector<std::size_t> conditioned_rows;
  std::vector<std::size_t> conditioning_rows;
};

Resample resample_classical(std::size_t n, Rng& rng);
// Draws X_J* among observed rows, then X_I* among members of the smallest
// box containing X_J*. Throws coverage error if some row lies in no box.
Resample resample_conditional(const Membership& mb, Rng& rng);
Sample materialize(const Sample& s, const Resample& r);

struct BootstrapOutcome {
  TestResult inf;
  TestResult l2;
  std::vector<double> replicates_inf;
  std::vector<double> replicates_l2;
};

// One bootstrap run gives both statistics. Replicate b uses the stream
// derive_seed(config.seed, b), so results do not depend on config.threads.
BootstrapOutcome bootstrap_test(const Sample& s, const BoxFamily& family,
                                const BootstrapConfig& config);
TestResult bootstrap_test(const Sample& s, const BoxFamily& family, Statistic statistic,
                          const BootstrapConfig& config);

// Centered statistics (inf, l2) of one resample against the observed taus,
// computed from scratch. Throws InsufficientSubsample if a box gets < 2 draws.
std::pair<double, double> centered_statistics(const Sample& s, const BoxFamily& family,
                                              const Resample& r);

Method method_for(Statistic statistic, Scheme scheme);

}  // namespace ckt
