#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anchoreval/verdicts.hpp"

namespace anchoreval {

struct PowerSpec {
  // Win rate among discordant (non-tied) paired comparisons.
  double win_rate_among_discordant = 0.55;
  double alpha = 0.05;
  double power = 0.80;
  enum class Sided { one, two } sided = Sided::one;
};

// Smallest number of discordant pairs for the sign test to reach the target
// power, by the normal-approximation size formula
//   n = ((z_{1-a} * 0.5 + z_{power} * sqrt(p(1-p))) / (p - 0.5))^2, rounded up.
long sign_test_n(const PowerSpec& spec);

struct PowerPlan {
  long n_base = 0;              // discordant pairs needed
  double informativeness = 1.0;
  long n_total = 0;             // ceil(n_base / informativeness)
};

// Ties carry no sign-test information, so the raw requirement is inflated by
// the informativeness rate.
PowerPlan adjust_for_informativeness(long n_base, double informativeness);

// Per-instruction verdict differences v(i,a) - v(i,b) for one anchor and one
// opponent pair. effect_size is the win rate of a among the non-zero
// differences, minus 0.5 (the "edge"); 0 when every difference is zero.
struct DifferenceDistribution {
  std::string anchor;
  std::string model_a;
  std::string model_b;
  std::vector<int8_t> support;  // values in [-4, 4]
  double effect_size = 0.0;
  double nonzero_fraction = 0.0;
};

using EffectInterval = std::pair<double, double>;  // [lo, hi)

// One distribution per (anchor, unordered opponent pair), for every anchor
// the set is complete for. Orientation is flipped so effect_size >= 0. When
// an interval is given only matching distributions are returned.
std::vector<DifferenceDistribution> empirical_difference_distributions(
    const JudgmentSet& js, std::optional<EffectInterval> effect_interval = std::nullopt);

struct WilcoxonPowerConfig {
  double alpha = 0.05;
  double power = 0.80;
  int trials = 200;          // Monte-Carlo repetitions per grid point
  std::vector<int> n_grid;   // empty -> 50, 100, ..., 2000
  int jobs = 1;
};

// Walks n_grid; at each n, resamples n differences from a uniformly chosen
// qualifying distribution and runs the one-sided Wilcoxon signed-rank test
// (zeros handled by the Pratt method). Returns the first n whose rejection
// fraction reaches the target power, or nullopt when the grid is exhausted.
// Deterministic for a fixed seed, independent of cfg.jobs.
std::optional<int> wilcoxon_power_n(const std::vector<DifferenceDistribution>& dists,
                                    EffectInterval effect_interval,
                                    const WilcoxonPowerConfig& cfg, uint64_t seed);

std::vector<int> default_power_grid();

}  // namespace anchoreval
