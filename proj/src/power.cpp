#include "anchoreval/power.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "anchoreval/rng.hpp"
#include "anchoreval/stats.hpp"

namespace anchoreval {

long sign_test_n(const PowerSpec& spec) {
  const double p = spec.win_rate_among_discordant;
  if (!(p > 0.5 && p < 1.0)) fail(Errc::invalid_spec, "win rate must lie in (0.5, 1)");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) fail(Errc::invalid_spec, "alpha must lie in (0, 1)");
  if (!(spec.power > 0.0 && spec.power < 1.0)) fail(Errc::invalid_spec, "power must lie in (0, 1)");
  double tail = spec.sided == PowerSpec::Sided::one ? spec.alpha : spec.alpha / 2.0;
  double za = normal_quantile(1.0 - tail);
  double zb = normal_quantile(spec.power);
  double root = (za * 0.5 + zb * std::sqrt(p * (1.0 - p))) / (p - 0.5);
  return static_cast<long>(std::ceil(root * root - 1e-9));
}

PowerPlan adjust_for_informativeness(long n_base, double informativeness) {
  if (!(informativeness > 0.0 && informativeness <= 1.0))
    fail(Errc::invalid_rate, "informativeness must lie in (0, 1]");
  if (n_base < 1) fail(Errc::invalid_spec, "n_base must be positive");
  PowerPlan plan;
  plan.n_base = n_base;
  plan.informativeness = informativeness;
  plan.n_total = static_cast<long>(
      std::ceil(static_cast<double>(n_base) / informativeness - 1e-9));
  return plan;
}

std::vector<DifferenceDistribution> empirical_difference_distributions(
    const JudgmentSet& js, std::optional<EffectInterval> effect_interval) {
  const int m = js.model_count();
  const long n = js.instruction_count();
  if (m < 3) fail(Errc::too_few_models, "need at least two opponents per anchor");

  std::vector<DifferenceDistribution> out;
  for (int a = 0; a < m; ++a) {
    if (!js.is_anchor_complete(a)) continue;
    for (int x = 0; x < m; ++x) {
      if (x == a) continue;
      for (int y = x + 1; y < m; ++y) {
        if (y == a) continue;
        DifferenceDistribution d;
        d.anchor = js.models()[static_cast<size_t>(a)];
        d.model_a = js.models()[static_cast<size_t>(x)];
        d.model_b = js.models()[static_cast<size_t>(y)];
        d.support.reserve(static_cast<size_t>(n));
        long pos = 0, neg = 0;
        for (long i = 0; i < n; ++i) {
          int diff = js.verdict(static_cast<int>(i), x, a)->value() -
                     js.verdict(static_cast<int>(i), y, a)->value();
          d.support.push_back(static_cast<int8_t>(diff));
          if (diff > 0) ++pos;
          if (diff < 0) ++neg;
        }
        if (pos < neg) {  // orient so the edge is non-negative
          std::swap(d.model_a, d.model_b);
          std::swap(pos, neg);
          for (int8_t& v : d.support) v = static_cast<int8_t>(-v);
        }
        long nz = pos + neg;
        d.nonzero_fraction = static_cast<double>(nz) / static_cast<double>(n);
        d.effect_size = nz > 0 ? static_cast<double>(pos) / static_cast<double>(nz) - 0.5 : 0.0;
        if (!effect_interval ||
            (d.effect_size >= effect_interval->first && d.effect_size < effect_interval->second))
          out.push_back(std::move(d));
      }
    }
  }
  return out;
}

std::vector<int> default_power_grid() {
  std::vector<int> grid;
  for (int n = 50; n <= 2000; n += 50) grid.push_back(n);
  return grid;
}

std::optional<int> wilcoxon_power_n(const std::vector<DifferenceDistribution>& dists,
                                    EffectInterval effect_interval,
                                    const WilcoxonPowerConfig& cfg, uint64_t seed) {
  if (cfg.trials < 1) fail(Errc::invalid_spec, "trials must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail(Errc::invalid_spec, "alpha must lie in (0, 1)");
  if (!(cfg.power > 0.0 && cfg.power <= 1.0)) fail(Errc::invalid_spec, "power must lie in (0, 1]");

  std::vector<const DifferenceDistribution*> qualifying;
  for (const auto& d : dists) {
    if (d.support.empty()) fail(Errc::invalid_spec, "difference distribution with empty support");
    if (d.effect_size >= effect_interval.first && d.effect_size < effect_interval.second)
      qualifying.push_back(&d);
  }
  if (qualifying.empty())
    fail(Errc::no_qualifying_distribution, "no distribution has an effect size inside the interval");

  std::vector<int> grid = cfg.n_grid.empty() ? default_power_grid() : cfg.n_grid;
  if (!std::is_sorted(grid.begin(), grid.end()))
    fail(Errc::invalid_spec, "n_grid must be ascending");

  const int jobs = std::max(1, cfg.jobs);
  for (int n : grid) {
    if (n < 1) fail(Errc::invalid_spec, "grid sizes must be positive");
    // Trials are independent given counter-derived seeds, so splitting them
    // across workers cannot change the tally.
    std::vector<char> rejected(static_cast<size_t>(cfg.trials), 0);
    auto run_range = [&](int lo, int hi) {
      std::vector<double> sample(static_cast<size_t>(n));
      for (int t = lo; t < hi; ++t) {
        Rng rng(derive_seed(seed, {0x71c, static_cast<uint64_t>(n), static_cast<uint64_t>(t)}));
        const DifferenceDistribution& d =
            *qualifying[rng.below(qualifying.size())];
        for (int i = 0; i < n; ++i)
          sample[static_cast<size_t>(i)] =
              static_cast<double>(d.support[rng.below(d.support.size())]);
        WilcoxonResult res = wilcoxon_signed_rank_greater(sample);
        if (res.p_value < cfg.alpha) rejected[static_cast<size_t>(t)] = 1;
      }
    };
    if (jobs == 1 || cfg.trials < 2 * jobs) {
      run_range(0, cfg.trials);
    } else {
      std::vector<std::thread> workers;
      int chunk = (cfg.trials + jobs - 1) / jobs;
      for (int w = 0; w < jobs; ++w) {
        int lo = w * chunk, hi = std::min(cfg.trials, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back(run_range, lo, hi);
      }
      for (auto& th : workers) th.join();
    }
    long hits = std::count(rejected.begin(), rejected.end(), char{1});
    if (static_cast<double>(hits) / static_cast<double>(cfg.trials) >= cfg.power)
      return n;
  }
  return std::nullopt;
}

}  // namespace anchoreval
