#include "anchoreval/studies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "anchoreval/rng.hpp"
#include "anchoreval/stats.hpp"

namespace anchoreval {

const SweepRow& SweepResult::find(const std::string& key, const std::string& statistic) const {
  for (const auto& r : rows)
    if (r.key == key && r.statistic == statistic) return r;
  fail(Errc::invalid_spec, "no sweep row (" + key + ", " + statistic + ")");
}

std::vector<AnchorQualityPoint> anchor_quality_sweep(const JudgmentSet& quadratic,
                                                     const Ranking& gold, Aggregation method,
                                                     const BTConfig& bt_cfg) {
  if (!quadratic.is_quadratic_complete())
    fail(Errc::incomplete_grid, "anchor sweep needs the full pairwise grid");
  std::vector<AnchorQualityPoint> points;
  points.reserve(static_cast<size_t>(quadratic.model_count()));
  for (const auto& anchor : quadratic.models()) {
    AnchorQualityPoint p;
    p.anchor = anchor;
    p.rank_in_gold = gold.rank_of(anchor);
    p.tau = anchor_quality(quadratic, anchor, gold, method, bt_cfg).tau;
    points.push_back(std::move(p));
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    if (a.rank_in_gold != b.rank_in_gold) return a.rank_in_gold < b.rank_in_gold;
    return a.anchor < b.anchor;
  });
  return points;
}

std::vector<long> win_count_histogram(const JudgmentSet& js, const std::string& anchor) {
  const int a = js.model_index(anchor);
  if (!js.is_anchor_complete(a))
    fail(Errc::incomplete_grid, "not every model was judged against " + anchor);
  const int m = js.model_count();
  const long n = js.instruction_count();
  std::vector<long> bins(static_cast<size_t>(m), 0);  // k in 0..M-1
  for (long i = 0; i < n; ++i) {
    int winners = 0;
    for (int j = 0; j < m; ++j) {
      if (j == a) continue;
      if (js.verdict(static_cast<int>(i), j, a)->value() > 0) ++winners;
    }
    ++bins[static_cast<size_t>(winners)];
  }
  return bins;
}

namespace {

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  int chunk = (n + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    int lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([=, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : workers) th.join();
}

SweepRow make_row(std::string key, std::string stat, const std::vector<double>& samples) {
  SweepRow row;
  row.key = std::move(key);
  row.statistic = std::move(stat);
  row.mean = mean_of(samples);
  row.std_dev = sample_std(samples);
  row.n_repeats = static_cast<int>(samples.size());
  return row;
}

}  // namespace

SweepResult sample_size_sweep(const JudgmentSet& quadratic, const Ranking& gold,
                              const std::vector<int>& sizes, int repeats, uint64_t seed,
                              Aggregation method, const BTConfig& bt_cfg, int jobs) {
  if (!quadratic.is_quadratic_complete())
    fail(Errc::incomplete_grid, "sample-size sweep needs the full pairwise grid");
  if (repeats < 1) fail(Errc::invalid_spec, "repeats must be >= 1");
  const long n = quadratic.instruction_count();
  for (int s : sizes)
    if (s < 1 || s > n) fail(Errc::subset_too_small, "size " + std::to_string(s));

  const int m = quadratic.model_count();
  SweepResult result;
  result.seed = seed;
  result.input_digest = quadratic.content_digest_hex();

  for (size_t si = 0; si < sizes.size(); ++si) {
    const int size = sizes[si];
    std::vector<double> tau_quad(static_cast<size_t>(repeats));
    std::vector<std::vector<double>> tau_anchor(
        static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(repeats)));
    parallel_for(repeats, jobs, [&](int rep) {
      Rng rng(derive_seed(seed, {0x51e, static_cast<uint64_t>(size), static_cast<uint64_t>(rep)}));
      std::vector<int> picks = rng.sample_indices(static_cast<int>(n), size);
      std::sort(picks.begin(), picks.end());
      JudgmentSet sub = quadratic.subset_instructions(picks);
      tau_quad[static_cast<size_t>(rep)] =
          kendall_tau(induce_ranking(bradley_terry_scores(sub, bt_cfg)), gold).tau;
      for (int a = 0; a < m; ++a)
        tau_anchor[static_cast<size_t>(a)][static_cast<size_t>(rep)] =
            anchor_quality(sub, sub.models()[static_cast<size_t>(a)], gold, method, bt_cfg).tau;
    });

    const std::string key = std::to_string(size);
    result.rows.push_back(make_row(key, "tau_quadratic", tau_quad));
    std::vector<double> anchor_means(static_cast<size_t>(repeats), 0.0);
    for (int rep = 0; rep < repeats; ++rep) {
      double acc = 0.0;
      for (int a = 0; a < m; ++a) acc += tau_anchor[static_cast<size_t>(a)][static_cast<size_t>(rep)];
      anchor_means[static_cast<size_t>(rep)] = acc / static_cast<double>(m);
    }
    result.rows.push_back(make_row(key, "tau_anchor_mean", anchor_means));
    for (int a = 0; a < m; ++a)
      result.rows.push_back(make_row(
          key, "tau_anchor[" + quadratic.models()[static_cast<size_t>(a)] + "]",
          tau_anchor[static_cast<size_t>(a)]));
  }
  return result;
}

SweepResult multi_anchor_sweep(const JudgmentSet& quadratic, int permutations, uint64_t seed,
                               const BTConfig& bt_cfg, int jobs) {
  if (!quadratic.is_quadratic_complete())
    fail(Errc::incomplete_grid, "multi-anchor sweep needs the full pairwise grid");
  if (permutations < 1) fail(Errc::invalid_spec, "permutations must be >= 1");
  const int m = quadratic.model_count();

  const Ranking gold = induce_ranking(bradley_terry_scores(quadratic, bt_cfg));
  const auto full_counts = win_count_matrix(quadratic, bt_cfg.tie_policy);

  // tau[k-1][perm]
  std::vector<std::vector<double>> tau(static_cast<size_t>(m),
                                       std::vector<double>(static_cast<size_t>(permutations)));
  parallel_for(permutations, jobs, [&](int perm) {
    Rng rng(derive_seed(seed, {0x3ac, static_cast<uint64_t>(perm)}));
    std::vector<int> order(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<size_t>(i)] = i;
    rng.shuffle(order);
    // Counts restricted to comparisons touching the anchor set, grown one
    // anchor at a time.
    std::vector<std::vector<double>> w(static_cast<size_t>(m),
                                       std::vector<double>(static_cast<size_t>(m), 0.0));
    std::vector<char> in_set(static_cast<size_t>(m), 0);
    for (int k = 1; k <= m; ++k) {
      int c = order[static_cast<size_t>(k - 1)];
      for (int x = 0; x < m; ++x) {
        if (x == c || in_set[static_cast<size_t>(x)]) continue;  // pair already covered
        w[static_cast<size_t>(c)][static_cast<size_t>(x)] +=
            full_counts[static_cast<size_t>(c)][static_cast<size_t>(x)];
        w[static_cast<size_t>(x)][static_cast<size_t>(c)] +=
            full_counts[static_cast<size_t>(x)][static_cast<size_t>(c)];
      }
      in_set[static_cast<size_t>(c)] = 1;
      std::vector<double> s = bradley_terry_fit(w, bt_cfg);
      ScoreVector sv;
      sv.method = Aggregation::bradley_terry;
      for (int i = 0; i < m; ++i)
        sv.scores.emplace_back(quadratic.models()[static_cast<size_t>(i)],
                               s[static_cast<size_t>(i)]);
      tau[static_cast<size_t>(k - 1)][static_cast<size_t>(perm)] =
          kendall_tau(induce_ranking(sv), gold).tau;
    }
  });

  SweepResult result;
  result.seed = seed;
  result.input_digest = quadratic.content_digest_hex();
  for (int k = 1; k <= m; ++k) {
    const auto& samples = tau[static_cast<size_t>(k - 1)];
    result.rows.push_back(make_row(std::to_string(k), "tau", samples));
    SweepRow min_row;
    min_row.key = std::to_string(k);
    min_row.statistic = "tau_min";
    min_row.mean = *std::min_element(samples.begin(), samples.end());
    min_row.n_repeats = permutations;
    result.rows.push_back(min_row);
  }
  return result;
}

InformativenessQualityResult informativeness_vs_quality(const JudgmentSet& quadratic,
                                                        const Ranking& gold, Aggregation method,
                                                        Granularity granularity,
                                                        const BTConfig& bt_cfg) {
  if (!quadratic.is_quadratic_complete())
    fail(Errc::incomplete_grid, "informativeness-quality study needs the full pairwise grid");
  InformativenessQualityResult res;
  res.input_digest = quadratic.content_digest_hex();
  std::vector<double> xs, ys;
  for (const auto& anchor : quadratic.models()) {
    InformativenessQualityPoint p;
    p.anchor = anchor;
    p.informativeness = informativeness(quadratic, anchor, granularity).rate;
    p.tau = anchor_quality(quadratic, anchor, gold, method, bt_cfg).tau;
    xs.push_back(p.informativeness);
    ys.push_back(p.tau);
    res.points.push_back(std::move(p));
  }
  OlsFit fit = ols_fit(xs, ys);
  res.slope = fit.slope;
  res.intercept = fit.intercept;
  res.r_squared = fit.r_squared;
  return res;
}

}  // namespace anchoreval
