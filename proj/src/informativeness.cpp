#include "anchoreval/informativeness.hpp"

#include <algorithm>
#include <cmath>

#include "anchoreval/aggregate.hpp"
#include "anchoreval/rng.hpp"
#include "anchoreval/stats.hpp"

namespace anchoreval {

const char* granularity_name(Granularity g) {
  return g == Granularity::five_level ? "five_level" : "three_level";
}

Granularity granularity_from_name(const std::string& name) {
  if (name == "five_level" || name == "five") return Granularity::five_level;
  if (name == "three_level" || name == "three") return Granularity::three_level;
  fail(Errc::usage, "unknown granularity '" + name + "'");
}

const char* normalizer_name(Normalizer n) {
  return n == Normalizer::opponent_pairs ? "opponent_pairs" : "all_pairs";
}

Normalizer normalizer_from_name(const std::string& name) {
  if (name == "opponent_pairs" || name == "opponent-pairs") return Normalizer::opponent_pairs;
  if (name == "all_pairs" || name == "all-pairs") return Normalizer::all_pairs;
  fail(Errc::usage, "unknown normalizer '" + name + "'");
}

namespace {

int collapse(Verdict v, Granularity g) {
  return g == Granularity::five_level ? v.value() : collapse_to_sign(v);
}

InformativenessReport rate_over(const JudgmentSet& js, int anchor,
                                const std::vector<int>& instructions,
                                const std::vector<int>& opponents, Granularity g,
                                Normalizer normalizer = Normalizer::opponent_pairs) {
  long informative = 0;
  std::vector<int> row(opponents.size());
  for (int i : instructions) {
    for (size_t k = 0; k < opponents.size(); ++k)
      row[k] = collapse(*js.verdict(i, opponents[k], anchor), g);
    for (size_t a = 0; a < row.size(); ++a)
      for (size_t b = a + 1; b < row.size(); ++b)
        if (row[a] != row[b]) ++informative;
  }
  InformativenessReport rep;
  rep.anchor = js.models()[static_cast<size_t>(anchor)];
  rep.granularity = g;
  rep.n_instructions_used = static_cast<long>(instructions.size());
  long k = static_cast<long>(opponents.size());
  long denom_pairs = normalizer == Normalizer::opponent_pairs ? k * (k - 1) / 2
                                                              : (k + 1) * k / 2;
  rep.pairs_counted = rep.n_instructions_used * denom_pairs;
  rep.n_models_used = static_cast<int>(k + 1);
  rep.rate = rep.pairs_counted > 0
                 ? static_cast<double>(informative) / static_cast<double>(rep.pairs_counted)
                 : 0.0;
  return rep;
}

}  // namespace

InformativenessReport informativeness(const JudgmentSet& js, const std::string& anchor,
                                      Granularity granularity, Normalizer normalizer) {
  const int a = js.model_index(anchor);
  if (js.model_count() < 3)
    fail(Errc::too_few_models, "informativeness needs at least two non-anchor models");
  if (!js.is_anchor_complete(a))
    fail(Errc::incomplete_grid, "not every model was judged against " + anchor);
  std::vector<int> instructions(static_cast<size_t>(js.instruction_count()));
  for (size_t i = 0; i < instructions.size(); ++i) instructions[i] = static_cast<int>(i);
  std::vector<int> opponents;
  for (int j = 0; j < js.model_count(); ++j)
    if (j != a) opponents.push_back(j);
  return rate_over(js, a, instructions, opponents, granularity, normalizer);
}

InformativenessReport estimate_informativeness(const JudgmentSet& js, const std::string& anchor,
                                               int n_instructions, int n_models, uint64_t seed,
                                               Granularity granularity) {
  const int a = js.model_index(anchor);
  const int m = js.model_count();
  const long n = js.instruction_count();
  if (n_models < 3) fail(Errc::subset_too_small, "need at least 3 models (2 opponents)");
  if (n_models > m) fail(Errc::subset_too_small, "model subset larger than roster");
  if (n_instructions < 1 || n_instructions > n)
    fail(Errc::subset_too_small, "instruction subset out of range");
  if (!js.is_anchor_complete(a))
    fail(Errc::incomplete_grid, "not every model was judged against " + anchor);

  Rng rng(derive_seed(seed, {0x1f0, static_cast<uint64_t>(a)}));
  std::vector<int> instructions =
      rng.sample_indices(static_cast<int>(n), n_instructions);
  std::sort(instructions.begin(), instructions.end());

  std::vector<int> candidates;
  for (int j = 0; j < m; ++j)
    if (j != a) candidates.push_back(j);
  std::vector<int> picks = rng.sample_indices(static_cast<int>(candidates.size()), n_models - 1);
  std::vector<int> opponents;
  opponents.reserve(picks.size());
  for (int p : picks) opponents.push_back(candidates[static_cast<size_t>(p)]);
  std::sort(opponents.begin(), opponents.end());

  return rate_over(js, a, instructions, opponents, granularity);
}

std::vector<EstimatorValidationRow> validate_estimator(const JudgmentSet& js, int m_lo, int m_hi,
                                                       int n_instructions, int repeats,
                                                       uint64_t seed, const Ranking* gold,
                                                       Granularity granularity) {
  const int m = js.model_count();
  const long n = js.instruction_count();
  if (repeats < 1) fail(Errc::invalid_spec, "repeats must be >= 1");
  if (m_lo < 3 || m_hi > m || m_lo > m_hi) fail(Errc::subset_too_small, "bad model range");
  if (n_instructions < 1 || n_instructions > n)
    fail(Errc::subset_too_small, "instruction subset out of range");

  // Full-data reference rates, one per anchor.
  std::vector<double> full_rates(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a)
    full_rates[static_cast<size_t>(a)] =
        informativeness(js, js.models()[static_cast<size_t>(a)], granularity).rate;

  std::string top_model, bottom_model;
  if (gold) {
    top_model = gold->order.front();
    bottom_model = gold->order.back();
  }

  std::vector<EstimatorValidationRow> rows;
  for (int pool_size = m_lo; pool_size <= m_hi; ++pool_size) {
    std::vector<double> rs;
    int extremal_hits = 0;
    for (int rep = 0; rep < repeats; ++rep) {
      Rng rng(derive_seed(seed, {0xe57, static_cast<uint64_t>(pool_size),
                                 static_cast<uint64_t>(rep)}));
      std::vector<int> pool = rng.sample_indices(m, pool_size);
      std::sort(pool.begin(), pool.end());
      std::vector<int> instructions = rng.sample_indices(static_cast<int>(n), n_instructions);
      std::sort(instructions.begin(), instructions.end());

      // One shared pool per repeat; each anchor is scored against the pool
      // minus itself.
      std::vector<double> estimates(static_cast<size_t>(m));
      for (int a = 0; a < m; ++a) {
        std::vector<int> opponents;
        for (int p : pool)
          if (p != a) opponents.push_back(p);
        estimates[static_cast<size_t>(a)] =
            rate_over(js, a, instructions, opponents, granularity).rate;
      }
      rs.push_back(pearson_correlation(estimates, full_rates));

      if (gold) {
        std::vector<int> by_estimate(static_cast<size_t>(m));
        for (int a = 0; a < m; ++a) by_estimate[static_cast<size_t>(a)] = a;
        std::stable_sort(by_estimate.begin(), by_estimate.end(), [&](int x, int y) {
          return estimates[static_cast<size_t>(x)] < estimates[static_cast<size_t>(y)];
        });
        bool top_in = false, bottom_in = false;
        for (int k = 0; k < 3 && k < m; ++k) {
          const std::string& name = js.models()[static_cast<size_t>(by_estimate[static_cast<size_t>(k)])];
          if (name == top_model) top_in = true;
          if (name == bottom_model) bottom_in = true;
        }
        if (top_in && bottom_in) ++extremal_hits;
      }
    }
    EstimatorValidationRow row;
    row.pool_size = pool_size;
    row.mean_pearson_r = mean_of(rs);
    row.median_pearson_r = median_of(rs);
    row.std_pearson_r = sample_std(rs);
    row.extremal_bottom3_rate =
        gold ? static_cast<double>(extremal_hits) / static_cast<double>(repeats) : -1.0;
    row.repeats = repeats;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace anchoreval
