#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anchoreval/informativeness.hpp"
#include "anchoreval/ranking.hpp"

namespace anchoreval {

struct SweepRow {
  std::string key;
  std::string statistic;
  double mean = 0.0;
  double std_dev = 0.0;  // meaningful only when n_repeats > 1
  int n_repeats = 1;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string input_digest;
  uint64_t seed = 0;

  const SweepRow& find(const std::string& key, const std::string& statistic) const;
};

// Every model takes a turn as the anchor of its own slice of a quadratic set;
// the induced ranking is correlated against `gold`.
struct AnchorQualityPoint {
  std::string anchor;
  int rank_in_gold = 0;
  double tau = 0.0;
};
std::vector<AnchorQualityPoint> anchor_quality_sweep(const JudgmentSet& quadratic,
                                                     const Ranking& gold, Aggregation method,
                                                     const BTConfig& bt_cfg = {});

// Bin k = number of instructions on which exactly k models received a
// positive verdict against the anchor. Bins sum to N.
std::vector<long> win_count_histogram(const JudgmentSet& js, const std::string& anchor);

// Instruction subsampling sweep: per size, tau of the quadratic ranking and
// of every anchor-based ranking against `gold`, averaged over repeats.
// Subsamples are drawn without replacement within a repeat.
SweepResult sample_size_sweep(const JudgmentSet& quadratic, const Ranking& gold,
                              const std::vector<int>& sizes, int repeats, uint64_t seed,
                              Aggregation method = Aggregation::bradley_terry,
                              const BTConfig& bt_cfg = {}, int jobs = 1);

// Growing random anchor sets: per set size k, a Bradley-Terry fit on the
// union of all comparisons touching any of the k anchors, correlated against
// the full-grid Bradley-Terry ranking. tau reaches exactly 1 at k = M.
SweepResult multi_anchor_sweep(const JudgmentSet& quadratic, int permutations, uint64_t seed,
                               const BTConfig& bt_cfg = {}, int jobs = 1);

// Per-anchor informativeness paired with anchor quality, plus an ordinary
// least-squares fit of tau on informativeness.
struct InformativenessQualityPoint {
  std::string anchor;
  double informativeness = 0.0;
  double tau = 0.0;
};
struct InformativenessQualityResult {
  std::vector<InformativenessQualityPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::string input_digest;
};
InformativenessQualityResult informativeness_vs_quality(
    const JudgmentSet& quadratic, const Ranking& gold,
    Aggregation method = Aggregation::win_rate,
    Granularity granularity = Granularity::five_level, const BTConfig& bt_cfg = {});

}  // namespace anchoreval
