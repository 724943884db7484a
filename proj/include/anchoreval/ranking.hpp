#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "anchoreval/aggregate.hpp"

namespace anchoreval {

struct Ranking {
  std::vector<std::string> order;                     // best to worst
  std::vector<std::vector<std::string>> tie_groups;   // best group first
  std::optional<ScoreVector> source_scores;

  // 1 + number of models with strictly better score (competition rank).
  int rank_of(const std::string& model) const;
  bool has_model(const std::string& model) const;
  std::vector<std::string> sorted_roster() const;
};

struct TauResult {
  double tau = 0.0;
  double p_value = 1.0;
  long n_concordant = 0;
  long n_discordant = 0;
  long n_tied = 0;  // pairs tied in at least one ranking
  // Variant bookkeeping: the coefficient is tau-b; the p-value comes from the
  // exact permutation distribution (only defined without ties, used for
  // M <= 10) or the normal approximation with tie correction.
  const char* variant = "tau_b";
  const char* p_method = "normal_approx";
};

// Descending score order; exact score equality forms a tie group. Inside a
// tie group models are listed by name, which affects display only.
Ranking induce_ranking(const ScoreVector& scores);

// Tie-corrected Kendall tau-b between two rankings over the same roster.
TauResult kendall_tau(const Ranking& a, const Ranking& b);

// Aggregate the anchor slice of js, rank it, and correlate with `gold`.
TauResult anchor_quality(const JudgmentSet& js, const std::string& anchor, const Ranking& gold,
                         Aggregation method, const BTConfig& bt_cfg = {});

// Two-column CSV, (model, score), higher is better; '#' lines and an
// optional "model,score" header are skipped.
Ranking ranking_from_score_csv(std::istream& in);
Ranking ranking_from_score_file(const std::string& path);

}  // namespace anchoreval
