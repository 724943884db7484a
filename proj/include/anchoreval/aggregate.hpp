#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anchoreval/verdicts.hpp"

namespace anchoreval {

enum class Aggregation { win_rate, bradley_terry };

const char* aggregation_name(Aggregation a);
Aggregation aggregation_from_name(const std::string& name);

// Win-rate collapse: {-2,-1} -> 0, {0} -> 0.5, {1,2} -> 1, from the subject
// model's perspective.
double collapse_to_winrate(Verdict v);
// Sign collapse for Bradley-Terry: magnitude is deliberately unused there.
int collapse_to_sign(Verdict v);

struct ScoreVector {
  Aggregation method = Aggregation::win_rate;
  std::optional<std::string> anchor;
  std::vector<std::pair<std::string, double>> scores;  // roster order

  double score_of(const std::string& model) const;
  bool has_model(const std::string& model) const;
};

struct BTConfig {
  // Added to the win count of every ordered pair; keeps scores of models that
  // win or lose everything finite without materially moving interior scores.
  double prior_pseudo_count = 0.5;
  int max_iterations = 10000;
  double convergence_tol = 1e-10;
  enum class TiePolicy { half_win, drop } tie_policy = TiePolicy::half_win;
};

// s_j = mean collapsed win-rate of j against the anchor; the anchor itself
// scores 1 - mean(opponent scores).
ScoreVector winrate_scores(const JudgmentSet& js, const std::string& anchor);

// Maximum-likelihood Bradley-Terry scores on sign-collapsed verdicts,
// minorization-maximization iteration, translation-normalized to mean 0.
// Requires the comparison graph (before the prior) to be connected.
ScoreVector bradley_terry_scores(const JudgmentSet& js, const BTConfig& cfg = {});

// Fractional win counts per ordered (winner, loser) pair after sign collapse
// and tie handling.
std::vector<std::vector<double>> win_count_matrix(const JudgmentSet& js,
                                                  BTConfig::TiePolicy tie_policy);

// The fit itself, over an arbitrary count matrix; returns mean-zero log
// strengths. Connectivity is checked before the prior is applied.
std::vector<double> bradley_terry_fit(const std::vector<std::vector<double>>& win_counts,
                                      const BTConfig& cfg);

// Entry (a, b) = mean collapsed win-rate of a over b; antisymmetric around
// 0.5, diagonal fixed at 0.5. Indices follow the roster.
std::vector<std::vector<double>> quadratic_winrate_matrix(const JudgmentSet& js);

// Mean of each row of the quadratic win-rate matrix (diagonal excluded);
// the win-rate analogue of a full-grid ranking.
ScoreVector quadratic_winrate_scores(const JudgmentSet& js);

}  // namespace anchoreval
