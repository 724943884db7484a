#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anchoreval/informativeness.hpp"
#include "anchoreval/power.hpp"

namespace anchoreval {

enum class EvalMode { quadratic, natural_anchor, targeted_pairs, anchored_leaderboard };

const char* eval_mode_name(EvalMode m);

struct EvaluationContext {
  int n_models = 2;
  bool has_natural_baseline = false;
  bool needs_full_ranking = false;
  double expected_effect_size = 0.05;  // win-rate edge among discordant pairs
  // Optional external ranks (1 = best), e.g. from a public leaderboard.
  std::map<std::string, int> candidate_prior_ranks;

  void validate() const;
  static EvaluationContext from_json_text(const std::string& text);
};

// Mode selection:
//   natural baseline present        -> natural_anchor
//   otherwise, up to three models   -> quadratic (same judgment budget)
//   otherwise, no full ranking need -> targeted_pairs (report pair win-rates,
//                                      never absolute leaderboard scores)
//   otherwise                       -> anchored_leaderboard
EvalMode recommend_mode(const EvaluationContext& ctx);

struct ShortlistEntry {
  std::string model;
  double estimated_informativeness = 0.0;
  bool extremal = false;  // best or worst by prior rank (or pilot win-rate)
};

// Candidates ordered by informativeness estimated on pilot data, most
// informative first. Extremal candidates are flagged, not removed.
std::vector<ShortlistEntry> shortlist_anchors(
    const JudgmentSet& pilot, const std::vector<std::string>& candidates, int n_instructions,
    uint64_t seed, const std::map<std::string, int>* prior_ranks = nullptr);

struct Recommendation {
  EvalMode mode = EvalMode::quadratic;
  std::vector<ShortlistEntry> anchor_shortlist;
  PowerPlan required_n;
  std::vector<std::string> warnings;
};

struct AdviceReport {
  Recommendation recommendation;
  std::optional<InformativenessReport> informativeness;
  PowerPlan plan;
  long dataset_n = 0;
  bool sufficient = false;

  std::string to_json_text() const;
  std::string to_text() const;
};

// Machine-readable report with a sufficiency verdict (dataset_n vs n_total).
AdviceReport build_report(const Recommendation& rec,
                          const std::optional<InformativenessReport>& informativeness,
                          const PowerPlan& plan, long dataset_n);

}  // namespace anchoreval
