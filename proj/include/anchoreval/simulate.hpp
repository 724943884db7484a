#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "anchoreval/ranking.hpp"
#include "anchoreval/verdicts.hpp"

namespace anchoreval {

// Latent-skill world with a tie-extended Bradley-Terry (Davidson) judge:
//   P(a beats b) : P(b beats a) : P(tie)  =  e^{ta} : e^{tb} : nu * e^{(ta+tb)/2}
// where ta, tb are the per-instruction perturbed skills. A win is scored +2
// when the perturbed skill gap exceeds clear_margin, else +1.
struct SyntheticWorld {
  std::vector<std::pair<std::string, double>> latent_skills;  // roster order
  double tie_strength = 0.0;        // nu >= 0
  double instruction_noise_sd = 0.0;  // per (instruction, model) skill jitter
  double clear_margin = 0.0;        // <= 0 means "use the skill IQR"
  long n_instructions = 0;
  uint64_t seed = 0;

  // Evenly spaced skills from lo (weakest, "m01") to hi (strongest).
  static SyntheticWorld ladder(int n_models, double skill_lo, double skill_hi);

  static SyntheticWorld from_json_text(const std::string& text);
  static SyntheticWorld from_file(const std::string& path);
  std::string to_json_text() const;

  double resolved_clear_margin() const;
  void validate() const;
  std::vector<std::string> model_names() const;
  // Models ordered best-to-worst by latent skill (ties broken by name).
  Ranking latent_ranking() const;
};

// Judge unreliability: each verdict is independently replaced by a uniformly
// random *other* level with this probability.
struct JudgeProfile {
  double extra_flip_rate = 0.0;  // in [0, 0.5)
};

JudgmentSet sample_anchor_judgments(const SyntheticWorld& world, const std::string& anchor,
                                    const JudgeProfile& judge = {});
JudgmentSet sample_quadratic_judgments(const SyntheticWorld& world,
                                       const JudgeProfile& judge = {});

// Strict per-instruction total order over latent + jitter; verdicts are the
// sign of the order difference, so every instruction is exactly transitive.
JudgmentSet noiseless_transitive_judgments(const SyntheticWorld& world);

}  // namespace anchoreval
