#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anchoreval/ranking.hpp"
#include "anchoreval/verdicts.hpp"

namespace anchoreval {

// five_level compares raw verdicts, three_level compares their signs.
enum class Granularity { five_level, three_level };

const char* granularity_name(Granularity g);
Granularity granularity_from_name(const std::string& name);

// Denominator of the rate. Only pairs of non-anchor models can ever differ,
// so opponent_pairs (C(M-1,2) per instruction) is the default; all_pairs
// (C(M,2)) additionally counts the anchor's own never-informative pairs,
// which is the convention under which the transitive-judge bound of 1/2
// holds for every anchor.
enum class Normalizer { opponent_pairs, all_pairs };

const char* normalizer_name(Normalizer n);
Normalizer normalizer_from_name(const std::string& name);

struct InformativenessReport {
  std::string anchor;
  double rate = 0.0;  // fraction of (instruction, opponent-pair) cells whose verdicts differ
  Granularity granularity = Granularity::five_level;
  long n_instructions_used = 0;
  long pairs_counted = 0;  // n_instructions_used * C(opponents, 2)
  int n_models_used = 0;   // opponents + the anchor
};

// Fraction of informative comparisons: over every instruction and every
// unordered pair of non-anchor models, how often the two verdicts against the
// anchor differ.
InformativenessReport informativeness(const JudgmentSet& js, const std::string& anchor,
                                      Granularity granularity = Granularity::five_level,
                                      Normalizer normalizer = Normalizer::opponent_pairs);

// Same rate on a uniformly sampled instruction subset and opponent subset
// (n_models - 1 opponents drawn from the roster minus the anchor).
// n_instructions = N and n_models = M reproduce the full rate exactly.
InformativenessReport estimate_informativeness(const JudgmentSet& js, const std::string& anchor,
                                               int n_instructions, int n_models, uint64_t seed,
                                               Granularity granularity = Granularity::five_level);

struct EstimatorValidationRow {
  int pool_size = 0;             // models drawn per repeat
  double mean_pearson_r = 0.0;   // estimate-vs-full correlation across anchors
  double median_pearson_r = 0.0;
  double std_pearson_r = 0.0;
  double extremal_bottom3_rate = -1.0;  // -1 when no gold ranking was given
  int repeats = 0;
};

// For each pool size in [m_lo, m_hi]: draw a model pool and an instruction
// subset per repeat, estimate every anchor's informativeness on it, and
// correlate the estimates with the full-data rates. When `gold` is given,
// also reports how often the top- and bottom-ranked models both land in the
// bottom three estimates.
std::vector<EstimatorValidationRow> validate_estimator(
    const JudgmentSet& js, int m_lo, int m_hi, int n_instructions, int repeats, uint64_t seed,
    const Ranking* gold = nullptr, Granularity granularity = Granularity::five_level);

}  // namespace anchoreval
