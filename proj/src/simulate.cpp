#include "anchoreval/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "anchoreval/rng.hpp"

namespace anchoreval {

namespace {

constexpr const char* kSyntheticJudge = "synthetic-judge";

std::string instruction_label(long i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "q%06ld", i + 1);
  return buf;
}

std::string model_label(int j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m%02d", j + 1);
  return buf;
}

}  // namespace

SyntheticWorld SyntheticWorld::ladder(int n_models, double skill_lo, double skill_hi) {
  if (n_models < 2) fail(Errc::too_few_models, "a world needs at least two models");
  SyntheticWorld w;
  w.latent_skills.reserve(static_cast<size_t>(n_models));
  for (int j = 0; j < n_models; ++j) {
    double t = n_models > 1 ? static_cast<double>(j) / (n_models - 1) : 0.0;
    w.latent_skills.emplace_back(model_label(j), skill_lo + t * (skill_hi - skill_lo));
  }
  return w;
}

void SyntheticWorld::validate() const {
  if (latent_skills.size() < 2) fail(Errc::too_few_models, "a world needs at least two models");
  if (tie_strength < 0.0) fail(Errc::invalid_spec, "tie_strength must be >= 0");
  if (instruction_noise_sd < 0.0) fail(Errc::invalid_spec, "instruction_noise_sd must be >= 0");
  if (n_instructions < 1) fail(Errc::invalid_spec, "n_instructions must be >= 1");
  std::vector<std::string> names = model_names();
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    fail(Errc::invalid_spec, "model names must be unique");
}

std::vector<std::string> SyntheticWorld::model_names() const {
  std::vector<std::string> names;
  names.reserve(latent_skills.size());
  for (const auto& [n, s] : latent_skills) names.push_back(n);
  return names;
}

Ranking SyntheticWorld::latent_ranking() const {
  ScoreVector sv;
  sv.method = Aggregation::win_rate;
  sv.scores = latent_skills;
  return induce_ranking(sv);
}

double SyntheticWorld::resolved_clear_margin() const {
  if (clear_margin > 0.0) return clear_margin;
  // Interquartile range of the skills; falls back to 1.0 when degenerate.
  std::vector<double> s;
  s.reserve(latent_skills.size());
  for (const auto& [n, v] : latent_skills) s.push_back(v);
  std::sort(s.begin(), s.end());
  auto quantile = [&](double q) {
    double pos = q * static_cast<double>(s.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, s.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return s[lo] * (1.0 - frac) + s[hi] * frac;
  };
  double iqr = quantile(0.75) - quantile(0.25);
  return iqr > 0.0 ? iqr : 1.0;
}

std::string SyntheticWorld::to_json_text() const {
  nlohmann::json j;
  nlohmann::json models = nlohmann::json::array();
  for (const auto& [name, skill] : latent_skills)
    models.push_back({{"name", name}, {"skill", skill}});
  j["models"] = models;
  j["tie_strength"] = tie_strength;
  j["instruction_noise_sd"] = instruction_noise_sd;
  j["clear_margin"] = clear_margin;
  j["n_instructions"] = n_instructions;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

SyntheticWorld SyntheticWorld::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::malformed_record, std::string("world config: ") + e.what());
  }
  SyntheticWorld w;
  try {
    for (const auto& mj : j.at("models"))
      w.latent_skills.emplace_back(mj.at("name").get<std::string>(), mj.at("skill").get<double>());
    w.tie_strength = j.value("tie_strength", 0.0);
    w.instruction_noise_sd = j.value("instruction_noise_sd", 0.0);
    w.clear_margin = j.value("clear_margin", 0.0);
    w.n_instructions = j.at("n_instructions").get<long>();
    w.seed = j.value("seed", uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::malformed_record, std::string("world config: ") + e.what());
  }
  w.validate();
  return w;
}

SyntheticWorld SyntheticWorld::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_json_text(os.str());
}

namespace {

// Pairs to fill per instruction, by roster index. Anchor mode fills the star
// around the anchor; quadratic mode fills every unordered pair.
std::vector<std::pair<int, int>> cell_plan(int m, int anchor /* -1 = quadratic */) {
  std::vector<std::pair<int, int>> plan;
  if (anchor >= 0) {
    for (int j = 0; j < m; ++j)
      if (j != anchor) plan.emplace_back(j, anchor);
  } else {
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) plan.emplace_back(a, b);
  }
  return plan;
}

JudgmentSet sample_world(const SyntheticWorld& world, int anchor, const JudgeProfile& judge) {
  world.validate();
  if (judge.extra_flip_rate < 0.0 || judge.extra_flip_rate >= 0.5)
    fail(Errc::invalid_spec, "extra_flip_rate must lie in [0, 0.5)");
  const int m = static_cast<int>(world.latent_skills.size());
  const double margin = world.resolved_clear_margin();
  const double nu = world.tie_strength;
  auto plan = cell_plan(m, anchor);
  static const int kLevels[5] = {-2, -1, 0, 1, 2};

  JudgmentSet::Builder b;
  b.declare_roster(world.model_names());
  std::vector<double> theta(static_cast<size_t>(m));
  for (long i = 0; i < world.n_instructions; ++i) {
    // One generator per instruction, so sampling instructions in parallel
    // would reproduce the same set byte for byte.
    Rng rng(derive_seed(world.seed, {0x5a3, static_cast<uint64_t>(i)}));
    for (int j = 0; j < m; ++j)
      theta[static_cast<size_t>(j)] =
          world.latent_skills[static_cast<size_t>(j)].second +
          (world.instruction_noise_sd > 0.0 ? rng.normal(0.0, world.instruction_noise_sd) : 0.0);
    const std::string instr = instruction_label(i);
    for (auto [x, y] : plan) {
      double d = theta[static_cast<size_t>(x)] - theta[static_cast<size_t>(y)];
      // Davidson weights scaled by e^{-(tx+ty)/2} for stability.
      double wx = std::exp(0.5 * d), wy = std::exp(-0.5 * d);
      double z = wx + wy + nu;
      double u = rng.uniform() * z;
      int v;
      if (u < wx)
        v = std::fabs(d) > margin ? 2 : 1;
      else if (u < wx + wy)
        v = std::fabs(d) > margin ? -2 : -1;
      else
        v = 0;
      if (judge.extra_flip_rate > 0.0 && rng.uniform() < judge.extra_flip_rate) {
        int pick = static_cast<int>(rng.below(4));
        for (int lv : kLevels) {
          if (lv == v) continue;
          if (pick == 0) {
            v = lv;
            break;
          }
          --pick;
        }
      }
      b.add(VerdictRecord{instr, world.latent_skills[static_cast<size_t>(x)].first,
                          world.latent_skills[static_cast<size_t>(y)].first, kSyntheticJudge,
                          Verdict::from_int(v)});
    }
  }
  return std::move(b).build();
}

}  // namespace

JudgmentSet sample_anchor_judgments(const SyntheticWorld& world, const std::string& anchor,
                                    const JudgeProfile& judge) {
  const auto names = world.model_names();
  auto it = std::find(names.begin(), names.end(), anchor);
  if (it == names.end()) fail(Errc::unknown_model, anchor);
  return sample_world(world, static_cast<int>(it - names.begin()), judge);
}

JudgmentSet sample_quadratic_judgments(const SyntheticWorld& world, const JudgeProfile& judge) {
  return sample_world(world, -1, judge);
}

JudgmentSet noiseless_transitive_judgments(const SyntheticWorld& world) {
  world.validate();
  const int m = static_cast<int>(world.latent_skills.size());
  JudgmentSet::Builder b;
  b.declare_roster(world.model_names());
  std::vector<double> theta(static_cast<size_t>(m));
  for (long i = 0; i < world.n_instructions; ++i) {
    Rng rng(derive_seed(world.seed, {0x7e1, static_cast<uint64_t>(i)}));
    for (int j = 0; j < m; ++j)
      theta[static_cast<size_t>(j)] =
          world.latent_skills[static_cast<size_t>(j)].second +
          (world.instruction_noise_sd > 0.0 ? rng.normal(0.0, world.instruction_noise_sd) : 0.0);
    const std::string instr = instruction_label(i);
    for (int a = 0; a < m; ++a)
      for (int bdx = a + 1; bdx < m; ++bdx) {
        double d = theta[static_cast<size_t>(a)] - theta[static_cast<size_t>(bdx)];
        int v = (d > 0.0) - (d < 0.0);
        b.add(VerdictRecord{instr, world.latent_skills[static_cast<size_t>(a)].first,
                            world.latent_skills[static_cast<size_t>(bdx)].first, kSyntheticJudge,
                            Verdict::from_int(v)});
      }
  }
  return std::move(b).build();
}

}  // namespace anchoreval
