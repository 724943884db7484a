#include "anchoreval/advise.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

#include <json.hpp>

#include "anchoreval/aggregate.hpp"
#include "anchoreval/rng.hpp"
#include "anchoreval/table.hpp"

namespace anchoreval {

const char* eval_mode_name(EvalMode m) {
  switch (m) {
    case EvalMode::quadratic: return "quadratic";
    case EvalMode::natural_anchor: return "natural_anchor";
    case EvalMode::targeted_pairs: return "targeted_pairs";
    case EvalMode::anchored_leaderboard: return "anchored_leaderboard";
  }
  return "unknown";
}

void EvaluationContext::validate() const {
  if (n_models < 2) fail(Errc::invalid_spec, "n_models must be >= 2");
  if (!(expected_effect_size > 0.0 && expected_effect_size < 0.5))
    fail(Errc::invalid_spec, "expected_effect_size must lie in (0, 0.5)");
}

EvaluationContext EvaluationContext::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::malformed_record, std::string("context config: ") + e.what());
  }
  EvaluationContext ctx;
  try {
    ctx.n_models = j.at("n_models").get<int>();
    ctx.has_natural_baseline = j.value("has_natural_baseline", false);
    ctx.needs_full_ranking = j.value("needs_full_ranking", false);
    ctx.expected_effect_size = j.value("expected_effect_size", 0.05);
    if (j.contains("candidate_prior_ranks"))
      for (auto& [name, rank] : j["candidate_prior_ranks"].items())
        ctx.candidate_prior_ranks[name] = rank.get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::malformed_record, std::string("context config: ") + e.what());
  }
  ctx.validate();
  return ctx;
}

EvalMode recommend_mode(const EvaluationContext& ctx) {
  ctx.validate();
  if (ctx.has_natural_baseline) return EvalMode::natural_anchor;
  if (ctx.n_models <= 3) return EvalMode::quadratic;
  if (!ctx.needs_full_ranking) return EvalMode::targeted_pairs;
  return EvalMode::anchored_leaderboard;
}

std::vector<ShortlistEntry> shortlist_anchors(const JudgmentSet& pilot,
                                              const std::vector<std::string>& candidates,
                                              int n_instructions, uint64_t seed,
                                              const std::map<std::string, int>* prior_ranks) {
  if (candidates.empty()) fail(Errc::invalid_spec, "no candidate anchors given");
  if (n_instructions < 1 || n_instructions > pilot.instruction_count())
    fail(Errc::insufficient_pilot_data, "pilot has too few instructions");
  for (const auto& c : candidates) {
    if (!pilot.find_model(c))
      fail(Errc::insufficient_pilot_data, "pilot data has no judgments for " + c);
    if (!pilot.is_anchor_complete(c))
      fail(Errc::insufficient_pilot_data, "pilot grid is incomplete for " + c);
  }

  std::vector<ShortlistEntry> entries;
  for (size_t k = 0; k < candidates.size(); ++k) {
    ShortlistEntry e;
    e.model = candidates[k];
    e.estimated_informativeness =
        estimate_informativeness(pilot, e.model, n_instructions, pilot.model_count(),
                                 derive_seed(seed, {0xad7, static_cast<uint64_t>(k)}))
            .rate;
    entries.push_back(std::move(e));
  }

  // Extremal flagging: prior ranks when available, pilot win-rates otherwise.
  if (prior_ranks && !prior_ranks->empty()) {
    int best = INT_MAX, worst = INT_MIN;
    for (const auto& [name, rank] : *prior_ranks) {
      best = std::min(best, rank);
      worst = std::max(worst, rank);
    }
    for (auto& e : entries) {
      auto it = prior_ranks->find(e.model);
      if (it != prior_ranks->end() && (it->second == best || it->second == worst) && best != worst)
        e.extremal = true;
    }
  } else {
    std::map<std::string, double> winrate;
    std::map<std::string, long> counted;
    pilot.for_each_cell([&](int, int a, int b, Verdict v) {
      const std::string& na = pilot.models()[static_cast<size_t>(a)];
      const std::string& nb = pilot.models()[static_cast<size_t>(b)];
      winrate[na] += collapse_to_winrate(v);
      winrate[nb] += 1.0 - collapse_to_winrate(v);
      ++counted[na];
      ++counted[nb];
    });
    double best = -1.0, worst = 2.0;
    for (auto& [name, acc] : winrate) {
      acc /= static_cast<double>(counted[name]);
      best = std::max(best, acc);
      worst = std::min(worst, acc);
    }
    for (auto& e : entries) {
      auto it = winrate.find(e.model);
      if (it != winrate.end() && best > worst && (it->second == best || it->second == worst))
        e.extremal = true;
    }
  }

  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.estimated_informativeness != b.estimated_informativeness)
      return a.estimated_informativeness > b.estimated_informativeness;
    return a.model < b.model;
  });
  return entries;
}

AdviceReport build_report(const Recommendation& rec,
                          const std::optional<InformativenessReport>& informativeness,
                          const PowerPlan& plan, long dataset_n) {
  if (rec.mode == EvalMode::anchored_leaderboard && rec.anchor_shortlist.empty())
    fail(Errc::invalid_spec, "an anchored leaderboard recommendation needs a shortlist");
  AdviceReport rep;
  rep.recommendation = rec;
  rep.informativeness = informativeness;
  rep.plan = plan;
  rep.dataset_n = dataset_n;
  rep.sufficient = dataset_n >= plan.n_total;
  return rep;
}

namespace {

// The mode rules, restated where readers of the report will see them.
constexpr const char* kModeRules =
    "modes: natural_anchor when a natural baseline exists; quadratic for up to 3 models; "
    "targeted_pairs when no full ranking is needed; anchored_leaderboard otherwise";

}  // namespace

std::string AdviceReport::to_json_text() const {
  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["mode"] = eval_mode_name(recommendation.mode);
  if (!recommendation.anchor_shortlist.empty()) {
    nlohmann::json sl = nlohmann::json::array();
    for (const auto& e : recommendation.anchor_shortlist)
      sl.push_back({{"model", e.model},
                    {"estimated_informativeness", e.estimated_informativeness},
                    {"extremal", e.extremal}});
    j["anchor_shortlist"] = sl;
  }
  if (informativeness) {
    j["informativeness"]["anchor"] = informativeness->anchor;
    j["informativeness"]["rate"] = informativeness->rate;
    j["informativeness"]["granularity"] = granularity_name(informativeness->granularity);
  }
  j["power"]["n_base"] = plan.n_base;
  j["power"]["informativeness"] = plan.informativeness;
  j["power"]["n_total"] = plan.n_total;
  j["dataset_n"] = dataset_n;
  j["verdict"] = sufficient ? "sufficient" : "insufficient";
  if (!recommendation.warnings.empty()) j["warnings"] = recommendation.warnings;
  j["notes"] = kModeRules;
  return j.dump(2) + "\n";
}

std::string AdviceReport::to_text() const {
  std::ostringstream os;
  os << "evaluation mode: " << eval_mode_name(recommendation.mode) << "\n";
  if (!recommendation.anchor_shortlist.empty()) {
    os << "anchor shortlist (by estimated informativeness):\n";
    for (const auto& e : recommendation.anchor_shortlist) {
      os << "  " << e.model << "  I~" << format_double(e.estimated_informativeness);
      if (e.extremal) os << "  [extremal: likely a poor anchor]";
      os << "\n";
    }
  }
  if (informativeness)
    os << "anchor informativeness (" << granularity_name(informativeness->granularity)
       << "): " << format_double(informativeness->rate) << " for " << informativeness->anchor
       << "\n";
  os << "required samples: " << plan.n_base << " informative, " << plan.n_total
     << " total at I=" << format_double(plan.informativeness) << "\n";
  os << "dataset size: " << dataset_n << " -> " << (sufficient ? "sufficient" : "insufficient")
     << "\n";
  for (const auto& w : recommendation.warnings) os << "warning: " << w << "\n";
  os << "(" << kModeRules << ")\n";
  return os.str();
}

}  // namespace anchoreval
