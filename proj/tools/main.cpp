// Command-line surface over the library: rank, informativeness, power,
// simulate, study, advise, validate. Exit codes: 0 success, 2 usage,
// 3 data error, 4 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anchoreval/advise.hpp"
#include "anchoreval/aggregate.hpp"
#include "anchoreval/informativeness.hpp"
#include "anchoreval/power.hpp"
#include "anchoreval/ranking.hpp"
#include "anchoreval/rng.hpp"
#include "anchoreval/simulate.hpp"
#include "anchoreval/studies.hpp"
#include "anchoreval/table.hpp"
#include "anchoreval/verdicts.hpp"

using namespace anchoreval;
using nlohmann::json;

namespace {

struct CommonOpts {
  uint64_t seed = 0;
  bool seed_given = false;
  std::string format = "csv";
  int jobs = 1;
  std::string out;  // empty or "-" -> stdout
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_format = true) {
  cmd->add_option("--seed", opts.seed, "Master seed; all randomness derives from it")
      ->envname("ANCHOREVAL_SEED");
  if (with_format)
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  cmd->add_option("--jobs", opts.jobs, "Worker threads (results are independent of this)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("-o,--out", opts.out, "Output path ('-' or empty = stdout)");
}

void emit(const CommonOpts& opts, const std::string& content) {
  if (opts.out.empty() || opts.out == "-")
    std::cout << content;
  else
    write_file_atomically(opts.out, content);
}

std::string render(const Table& table, const OutputMeta& meta, const std::string& format) {
  std::ostringstream os;
  table.write(os, meta, format);
  return os.str();
}

std::string file_digest_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  const std::string bytes = os.str();
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Table score_table(const ScoreVector& sv) {
  auto sorted = sv.scores;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Table t({"model", "score"});
  for (const auto& [name, score] : sorted) t.add_row({name, format_double(score)});
  return t;
}

// ---- rank ----------------------------------------------------------------

struct RankArgs {
  CommonOpts common;
  std::string judgments, roster, mode = "anchor", anchor, method = "winrate", gold;
};

int run_rank(const RankArgs& a) {
  std::optional<std::vector<std::string>> roster;
  if (!a.roster.empty()) roster = read_roster_file(a.roster);
  JudgmentSet js = JudgmentSet::ingest_file(a.judgments, roster ? &*roster : nullptr);
  Aggregation method = aggregation_from_name(a.method);

  ScoreVector sv;
  if (a.mode == "anchor") {
    if (a.anchor.empty()) fail(Errc::usage, "anchor mode needs --anchor");
    if (!js.is_anchor_complete(a.anchor))
      fail(Errc::incomplete_grid, "not every model was judged against " + a.anchor);
    JudgmentSet slice = js.anchor_slice(a.anchor);
    sv = method == Aggregation::win_rate ? winrate_scores(slice, a.anchor)
                                         : bradley_terry_scores(slice);
    if (method == Aggregation::bradley_terry) sv.anchor = a.anchor;
  } else {
    sv = method == Aggregation::win_rate ? quadratic_winrate_scores(js)
                                         : bradley_terry_scores(js);
  }

  json cfg{{"command", "rank"},
           {"mode", a.mode},
           {"method", aggregation_name(method)},
           {"judge", js.judge_id()}};
  if (!a.anchor.empty()) cfg["anchor"] = a.anchor;
  OutputMeta meta;
  meta.input_digest = js.content_digest_hex();
  meta.config_echo = cfg.dump();
  emit(a.common, render(score_table(sv), meta, a.common.format));

  if (!a.gold.empty()) {
    Ranking gold = ranking_from_score_file(a.gold);
    TauResult tau = kendall_tau(induce_ranking(sv), gold);
    std::cerr << "tau=" << format_double(tau.tau) << " p_value=" << format_double(tau.p_value)
              << " concordant=" << tau.n_concordant << " discordant=" << tau.n_discordant
              << " tied=" << tau.n_tied << " p_method=" << tau.p_method << "\n";
  }
  return 0;
}

// ---- informativeness -------------------------------------------------------

struct InfArgs {
  CommonOpts common;
  std::string judgments, anchor, granularity = "five_level";
  std::string normalizer = "opponent_pairs";
  bool all = false;
  std::vector<int> estimate;  // n_instructions n_models
};

int run_informativeness(const InfArgs& a) {
  JudgmentSet js = JudgmentSet::ingest_file(a.judgments);
  Granularity g = granularity_from_name(a.granularity);
  Normalizer norm = normalizer_from_name(a.normalizer);
  if (a.anchor.empty() && !a.all) fail(Errc::usage, "need --anchor NAME or --all");
  if (!a.estimate.empty() && a.estimate.size() != 2)
    fail(Errc::usage, "--estimate takes N_INSTRUCTIONS N_MODELS");

  std::vector<std::string> anchors =
      a.all ? js.models() : std::vector<std::string>{a.anchor};
  Table t({"anchor", "rate", "granularity", "n_instructions", "M"});
  for (size_t k = 0; k < anchors.size(); ++k) {
    InformativenessReport rep =
        a.estimate.empty()
            ? informativeness(js, anchors[k], g, norm)
            : estimate_informativeness(js, anchors[k], a.estimate[0], a.estimate[1],
                                       derive_seed(a.common.seed, {0x1a, k}), g);
    t.add_row({rep.anchor, format_double(rep.rate), granularity_name(rep.granularity),
               std::to_string(rep.n_instructions_used), std::to_string(rep.n_models_used)});
  }

  json cfg{{"command", "informativeness"},
           {"granularity", granularity_name(g)},
           {"normalizer", normalizer_name(norm)},
           {"judge", js.judge_id()}};
  if (!a.estimate.empty())
    cfg["estimate"] = {{"n_instructions", a.estimate[0]}, {"n_models", a.estimate[1]}};
  OutputMeta meta;
  meta.input_digest = js.content_digest_hex();
  if (!a.estimate.empty()) meta.seed = a.common.seed;
  meta.config_echo = cfg.dump();
  emit(a.common, render(t, meta, a.common.format));
  return 0;
}

// ---- power -----------------------------------------------------------------

struct PowerArgs {
  CommonOpts common;
  bool table = false;
  bool wilcoxon = false;
  double win_rate = 0.0;
  std::vector<double> informativeness_rates;
  double alpha = 0.05;
  double power = 0.80;
  bool two_sided = false;
  std::string judgments;
  std::string edge = "0.05:0.06";
  int trials = 200;
  int grid_step = 50;
  int grid_max = 2000;
};

EffectInterval parse_interval(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) fail(Errc::usage, "interval must look like LO:HI");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::logic_error&) {
    fail(Errc::usage, "bad interval '" + text + "'");
  }
}

int run_power(const PowerArgs& a) {
  PowerSpec spec;
  spec.alpha = a.alpha;
  spec.power = a.power;
  spec.sided = a.two_sided ? PowerSpec::Sided::two : PowerSpec::Sided::one;

  json cfg{{"command", "power"},
           {"alpha", a.alpha},
           {"power", a.power},
           {"sided", a.two_sided ? "two" : "one"}};
  OutputMeta meta;

  if (a.wilcoxon) {
    if (a.judgments.empty()) fail(Errc::usage, "--wilcoxon needs --judgments");
    JudgmentSet js = JudgmentSet::ingest_file(a.judgments);
    EffectInterval interval = parse_interval(a.edge);
    auto dists = empirical_difference_distributions(js);
    std::vector<const DifferenceDistribution*> qualifying;
    double nonzero_acc = 0.0;
    for (const auto& d : dists)
      if (d.effect_size >= interval.first && d.effect_size < interval.second) {
        qualifying.push_back(&d);
        nonzero_acc += d.nonzero_fraction;
      }
    WilcoxonPowerConfig wcfg;
    wcfg.alpha = a.alpha;
    wcfg.power = a.power;
    wcfg.trials = a.trials;
    wcfg.jobs = a.common.jobs;
    for (int n = a.grid_step; n <= a.grid_max; n += a.grid_step) wcfg.n_grid.push_back(n);
    auto n = wilcoxon_power_n(dists, interval, wcfg, a.common.seed);

    double mean_nonzero = qualifying.empty()
                              ? 0.0
                              : nonzero_acc / static_cast<double>(qualifying.size());
    spec.win_rate_among_discordant = 0.5 + 0.5 * (interval.first + interval.second);
    long n_base = sign_test_n(spec);
    long n_sign_total =
        mean_nonzero > 0.0 ? adjust_for_informativeness(n_base, mean_nonzero).n_total : -1;

    Table t({"reached", "wilcoxon_n", "n_distributions", "n_qualifying", "mean_nonzero_fraction",
             "sign_n_base", "sign_n_total"});
    t.add_row({n ? "true" : "false", n ? std::to_string(*n) : "",
               std::to_string(dists.size()), std::to_string(qualifying.size()),
               format_double(mean_nonzero), std::to_string(n_base),
               n_sign_total >= 0 ? std::to_string(n_sign_total) : ""});
    cfg["mode"] = "wilcoxon";
    cfg["edge"] = a.edge;
    cfg["trials"] = a.trials;
    cfg["grid_step"] = a.grid_step;
    cfg["grid_max"] = a.grid_max;
    meta.input_digest = js.content_digest_hex();
    meta.seed = a.common.seed;
    meta.config_echo = cfg.dump();
    emit(a.common, render(t, meta, a.common.format));
    return 0;
  }

  std::vector<double> rates = a.informativeness_rates;
  if (rates.empty()) rates = {0.61, 0.45};
  std::vector<std::string> cols{"win_rate", "edge", "n_base"};
  for (double r : rates) cols.push_back("n_total[I=" + format_double(r) + "]");
  Table t(cols);
  std::vector<double> win_rates;
  if (a.table)
    win_rates = {0.55, 0.60, 0.65, 0.70, 0.75};
  else if (a.win_rate > 0.0)
    win_rates = {a.win_rate};
  else
    fail(Errc::usage, "need one of --table, --win-rate, --wilcoxon");

  for (double p : win_rates) {
    spec.win_rate_among_discordant = p;
    long n_base = sign_test_n(spec);
    std::vector<std::string> row{format_double(p), format_double(p - 0.5),
                                 std::to_string(n_base)};
    for (double r : rates)
      row.push_back(std::to_string(adjust_for_informativeness(n_base, r).n_total));
    t.add_row(row);
  }
  cfg["mode"] = a.table ? "table" : "win_rate";
  cfg["informativeness"] = rates;
  meta.config_echo = cfg.dump();
  emit(a.common, render(t, meta, a.common.format));
  return 0;
}

// ---- simulate ----------------------------------------------------------------

struct SimArgs {
  CommonOpts common;
  std::string world;
  std::string anchor;
  bool quadratic = false;
  bool transitive = false;
  double flip_rate = 0.0;
};

int run_simulate(const SimArgs& a) {
  SyntheticWorld world = SyntheticWorld::from_file(a.world);
  if (a.common.seed_given) world.seed = a.common.seed;
  int modes = (a.quadratic ? 1 : 0) + (!a.anchor.empty() ? 1 : 0) + (a.transitive ? 1 : 0);
  if (modes != 1) fail(Errc::usage, "pick exactly one of --quadratic, --anchor NAME, --transitive");

  JudgeProfile judge;
  judge.extra_flip_rate = a.flip_rate;
  JudgmentSet js = a.transitive ? noiseless_transitive_judgments(world)
                   : a.quadratic ? sample_quadratic_judgments(world, judge)
                                 : sample_anchor_judgments(world, a.anchor, judge);

  json cfg{{"command", "simulate"},
           {"mode", a.transitive ? "transitive" : (a.quadratic ? "quadratic" : "anchor")},
           {"flip_rate", a.flip_rate},
           {"world_seed", world.seed}};
  if (!a.anchor.empty()) cfg["anchor"] = a.anchor;

  std::ostringstream os;
  os << "# tool: " << kToolVersion << '\n';
  os << "# input_digest: " << file_digest_hex(a.world) << '\n';
  os << "# seed: " << world.seed << '\n';
  os << "# config: " << cfg.dump() << '\n';
  js.serialize(os);
  emit(a.common, os.str());
  return 0;
}

// ---- study -------------------------------------------------------------------

struct StudyArgs {
  CommonOpts common;
  std::string kind, judgments, gold, anchor, method = "winrate";
  std::string out_prefix;
  std::vector<int> sizes;
  int repeats = 10;
  int permutations = 20;
  std::string granularity = "five_level";
};

Ranking study_gold(const StudyArgs& a, const JudgmentSet& js) {
  if (!a.gold.empty()) return ranking_from_score_file(a.gold);
  // The full-grid Bradley-Terry ranking is the reference when none is given.
  return induce_ranking(bradley_terry_scores(js));
}

int run_study(const StudyArgs& a) {
  JudgmentSet js = JudgmentSet::ingest_file(a.judgments);
  Aggregation method = aggregation_from_name(a.method);

  json cfg{{"command", "study"}, {"kind", a.kind}, {"judge", js.judge_id()}};
  OutputMeta meta;
  meta.input_digest = js.content_digest_hex();
  meta.seed = a.common.seed;

  Table t({"key"});
  std::vector<SvgSeries> series;
  std::string x_label = "x", y_label = "y";

  if (a.kind == "anchor-sweep") {
    cfg["method"] = aggregation_name(method);
    auto points = anchor_quality_sweep(js, study_gold(a, js), method);
    t = Table({"anchor", "rank_in_gold", "tau"});
    SvgSeries s{"tau", {}, false};
    for (const auto& p : points) {
      t.add_row({p.anchor, std::to_string(p.rank_in_gold), format_double(p.tau)});
      s.points.emplace_back(static_cast<double>(p.rank_in_gold), p.tau);
    }
    series.push_back(std::move(s));
    x_label = "anchor rank in gold";
    y_label = "kendall tau";
  } else if (a.kind == "histogram") {
    if (a.anchor.empty()) fail(Errc::usage, "histogram needs --anchor");
    cfg["anchor"] = a.anchor;
    auto bins = win_count_histogram(js, a.anchor);
    t = Table({"models_beating_anchor", "instructions"});
    SvgSeries s{"count", {}, true};
    for (size_t k = 0; k < bins.size(); ++k) {
      t.add_row({std::to_string(k), std::to_string(bins[k])});
      s.points.emplace_back(static_cast<double>(k), static_cast<double>(bins[k]));
    }
    series.push_back(std::move(s));
    x_label = "models beating the anchor";
    y_label = "instructions";
  } else if (a.kind == "sample-size") {
    if (a.sizes.empty()) fail(Errc::usage, "sample-size needs --sizes");
    cfg["sizes"] = a.sizes;
    cfg["repeats"] = a.repeats;
    cfg["method"] = aggregation_name(method);
    Ranking gold = study_gold(a, js);
    auto sweep = sample_size_sweep(js, gold, a.sizes, a.repeats, a.common.seed, method, {},
                                   a.common.jobs);
    t = Table({"size", "statistic", "mean", "std_dev", "n_repeats"});
    SvgSeries quad{"quadratic", {}, true}, anchors{"anchor mean", {}, true};
    for (const auto& row : sweep.rows) {
      t.add_row({row.key, row.statistic, format_double(row.mean),
                 row.n_repeats > 1 ? format_double(row.std_dev) : "",
                 std::to_string(row.n_repeats)});
      double x = std::stod(row.key);
      if (row.statistic == "tau_quadratic") quad.points.emplace_back(x, row.mean);
      if (row.statistic == "tau_anchor_mean") anchors.points.emplace_back(x, row.mean);
    }
    series.push_back(std::move(quad));
    series.push_back(std::move(anchors));
    x_label = "instructions sampled";
    y_label = "mean kendall tau";
  } else if (a.kind == "multi-anchor") {
    cfg["permutations"] = a.permutations;
    auto sweep = multi_anchor_sweep(js, a.permutations, a.common.seed, {}, a.common.jobs);
    t = Table({"anchors", "statistic", "mean", "std_dev", "n_repeats"});
    SvgSeries s{"tau", {}, true};
    for (const auto& row : sweep.rows) {
      t.add_row({row.key, row.statistic, format_double(row.mean),
                 row.n_repeats > 1 && row.statistic == "tau" ? format_double(row.std_dev) : "",
                 std::to_string(row.n_repeats)});
      if (row.statistic == "tau") s.points.emplace_back(std::stod(row.key), row.mean);
    }
    series.push_back(std::move(s));
    x_label = "anchor set size";
    y_label = "mean kendall tau";
  } else if (a.kind == "informativeness-quality") {
    cfg["method"] = aggregation_name(method);
    cfg["granularity"] = a.granularity;
    auto res = informativeness_vs_quality(js, study_gold(a, js), method,
                                          granularity_from_name(a.granularity));
    t = Table({"anchor", "informativeness", "tau", "fit_slope", "fit_intercept",
               "fit_r_squared"});
    SvgSeries s{"anchors", {}, false};
    for (const auto& p : res.points) {
      t.add_row({p.anchor, format_double(p.informativeness), format_double(p.tau),
                 format_double(res.slope), format_double(res.intercept),
                 format_double(res.r_squared)});
      s.points.emplace_back(p.informativeness, p.tau);
    }
    series.push_back(std::move(s));
    x_label = "informativeness";
    y_label = "kendall tau";
  } else {
    fail(Errc::usage, "unknown study kind '" + a.kind + "'");
  }

  meta.config_echo = cfg.dump();
  if (!a.out_prefix.empty()) {
    std::ostringstream csv;
    t.write(csv, meta, a.common.format);
    write_file_atomically(a.out_prefix + (a.common.format == "json" ? ".json" : ".csv"),
                          csv.str());
    std::ostringstream svg;
    write_svg_plot(svg, x_label, y_label, series, meta);
    write_file_atomically(a.out_prefix + ".svg", svg.str());
  } else {
    emit(a.common, render(t, meta, a.common.format));
  }
  return 0;
}

// ---- advise -------------------------------------------------------------------

struct AdviseArgs {
  CommonOpts common;
  std::string context, pilot;
  std::vector<std::string> candidates;
  int pilot_instructions = 0;  // 0 = all pilot instructions
  long dataset_n = -1;
  bool text = false;
};

int run_advise(const AdviseArgs& a) {
  std::ifstream in(a.context);
  if (!in) fail(Errc::io_error, "cannot open " + a.context);
  std::ostringstream ctx_text;
  ctx_text << in.rdbuf();
  EvaluationContext ctx = EvaluationContext::from_json_text(ctx_text.str());

  Recommendation rec;
  rec.mode = recommend_mode(ctx);

  std::optional<InformativenessReport> inf;
  double plan_rate = 1.0;
  std::optional<JudgmentSet> pilot;
  if (!a.pilot.empty()) {
    pilot = JudgmentSet::ingest_file(a.pilot);
    std::vector<std::string> candidates = a.candidates.empty() ? pilot->models() : a.candidates;
    int n_instr = a.pilot_instructions > 0 ? a.pilot_instructions
                                           : static_cast<int>(pilot->instruction_count());
    rec.anchor_shortlist = shortlist_anchors(
        *pilot, candidates, n_instr, a.common.seed,
        ctx.candidate_prior_ranks.empty() ? nullptr : &ctx.candidate_prior_ranks);
    for (const auto& e : rec.anchor_shortlist)
      if (e.extremal)
        rec.warnings.push_back("candidate " + e.model +
                               " sits at an extreme of the field; expect wasted comparisons");
    if (rec.mode == EvalMode::anchored_leaderboard && !rec.anchor_shortlist.empty()) {
      const auto& top = rec.anchor_shortlist.front();
      plan_rate = top.estimated_informativeness;
      InformativenessReport r;
      r.anchor = top.model;
      r.rate = top.estimated_informativeness;
      r.granularity = Granularity::five_level;
      r.n_instructions_used = n_instr;
      r.n_models_used = pilot->model_count();
      inf = r;
    }
  }
  if (rec.mode == EvalMode::anchored_leaderboard && rec.anchor_shortlist.empty())
    fail(Errc::insufficient_pilot_data,
         "an anchored leaderboard needs pilot judgments to shortlist anchors (--pilot)");

  PowerSpec spec;
  spec.win_rate_among_discordant = 0.5 + ctx.expected_effect_size;
  PowerPlan plan = adjust_for_informativeness(sign_test_n(spec),
                                              plan_rate > 0.0 ? plan_rate : 1.0);
  rec.required_n = plan;

  long dataset_n = a.dataset_n;
  if (dataset_n < 0) {
    if (!pilot) fail(Errc::usage, "need --dataset-n (or a --pilot to take it from)");
    dataset_n = pilot->instruction_count();
  }
  AdviceReport report = build_report(rec, inf, plan, dataset_n);
  emit(a.common, a.text ? report.to_text() : report.to_json_text());
  return 0;
}

// ---- validate -------------------------------------------------------------------

struct ValidateArgs {
  CommonOpts common;
  std::string judgments, gold, m_range = "3:8";
  int instructions = 10;
  int repeats = 30;
};

int run_validate(const ValidateArgs& a) {
  JudgmentSet js = JudgmentSet::ingest_file(a.judgments);
  auto colon = a.m_range.find(':');
  if (colon == std::string::npos) fail(Errc::usage, "--m-range must look like LO:HI");
  int lo = 0, hi = 0;
  try {
    lo = std::stoi(a.m_range.substr(0, colon));
    hi = std::stoi(a.m_range.substr(colon + 1));
  } catch (const std::logic_error&) {
    fail(Errc::usage, "bad --m-range '" + a.m_range + "'");
  }
  std::optional<Ranking> gold;
  if (!a.gold.empty()) gold = ranking_from_score_file(a.gold);

  auto rows = validate_estimator(js, lo, hi, a.instructions, a.repeats, a.common.seed,
                                 gold ? &*gold : nullptr);
  Table t({"n_models", "mean_pearson_r", "median_pearson_r", "std_pearson_r",
           "extremal_bottom3_rate", "repeats"});
  for (const auto& r : rows)
    t.add_row({std::to_string(r.pool_size), format_double(r.mean_pearson_r),
               format_double(r.median_pearson_r), format_double(r.std_pearson_r),
               r.extremal_bottom3_rate >= 0.0 ? format_double(r.extremal_bottom3_rate) : "",
               std::to_string(r.repeats)});

  json cfg{{"command", "validate"},
           {"m_range", a.m_range},
           {"instructions", a.instructions},
           {"repeats", a.repeats}};
  OutputMeta meta;
  meta.input_digest = js.content_digest_hex();
  meta.seed = a.common.seed;
  meta.config_echo = cfg.dump();
  emit(a.common, render(t, meta, a.common.format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchor-based pairwise evaluation toolkit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  RankArgs rank_args;
  auto* rank = app.add_subcommand("rank", "Aggregate judgments into model scores");
  rank->add_option("--judgments", rank_args.judgments, "Line-delimited judgment file")
      ->required();
  rank->add_option("--roster", rank_args.roster, "Optional sidecar roster file");
  rank->add_option("--mode", rank_args.mode, "anchor or quadratic")
      ->check(CLI::IsMember({"anchor", "quadratic"}))
      ->capture_default_str();
  rank->add_option("--anchor", rank_args.anchor, "Anchor model (anchor mode)");
  rank->add_option("--method", rank_args.method, "winrate or bt")->capture_default_str();
  rank->add_option("--gold", rank_args.gold, "Score CSV to correlate against");
  add_common(rank, rank_args.common);

  InfArgs inf_args;
  auto* inf = app.add_subcommand("informativeness", "Anchor informativeness rates");
  inf->add_option("--judgments", inf_args.judgments)->required();
  inf->add_option("--anchor", inf_args.anchor, "Single anchor");
  inf->add_flag("--all", inf_args.all, "Every model as anchor");
  inf->add_option("--granularity", inf_args.granularity, "five_level or three_level")
      ->capture_default_str();
  inf->add_option("--normalizer", inf_args.normalizer,
                  "opponent_pairs (C(M-1,2)) or all_pairs (C(M,2))")
      ->capture_default_str();
  inf->add_option("--estimate", inf_args.estimate,
                  "Subsampled estimate: N_INSTRUCTIONS N_MODELS")
      ->expected(2);
  add_common(inf, inf_args.common);

  PowerArgs power_args;
  auto* power = app.add_subcommand("power", "Sample-size planning");
  power->add_flag("--table", power_args.table, "Emit the five-row reference table");
  power->add_option("--win-rate", power_args.win_rate, "Single win rate among discordant");
  power->add_flag("--wilcoxon", power_args.wilcoxon, "Monte-Carlo Wilcoxon sizing");
  power->add_option("--informativeness", power_args.informativeness_rates,
                    "Tie-adjustment rates (repeatable)");
  power->add_option("--alpha", power_args.alpha)->capture_default_str();
  power->add_option("--power", power_args.power)->capture_default_str();
  power->add_flag("--two-sided", power_args.two_sided);
  power->add_option("--judgments", power_args.judgments, "Judgments for --wilcoxon");
  power->add_option("--edge", power_args.edge, "Effect interval LO:HI for --wilcoxon")
      ->capture_default_str();
  power->add_option("--trials", power_args.trials)->capture_default_str();
  power->add_option("--grid-step", power_args.grid_step)->capture_default_str();
  power->add_option("--grid-max", power_args.grid_max)->capture_default_str();
  add_common(power, power_args.common);

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Sample synthetic judgments from a world config");
  sim->add_option("--world", sim_args.world, "World config JSON")->required();
  sim->add_flag("--quadratic", sim_args.quadratic, "All pairs");
  sim->add_option("--anchor", sim_args.anchor, "Star around this anchor");
  sim->add_flag("--transitive", sim_args.transitive, "Noiseless transitive order");
  sim->add_option("--flip-rate", sim_args.flip_rate, "Judge corruption probability")
      ->capture_default_str();
  add_common(sim, sim_args.common, false);
  sim->get_option("--seed")->description("Overrides the world config seed");

  StudyArgs study_args;
  auto* study = app.add_subcommand("study", "Experiment sweeps over a judgment set");
  study->add_option("--kind", study_args.kind,
                    "anchor-sweep | histogram | sample-size | multi-anchor | "
                    "informativeness-quality")
      ->required();
  study->add_option("--judgments", study_args.judgments)->required();
  study->add_option("--gold", study_args.gold, "Score CSV; default: full-grid BT ranking");
  study->add_option("--anchor", study_args.anchor, "Anchor for histogram");
  study->add_option("--method", study_args.method, "winrate or bt")->capture_default_str();
  study->add_option("--sizes", study_args.sizes, "Sample sizes for sample-size")->delimiter(',');
  study->add_option("--repeats", study_args.repeats)->capture_default_str();
  study->add_option("--permutations", study_args.permutations)->capture_default_str();
  study->add_option("--granularity", study_args.granularity)->capture_default_str();
  study->add_option("--out-prefix", study_args.out_prefix,
                    "Write PREFIX.csv/.json and PREFIX.svg instead of stdout");
  add_common(study, study_args.common);

  AdviseArgs advise_args;
  auto* advise = app.add_subcommand("advise", "Recommend an evaluation mode and anchors");
  advise->add_option("--context", advise_args.context, "Evaluation context JSON")->required();
  advise->add_option("--pilot", advise_args.pilot, "Pilot judgment file");
  advise->add_option("--candidates", advise_args.candidates, "Candidate anchors")
      ->delimiter(',');
  advise->add_option("--pilot-instructions", advise_args.pilot_instructions,
                     "Pilot instructions to use (default: all)");
  advise->add_option("--dataset-n", advise_args.dataset_n,
                     "Planned benchmark size for the sufficiency verdict");
  advise->add_flag("--text", advise_args.text, "Human-readable rendering");
  add_common(advise, advise_args.common, false);

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Subsampled-informativeness estimator check");
  validate->add_option("--judgments", validate_args.judgments)->required();
  validate->add_option("--gold", validate_args.gold, "Score CSV for extremal-anchor tracking");
  validate->add_option("--m-range", validate_args.m_range, "Pool sizes LO:HI")
      ->capture_default_str();
  validate->add_option("--instructions", validate_args.instructions)->capture_default_str();
  validate->add_option("--repeats", validate_args.repeats)->capture_default_str();
  add_common(validate, validate_args.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForVersion") return app.exit(e);
    std::cerr << e.what() << "\n";
    return 2;
  }

  rank_args.common.seed_given = !rank->get_option("--seed")->empty();
  sim_args.common.seed_given = !sim->get_option("--seed")->empty();

  try {
    if (*rank) return run_rank(rank_args);
    if (*inf) return run_informativeness(inf_args);
    if (*power) return run_power(power_args);
    if (*sim) return run_simulate(sim_args);
    if (*study) return run_study(study_args);
    if (*advise) return run_advise(advise_args);
    if (*validate) return run_validate(validate_args);
  } catch (const ToolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
