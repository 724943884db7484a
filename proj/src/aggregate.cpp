#include "anchoreval/aggregate.hpp"

#include <algorithm>
#include <cmath>

namespace anchoreval {

const char* aggregation_name(Aggregation a) {
  return a == Aggregation::win_rate ? "win_rate" : "bradley_terry";
}

Aggregation aggregation_from_name(const std::string& name) {
  if (name == "win_rate" || name == "winrate") return Aggregation::win_rate;
  if (name == "bradley_terry" || name == "bt") return Aggregation::bradley_terry;
  fail(Errc::usage, "unknown aggregation method '" + name + "'");
}

double collapse_to_winrate(Verdict v) {
  if (v.value() > 0) return 1.0;
  if (v.value() < 0) return 0.0;
  return 0.5;
}

int collapse_to_sign(Verdict v) { return (v.value() > 0) - (v.value() < 0); }

double ScoreVector::score_of(const std::string& model) const {
  for (const auto& [name, s] : scores)
    if (name == model) return s;
  fail(Errc::unknown_model, model);
}

bool ScoreVector::has_model(const std::string& model) const {
  return std::any_of(scores.begin(), scores.end(),
                     [&](const auto& p) { return p.first == model; });
}

ScoreVector winrate_scores(const JudgmentSet& js, const std::string& anchor) {
  const int a = js.model_index(anchor);
  const int m = js.model_count();
  const long n = js.instruction_count();
  if (!js.is_anchor_complete(a))
    fail(Errc::incomplete_grid, "not every model was judged against " + anchor);

  ScoreVector sv;
  sv.method = Aggregation::win_rate;
  sv.anchor = anchor;
  sv.scores.reserve(static_cast<size_t>(m));
  double opponent_sum = 0.0;
  for (int j = 0; j < m; ++j) {
    if (j == a) {
      sv.scores.emplace_back(js.models()[static_cast<size_t>(j)], 0.0);  // filled below
      continue;
    }
    double acc = 0.0;
    for (long i = 0; i < n; ++i) acc += collapse_to_winrate(*js.verdict(static_cast<int>(i), j, a));
    double s = acc / static_cast<double>(n);
    opponent_sum += s;
    sv.scores.emplace_back(js.models()[static_cast<size_t>(j)], s);
  }
  sv.scores[static_cast<size_t>(a)].second = 1.0 - opponent_sum / static_cast<double>(m - 1);
  return sv;
}

std::vector<std::vector<double>> win_count_matrix(const JudgmentSet& js,
                                                  BTConfig::TiePolicy tie_policy) {
  const int m = js.model_count();
  std::vector<std::vector<double>> w(static_cast<size_t>(m),
                                     std::vector<double>(static_cast<size_t>(m), 0.0));
  js.for_each_cell([&](int, int a, int b, Verdict v) {
    int s = collapse_to_sign(v);
    if (s > 0) {
      w[static_cast<size_t>(a)][static_cast<size_t>(b)] += 1.0;
    } else if (s < 0) {
      w[static_cast<size_t>(b)][static_cast<size_t>(a)] += 1.0;
    } else if (tie_policy == BTConfig::TiePolicy::half_win) {
      w[static_cast<size_t>(a)][static_cast<size_t>(b)] += 0.5;
      w[static_cast<size_t>(b)][static_cast<size_t>(a)] += 0.5;
    }
  });
  return w;
}

namespace {

bool graph_connected(const std::vector<std::vector<double>>& w) {
  const int m = static_cast<int>(w.size());
  if (m == 0) return false;
  std::vector<char> seen(static_cast<size_t>(m), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < m; ++v) {
      if (seen[static_cast<size_t>(v)]) continue;
      if (w[static_cast<size_t>(u)][static_cast<size_t>(v)] +
              w[static_cast<size_t>(v)][static_cast<size_t>(u)] >
          0.0) {
        seen[static_cast<size_t>(v)] = 1;
        stack.push_back(v);
        ++reached;
      }
    }
  }
  return reached == m;
}

}  // namespace

std::vector<double> bradley_terry_fit(const std::vector<std::vector<double>>& win_counts,
                                      const BTConfig& cfg) {
  const int m = static_cast<int>(win_counts.size());
  if (m < 2) fail(Errc::too_few_models, "Bradley-Terry needs at least two models");
  if (cfg.convergence_tol <= 0.0) fail(Errc::invalid_spec, "convergence_tol must be > 0");
  if (cfg.prior_pseudo_count < 0.0) fail(Errc::invalid_spec, "prior_pseudo_count must be >= 0");

  auto w = win_counts;
  if (!graph_connected(w))
    fail(Errc::disconnected_graph,
         "comparison graph is disconnected after tie handling; scores are not identifiable");
  if (cfg.prior_pseudo_count > 0.0)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) w[static_cast<size_t>(i)][static_cast<size_t>(j)] += cfg.prior_pseudo_count;

  // Hunter's minorization-maximization updates on the strength scale.
  std::vector<double> gamma(static_cast<size_t>(m), 1.0);
  std::vector<double> wins(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) wins[static_cast<size_t>(i)] += w[static_cast<size_t>(i)][static_cast<size_t>(j)];

  std::vector<double> log_prev(static_cast<size_t>(m), 0.0);
  bool converged = false;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    std::vector<double> next(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
      double denom = 0.0;
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        double nij = w[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                     w[static_cast<size_t>(j)][static_cast<size_t>(i)];
        if (nij > 0.0)
          denom += nij / (gamma[static_cast<size_t>(i)] + gamma[static_cast<size_t>(j)]);
      }
      next[static_cast<size_t>(i)] =
          denom > 0.0 ? std::max(wins[static_cast<size_t>(i)] / denom, 1e-300) : 1e-300;
    }
    gamma = std::move(next);

    // Normalize on the log scale so the convergence test sees the reported
    // parameterization (mean-zero scores).
    double log_mean = 0.0;
    std::vector<double> logs(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) logs[static_cast<size_t>(i)] = std::log(gamma[static_cast<size_t>(i)]);
    for (double l : logs) log_mean += l;
    log_mean /= static_cast<double>(m);
    double max_delta = 0.0;
    for (int i = 0; i < m; ++i) {
      logs[static_cast<size_t>(i)] -= log_mean;
      max_delta = std::max(max_delta, std::fabs(logs[static_cast<size_t>(i)] - log_prev[static_cast<size_t>(i)]));
      gamma[static_cast<size_t>(i)] = std::exp(logs[static_cast<size_t>(i)]);
    }
    log_prev = std::move(logs);
    if (it > 0 && max_delta < cfg.convergence_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    fail(Errc::non_convergence,
         "Bradley-Terry fit did not converge in " + std::to_string(cfg.max_iterations) +
             " iterations");
  return log_prev;
}

ScoreVector bradley_terry_scores(const JudgmentSet& js, const BTConfig& cfg) {
  std::vector<double> s = bradley_terry_fit(win_count_matrix(js, cfg.tie_policy), cfg);
  ScoreVector sv;
  sv.method = Aggregation::bradley_terry;
  sv.scores.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) sv.scores.emplace_back(js.models()[i], s[i]);
  return sv;
}

std::vector<std::vector<double>> quadratic_winrate_matrix(const JudgmentSet& js) {
  const int m = js.model_count();
  const long n = js.instruction_count();
  if (!js.is_quadratic_complete())
    fail(Errc::incomplete_grid, "all model pairs must be judged on every instruction");
  std::vector<std::vector<double>> mat(static_cast<size_t>(m),
                                       std::vector<double>(static_cast<size_t>(m), 0.5));
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      double acc = 0.0;
      for (long i = 0; i < n; ++i)
        acc += collapse_to_winrate(*js.verdict(static_cast<int>(i), a, b));
      double rate = acc / static_cast<double>(n);
      mat[static_cast<size_t>(a)][static_cast<size_t>(b)] = rate;
      mat[static_cast<size_t>(b)][static_cast<size_t>(a)] = 1.0 - rate;
    }
  return mat;
}

ScoreVector quadratic_winrate_scores(const JudgmentSet& js) {
  auto mat = quadratic_winrate_matrix(js);
  const int m = js.model_count();
  ScoreVector sv;
  sv.method = Aggregation::win_rate;
  for (int a = 0; a < m; ++a) {
    double acc = 0.0;
    for (int b = 0; b < m; ++b)
      if (b != a) acc += mat[static_cast<size_t>(a)][static_cast<size_t>(b)];
    sv.scores.emplace_back(js.models()[static_cast<size_t>(a)], acc / static_cast<double>(m - 1));
  }
  return sv;
}

}  // namespace anchoreval
