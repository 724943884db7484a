#include "anchoreval/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "anchoreval/stats.hpp"

namespace anchoreval {

int Ranking::rank_of(const std::string& model) const {
  int rank = 1;
  for (const auto& group : tie_groups) {
    for (const auto& name : group)
      if (name == model) return rank;
    rank += static_cast<int>(group.size());
  }
  fail(Errc::unknown_model, model);
}

bool Ranking::has_model(const std::string& model) const {
  return std::any_of(order.begin(), order.end(),
                     [&](const std::string& n) { return n == model; });
}

std::vector<std::string> Ranking::sorted_roster() const {
  std::vector<std::string> r = order;
  std::sort(r.begin(), r.end());
  return r;
}

Ranking induce_ranking(const ScoreVector& scores) {
  std::vector<std::pair<std::string, double>> items = scores.scores;
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Ranking r;
  r.source_scores = scores;
  size_t i = 0;
  while (i < items.size()) {
    size_t j = i;
    while (j + 1 < items.size() && items[j + 1].second == items[i].second) ++j;
    std::vector<std::string> group;
    for (size_t k = i; k <= j; ++k) {
      group.push_back(items[k].first);
      r.order.push_back(items[k].first);
    }
    r.tie_groups.push_back(std::move(group));
    i = j + 1;
  }
  return r;
}

namespace {

// Number of permutations of n elements with exactly k inversions, as doubles
// (exact for n <= 10 since 10! < 2^53).
std::vector<double> inversion_counts(int n) {
  std::vector<double> f{1.0};
  for (int i = 2; i <= n; ++i) {
    int max_inv = i * (i - 1) / 2;
    std::vector<double> g(static_cast<size_t>(max_inv) + 1, 0.0);
    double window = 0.0;
    for (int k = 0; k <= max_inv; ++k) {
      window += k < static_cast<int>(f.size()) ? f[static_cast<size_t>(k)] : 0.0;
      if (k - i >= 0 && k - i < static_cast<int>(f.size())) window -= f[static_cast<size_t>(k - i)];
      g[static_cast<size_t>(k)] = window;
    }
    f = std::move(g);
  }
  return f;
}

double exact_two_sided_p(int n, long discordant) {
  std::vector<double> f = inversion_counts(n);
  long n0 = static_cast<long>(n) * (n - 1) / 2;
  long dmin = std::min(discordant, n0 - discordant);
  double total = 0.0;
  for (double c : f) total += c;
  double tail = 0.0;
  for (long k = 0; k <= dmin; ++k) tail += f[static_cast<size_t>(k)];
  double p = 2.0 * tail / total;
  if (2 * dmin == n0) p -= f[static_cast<size_t>(dmin)] / total;  // middle counted twice
  return std::min(p, 1.0);
}

std::vector<int> group_ranks(const Ranking& r, const std::vector<std::string>& roster) {
  std::map<std::string, int> grp;
  for (size_t g = 0; g < r.tie_groups.size(); ++g)
    for (const auto& name : r.tie_groups[g]) grp[name] = static_cast<int>(g);
  std::vector<int> out;
  out.reserve(roster.size());
  for (const auto& name : roster) {
    auto it = grp.find(name);
    if (it == grp.end()) fail(Errc::roster_mismatch, "rankings cover different models: " + name);
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

TauResult kendall_tau(const Ranking& a, const Ranking& b) {
  std::vector<std::string> roster = a.sorted_roster();
  if (roster != b.sorted_roster())
    fail(Errc::roster_mismatch, "rankings cover different model sets");
  const int n = static_cast<int>(roster.size());
  std::vector<int> ra = group_ranks(a, roster), rb = group_ranks(b, roster);

  long concordant = 0, discordant = 0, tie_a = 0, tie_b = 0, tie_both = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int da = ra[static_cast<size_t>(i)] - ra[static_cast<size_t>(j)];
      int db = rb[static_cast<size_t>(i)] - rb[static_cast<size_t>(j)];
      if (da == 0 && db == 0)
        ++tie_both;
      else if (da == 0)
        ++tie_a;
      else if (db == 0)
        ++tie_b;
      else if ((da > 0) == (db > 0))
        ++concordant;
      else
        ++discordant;
    }

  TauResult res;
  res.n_concordant = concordant;
  res.n_discordant = discordant;
  res.n_tied = tie_a + tie_b + tie_both;
  const long n0 = static_cast<long>(n) * (n - 1) / 2;
  const long n1 = tie_a + tie_both;  // pairs tied in a
  const long n2 = tie_b + tie_both;  // pairs tied in b
  double denom = n1 == n2 ? static_cast<double>(n0 - n1)
                          : std::sqrt(static_cast<double>(n0 - n1)) *
                                std::sqrt(static_cast<double>(n0 - n2));
  res.tau = denom > 0.0 ? static_cast<double>(concordant - discordant) / denom : 0.0;

  const bool any_ties = (n1 + n2) > 0;
  if (!any_ties && n <= 10 && n >= 2) {
    res.p_method = "exact";
    res.p_value = exact_two_sided_p(n, discordant);
    return res;
  }
  // Normal approximation on S = C - D with tie adjustment.
  double tt1 = 0.0, tt2 = 0.0, tt3 = 0.0, uu1 = 0.0, uu2 = 0.0, uu3 = 0.0;
  auto tally = [](const std::vector<std::vector<std::string>>& groups, double& s1, double& s2,
                  double& s3) {
    for (const auto& g : groups) {
      double t = static_cast<double>(g.size());
      s1 += t * (t - 1.0) * (2.0 * t + 5.0);
      s2 += t * (t - 1.0);
      s3 += t * (t - 1.0) * (t - 2.0);
    }
  };
  tally(a.tie_groups, tt1, tt2, tt3);
  tally(b.tie_groups, uu1, uu2, uu3);
  double nn = static_cast<double>(n);
  double v0 = nn * (nn - 1.0) * (2.0 * nn + 5.0);
  double var = (v0 - tt1 - uu1) / 18.0;
  if (n > 2) {
    var += tt2 * uu2 / (2.0 * nn * (nn - 1.0));
    var += tt3 * uu3 / (9.0 * nn * (nn - 1.0) * (nn - 2.0));
  }
  if (var <= 0.0) {
    res.p_value = 1.0;
    return res;
  }
  double z = static_cast<double>(concordant - discordant) / std::sqrt(var);
  res.p_value = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
  return res;
}

TauResult anchor_quality(const JudgmentSet& js, const std::string& anchor, const Ranking& gold,
                         Aggregation method, const BTConfig& bt_cfg) {
  if (!js.is_anchor_complete(anchor))
    fail(Errc::incomplete_grid, "not every model was judged against " + anchor);
  JudgmentSet slice = js.anchor_slice(anchor);
  ScoreVector scores = method == Aggregation::win_rate ? winrate_scores(slice, anchor)
                                                       : bradley_terry_scores(slice, bt_cfg);
  return kendall_tau(induce_ranking(scores), gold);
}

Ranking ranking_from_score_csv(std::istream& in) {
  ScoreVector sv;
  sv.method = Aggregation::win_rate;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos)
      fail(Errc::malformed_record, "score file line " + std::to_string(line_no));
    std::string name = line.substr(0, comma);
    std::string value = line.substr(comma + 1);
    if (name == "model" && value == "score") continue;  // header
    try {
      size_t used = 0;
      double s = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      if (sv.has_model(name))
        fail(Errc::duplicate_key, "score file repeats model " + name);
      sv.scores.emplace_back(name, s);
    } catch (const std::logic_error&) {
      fail(Errc::malformed_record,
           "score file line " + std::to_string(line_no) + ": bad score '" + value + "'");
    }
  }
  if (sv.scores.empty()) fail(Errc::malformed_record, "empty score file");
  return induce_ranking(sv);
}

Ranking ranking_from_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  return ranking_from_score_csv(in);
}

}  // namespace anchoreval
