#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "anchoreval/ranking.hpp"
#include "oracles.hpp"

using namespace anchoreval;
using oracle::Rec;

namespace {

ScoreVector scores_of(std::vector<std::pair<std::string, double>> s) {
  ScoreVector sv;
  sv.method = Aggregation::win_rate;
  sv.scores = std::move(s);
  return sv;
}

Ranking ranking_of(std::vector<std::pair<std::string, double>> s) {
  return induce_ranking(scores_of(std::move(s)));
}

}  // namespace

TEST_CASE("ranking induction orders by score") {
  auto r = ranking_of({{"A", 2.0}, {"B", 1.0}, {"C", 0.0}});
  CHECK(r.order == std::vector<std::string>{"A", "B", "C"});
  CHECK(r.tie_groups.size() == 3);
  CHECK(r.rank_of("A") == 1);
  CHECK(r.rank_of("C") == 3);
}

TEST_CASE("equal scores form one tie group") {
  auto r = ranking_of({{"B", 1.0}, {"A", 1.0}});
  CHECK(r.tie_groups.size() == 1);
  CHECK(r.tie_groups[0] == std::vector<std::string>{"A", "B"});
  CHECK(r.rank_of("A") == 1);
  CHECK(r.rank_of("B") == 1);
}

TEST_CASE("identical rankings have tau 1") {
  std::vector<std::pair<std::string, double>> s;
  for (int i = 0; i < 22; ++i)
    s.emplace_back("m" + std::to_string(100 + i), 22.0 - i);
  auto r = induce_ranking(scores_of(s));
  auto res = kendall_tau(r, r);
  CHECK(res.tau == doctest::Approx(1.0));
  CHECK(res.n_discordant == 0);
  CHECK(res.p_value < 0.05);
}

TEST_CASE("reversed ranking has tau -1") {
  std::vector<std::pair<std::string, double>> fwd, rev;
  for (int i = 0; i < 8; ++i) {
    fwd.emplace_back("m" + std::to_string(i), static_cast<double>(i));
    rev.emplace_back("m" + std::to_string(i), static_cast<double>(-i));
  }
  auto res = kendall_tau(ranking_of(fwd), ranking_of(rev));
  CHECK(res.tau == doctest::Approx(-1.0));
}

TEST_CASE("single swapped pair: tau = 4/6") {
  // [1,2,3,4] vs [1,3,2,4]: 5 concordant, 1 discordant.
  auto ra = ranking_of({{"w", 4}, {"x", 3}, {"y", 2}, {"z", 1}});
  auto rb = ranking_of({{"w", 4}, {"x", 2}, {"y", 3}, {"z", 1}});
  auto res = kendall_tau(ra, rb);
  CHECK(res.n_concordant == 5);
  CHECK(res.n_discordant == 1);
  CHECK(res.tau == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("tau is symmetric and rejects roster mismatches") {
  auto ra = ranking_of({{"a", 3}, {"b", 2}, {"c", 1}});
  auto rb = ranking_of({{"a", 1}, {"b", 3}, {"c", 2}});
  auto ab = kendall_tau(ra, rb);
  auto ba = kendall_tau(rb, ra);
  CHECK(ab.tau == doctest::Approx(ba.tau));
  CHECK(ab.p_value == doctest::Approx(ba.p_value));

  auto other = ranking_of({{"a", 1}, {"b", 2}, {"d", 3}});
  try {
    kendall_tau(ra, other);
    FAIL("expected RosterMismatch");
  } catch (const ToolError& e) {
    CHECK(e.code() == Errc::roster_mismatch);
  }
}

TEST_CASE("tau-b equals brute-force pair counting on every permutation up to M=6") {
  // Exhaustive agreement with an independent implementation, including the
  // identity and full reversal at each M.
  for (int m = 2; m <= 6; ++m) {
    std::vector<int> perm(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<size_t>(i)] = i;
    std::vector<std::pair<std::string, double>> ref;
    for (int i = 0; i < m; ++i)
      ref.emplace_back("m" + std::to_string(i), static_cast<double>(m - i));
    auto ref_ranking = ranking_of(ref);
    do {
      std::vector<std::pair<std::string, double>> cur;
      std::map<std::string, double> xm, ym;
      for (int i = 0; i < m; ++i) {
        cur.emplace_back("m" + std::to_string(i),
                         static_cast<double>(m - perm[static_cast<size_t>(i)]));
        xm["m" + std::to_string(i)] = static_cast<double>(m - i);
        ym["m" + std::to_string(i)] = static_cast<double>(m - perm[static_cast<size_t>(i)]);
      }
      double expect = oracle::kendall_tau_b(xm, ym);
      auto res = kendall_tau(ref_ranking, ranking_of(cur));
      CHECK(res.tau == doctest::Approx(expect).epsilon(1e-12));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("tau-b handles ties against brute force") {
  std::map<std::string, double> x{{"a", 3}, {"b", 3}, {"c", 2}, {"d", 1}, {"e", 1}};
  std::map<std::string, double> y{{"a", 5}, {"b", 3}, {"c", 3}, {"d", 2}, {"e", 1}};
  std::vector<std::pair<std::string, double>> xv(x.begin(), x.end());
  std::vector<std::pair<std::string, double>> yv(y.begin(), y.end());
  auto res = kendall_tau(ranking_of(xv), ranking_of(yv));
  CHECK(res.tau == doctest::Approx(oracle::kendall_tau_b(x, y)).epsilon(1e-12));
  CHECK(res.n_tied > 0);
  CHECK(res.n_concordant + res.n_discordant + res.n_tied == 5 * 4 / 2);
  CHECK(std::string(res.p_method) == "normal_approx");
  // tau < 1: a tie in only one ranking breaks perfection.
  CHECK(res.tau < 1.0);
}

TEST_CASE("exact p-values match the permutation distribution for small M") {
  // M=3, identity: S = 3, permutations with S >= 3: 1 of 6 -> two-sided 1/3.
  auto r1 = ranking_of({{"a", 3}, {"b", 2}, {"c", 1}});
  auto res = kendall_tau(r1, r1);
  CHECK(std::string(res.p_method) == "exact");
  CHECK(res.p_value == doctest::Approx(1.0 / 3.0));

  // M=4 identity: 1/24 permutations at tau=1, plus the mirror tail -> 1/12.
  auto r2 = ranking_of({{"a", 4}, {"b", 3}, {"c", 2}, {"d", 1}});
  CHECK(kendall_tau(r2, r2).p_value == doctest::Approx(2.0 / 24.0));
}

TEST_CASE("monotone score transforms leave the ranking unchanged") {
  std::vector<std::pair<std::string, double>> base{
      {"a", 0.1}, {"b", 0.7}, {"c", 0.3}, {"d", 0.7}};
  auto r1 = ranking_of(base);
  for (auto& [n, s] : base) s = 3.0 * s + 10.0;  // strictly monotone
  auto r2 = ranking_of(base);
  CHECK(r1.order == r2.order);
  CHECK(r1.tie_groups == r2.tie_groups);
}

TEST_CASE("anchor quality composes aggregation, induction, and correlation") {
  // Clean 4-model grid around anchor X: recovery is exact. b_mid wins half
  // and ties half so the win-rate collapse still separates it from a_good.
  std::vector<Rec> recs;
  for (int i = 0; i < 6; ++i) {
    std::string instr = "i" + std::to_string(i);
    recs.push_back({instr, "a_good", "X", 2});
    recs.push_back({instr, "b_mid", "X", i < 3 ? 1 : 0});
    recs.push_back({instr, "c_weak", "X", -1});
  }
  auto js = oracle::ingest(recs);
  auto gold = induce_ranking(
      scores_of({{"a_good", 4}, {"b_mid", 3}, {"X", 2}, {"c_weak", 1}}));
  auto res = anchor_quality(js, "X", gold, Aggregation::win_rate);
  CHECK(res.tau == doctest::Approx(1.0));

  auto res_bt = anchor_quality(js, "X", gold, Aggregation::bradley_terry);
  CHECK(res_bt.tau == doctest::Approx(1.0));
}

TEST_CASE("gold rankings load from score CSV") {
  std::istringstream in("# comment line\nmodel,score\nbest,3.5\nmid,2\nworst,-1\n");
  auto gold = ranking_from_score_csv(in);
  CHECK(gold.order == std::vector<std::string>{"best", "mid", "worst"});

  std::istringstream dup("a,1\na,2\n");
  CHECK_THROWS_AS(ranking_from_score_csv(dup), ToolError);
  std::istringstream bad("a,xyz\n");
  CHECK_THROWS_AS(ranking_from_score_csv(bad), ToolError);
}
