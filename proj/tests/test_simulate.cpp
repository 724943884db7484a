#include <doctest.h>

#include <cmath>

#include "anchoreval/aggregate.hpp"
#include "anchoreval/informativeness.hpp"
#include "anchoreval/simulate.hpp"

using namespace anchoreval;

TEST_CASE("noiseless dominance: a wide skill gap wins every verdict") {
  // P(upset) = sigmoid(-25) under the Davidson model; at N = 200 an upset
  // has probability ~ 3e-9, i.e. never for a fixed seed.
  SyntheticWorld w;
  w.latent_skills = {{"strong", 25.0}, {"weak", 0.0}};
  w.tie_strength = 0.0;
  w.instruction_noise_sd = 0.0;
  w.clear_margin = 0.5;
  w.n_instructions = 200;
  w.seed = 1;
  auto js = sample_anchor_judgments(w, "weak");
  auto sv = winrate_scores(js, "weak");
  CHECK(sv.score_of("strong") == doctest::Approx(1.0));
  js.for_each_cell([&](int, int, int, Verdict v) { CHECK(std::abs(v.value()) == 2); });
}

TEST_CASE("equal skills give a balanced win rate") {
  SyntheticWorld w;
  w.latent_skills = {{"a", 0.7}, {"b", 0.7}};
  w.tie_strength = 0.0;
  w.instruction_noise_sd = 0.0;
  w.clear_margin = 1.0;
  w.n_instructions = 10000;
  w.seed = 2;
  auto js = sample_anchor_judgments(w, "b");
  double rate = winrate_scores(js, "b").score_of("a");
  // 3-sigma binomial band around 0.5 at N = 10000.
  CHECK(rate == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("large tie strength drives the tie fraction toward 1") {
  SyntheticWorld w;
  w.latent_skills = {{"a", 0.0}, {"b", 0.2}};
  w.tie_strength = 1e6;
  w.instruction_noise_sd = 0.0;
  w.n_instructions = 500;
  w.seed = 3;
  auto js = sample_anchor_judgments(w, "b");
  long ties = 0;
  js.for_each_cell([&](int, int, int, Verdict v) { ties += v.value() == 0; });
  CHECK(static_cast<double>(ties) / 500.0 > 0.99);
}

TEST_CASE("davidson tie share at equal skills follows nu/(2+nu)") {
  SyntheticWorld w;
  w.latent_skills = {{"a", 1.0}, {"b", 1.0}};
  w.tie_strength = 1.0;  // expect 1/3 ties
  w.instruction_noise_sd = 0.0;
  w.n_instructions = 20000;
  w.seed = 4;
  auto js = sample_anchor_judgments(w, "b");
  long ties = 0;
  js.for_each_cell([&](int, int, int, Verdict v) { ties += v.value() == 0; });
  CHECK(static_cast<double>(ties) / 20000.0 == doctest::Approx(1.0 / 3.0).epsilon(0.05));
}

TEST_CASE("clear margin splits wins into clear and slight") {
  SyntheticWorld w;
  w.latent_skills = {{"a", 3.0}, {"b", 0.0}, {"c", 2.9}};
  w.tie_strength = 0.0;
  w.instruction_noise_sd = 0.0;
  w.clear_margin = 1.0;
  w.n_instructions = 50;
  w.seed = 5;
  auto js = sample_quadratic_judgments(w);
  // a vs b: gap 3.0 > margin -> every win is clear (2); a vs c: gap 0.1 -> slight.
  for (int i = 0; i < 50; ++i) {
    int ab = js.verdict(i, js.model_index("a"), js.model_index("b"))->value();
    CHECK(std::abs(ab) == 2);
    int ac = js.verdict(i, js.model_index("a"), js.model_index("c"))->value();
    CHECK(std::abs(ac) == 1);
  }
}

TEST_CASE("verdict corruption changes roughly the requested share") {
  SyntheticWorld w;
  w.latent_skills = {{"a", 5.0}, {"b", 0.0}};
  w.tie_strength = 0.0;
  w.instruction_noise_sd = 0.0;
  w.clear_margin = 1.0;
  w.n_instructions = 10000;
  w.seed = 6;
  // Without flips every verdict would be +2 for a.
  JudgeProfile judge;
  judge.extra_flip_rate = 0.2;
  auto js = sample_anchor_judgments(w, "b", judge);
  long flipped = 0;
  js.for_each_cell([&](int, int lo, int, Verdict v) {
    int from_a = lo == js.model_index("a") ? v.value() : -v.value();
    flipped += from_a != 2;
  });
  CHECK(static_cast<double>(flipped) / 10000.0 == doctest::Approx(0.2).epsilon(0.08));
  CHECK_THROWS_AS(sample_anchor_judgments(w, "b", JudgeProfile{0.5}), ToolError);
  CHECK_THROWS_AS(sample_anchor_judgments(w, "nope"), ToolError);
}

TEST_CASE("sampling is deterministic: same world, same bytes") {
  SyntheticWorld w = SyntheticWorld::ladder(8, 0.0, 3.0);
  w.tie_strength = 0.4;
  w.instruction_noise_sd = 0.5;
  w.n_instructions = 40;
  w.seed = 7;
  JudgeProfile judge;
  judge.extra_flip_rate = 0.05;
  auto a = sample_quadratic_judgments(w, judge).serialize_to_string();
  auto b = sample_quadratic_judgments(w, judge).serialize_to_string();
  CHECK(a == b);
  w.seed = 8;
  CHECK(sample_quadratic_judgments(w, judge).serialize_to_string() != a);
}

TEST_CASE("world configs round-trip through JSON") {
  SyntheticWorld w = SyntheticWorld::ladder(5, -1.0, 1.0);
  w.tie_strength = 0.3;
  w.instruction_noise_sd = 0.2;
  w.clear_margin = 0.8;
  w.n_instructions = 33;
  w.seed = 99;
  auto back = SyntheticWorld::from_json_text(w.to_json_text());
  CHECK(back.latent_skills == w.latent_skills);
  CHECK(back.tie_strength == w.tie_strength);
  CHECK(back.instruction_noise_sd == w.instruction_noise_sd);
  CHECK(back.clear_margin == w.clear_margin);
  CHECK(back.n_instructions == w.n_instructions);
  CHECK(back.seed == w.seed);
  CHECK_THROWS_AS(SyntheticWorld::from_json_text("{"), ToolError);
  CHECK_THROWS_AS(SyntheticWorld::from_json_text("{\"models\":[]}"), ToolError);
}

TEST_CASE("default clear margin is the skill IQR") {
  SyntheticWorld w;
  w.latent_skills = {{"a", 0.0}, {"b", 1.0}, {"c", 2.0}, {"d", 3.0}};
  w.n_instructions = 1;
  CHECK(w.resolved_clear_margin() == doctest::Approx(1.5));
  SyntheticWorld flat;
  flat.latent_skills = {{"a", 1.0}, {"b", 1.0}};
  flat.n_instructions = 1;
  CHECK(flat.resolved_clear_margin() == doctest::Approx(1.0));  // degenerate fallback
}

TEST_CASE("transitive worlds contain no intransitive triangle") {
  SyntheticWorld w = SyntheticWorld::ladder(9, 0.0, 2.0);
  w.instruction_noise_sd = 0.8;  // ordering jitter
  w.n_instructions = 60;
  w.seed = 10;
  auto js = noiseless_transitive_judgments(w);
  const int m = js.model_count();
  for (int i = 0; i < 60; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          if (a == b || b == c || a == c) continue;
          int ab = js.verdict(i, a, b)->value();
          int bc = js.verdict(i, b, c)->value();
          int ac = js.verdict(i, a, c)->value();
          if (ab > 0 && bc > 0) CHECK(ac > 0);
        }
}

TEST_CASE("median anchor informativeness approaches the 1/2 bound") {
  // Three-level informativeness of anchor at rank k among M-1 opponents is
  // E[k(M-1-k)] / C(M-1,2); the median anchor approaches 1/2.
  SyntheticWorld w = SyntheticWorld::ladder(21, 0.0, 20.0);
  w.instruction_noise_sd = 6.0;
  w.n_instructions = 800;
  w.seed = 11;
  auto js = noiseless_transitive_judgments(w);
  double mid = informativeness(js, "m11", Granularity::three_level).rate;
  CHECK(mid == doctest::Approx(0.5).epsilon(0.08));
  CHECK(mid <= 0.5);
}

TEST_CASE("extreme anchor informativeness collapses as jitter vanishes") {
  SyntheticWorld w = SyntheticWorld::ladder(12, 0.0, 11.0);
  w.instruction_noise_sd = 0.0;
  w.n_instructions = 50;
  w.seed = 12;
  auto js = noiseless_transitive_judgments(w);
  CHECK(informativeness(js, "m12", Granularity::three_level).rate == doctest::Approx(0.0));
  CHECK(informativeness(js, "m01", Granularity::three_level).rate == doctest::Approx(0.0));
}

TEST_CASE("shifting all latents leaves samples and the BT order unchanged") {
  // Verdict probabilities depend only on skill differences, and the fit is
  // translation-normalized, so a global shift is invisible end to end.
  SyntheticWorld a = SyntheticWorld::ladder(7, 0.0, 3.0);
  a.tie_strength = 0.4;
  a.instruction_noise_sd = 0.5;
  a.clear_margin = 0.5;
  a.n_instructions = 60;
  a.seed = 44;
  SyntheticWorld b = a;
  for (auto& [name, skill] : b.latent_skills) skill += 17.5;

  auto ja = sample_quadratic_judgments(a);
  auto jb = sample_quadratic_judgments(b);
  CHECK(ja.serialize_to_string() == jb.serialize_to_string());
  auto ra = induce_ranking(bradley_terry_scores(ja));
  auto rb = induce_ranking(bradley_terry_scores(jb));
  CHECK(ra.order == rb.order);
}
