#include <doctest.h>

#include "coreflow/errors.hpp"
#include "coreflow/saa.hpp"
#include "support/corpus.hpp"

using namespace coreflow;

TEST_CASE("ln enclosures") {
  const Rational tol(1, 1000000000);
  const auto [lo1, hi1] = ln_bounds(Rational(1), tol);
  CHECK(lo1 == 0);
  CHECK(hi1 == 0);

  const auto [lo, hi] = ln_bounds(Rational(8), tol);
  CHECK(hi - lo <= tol);
  // ln 8 = 2.0794415416798... must lie inside the enclosure
  CHECK(lo <= Rational(20794415417LL, 10000000000LL));
  CHECK(hi >= Rational(20794415416LL, 10000000000LL));
  CHECK(lo >= Rational(20794415406LL, 10000000000LL));
  CHECK(hi <= Rational(20794415428LL, 10000000000LL));

  const auto [rlo, rhi] = ln_bounds(Rational(1, 3), tol);
  CHECK(rlo < 0);
  CHECK(rhi < 0);
  CHECK(rhi - rlo <= tol);

  CHECK_THROWS_AS(ln_bounds(Rational(0), tol), std::invalid_argument);
}

TEST_CASE("sample count on the stated configuration") {
  // lambda sum 1, two first-stage vertices, confidence 1/2, accuracy 1:
  // 2 * ln(4 / (1/2)) = 2 ln 8 = 4.158... -> 5 samples
  CHECK(required_samples(Rational(1), 2, Rational(1, 2), Rational(1)) == 5);
}

TEST_CASE("sample bound scales as the formula says") {
  const Rational lam(3, 2);
  const Rational conf(1, 4);
  const Rational acc(1, 8);
  const Rational base = saa_sample_bound(lam, 5, conf, acc);

  // doubling the accuracy divides the bound by exactly 4 (same ln bound)
  CHECK(saa_sample_bound(lam, 5, conf, 2 * acc) * 4 == base);

  // halving the confidence adds 2*lam^2*ln(2)/acc^2 up to the ln tolerance
  const Rational grown = saa_sample_bound(lam, 5, conf / 2, acc);
  const auto [ln2_lo, ln2_hi] = ln_bounds(Rational(2), Rational(1, 1000000000));
  const Rational coeff = 2 * lam * lam / (acc * acc);
  const Rational tol_term = coeff * Rational(2, 1000000000);
  CHECK(grown - base >= coeff * ln2_lo - tol_term);
  CHECK(grown - base <= coeff * ln2_hi + tol_term);
}

TEST_CASE("vertex cover counts") {
  CHECK(count_vertex_covers(parse_edge_list("u v\n")) == 3);
  CHECK(count_vertex_covers(parse_edge_list("a b\nb c\na c\n")) == 4);
  CHECK(count_vertex_covers(parse_edge_list("a\nb\nc\nd\n")) == 16);  // edgeless: every subset
}

TEST_CASE("exact expectation on the single-edge base graph") {
  const HardnessInstance h = build_hardness_instance(parse_edge_list("u v\n"));
  const Allocation y = Allocation::indicator(h.stage0, min_vertex_cover(h.stage0));
  REQUIRE(is_core(h.stage0, y));
  CHECK(y.at("alpha") == 1);
  CHECK(exact_expected_value(y, h) == Rational(3, 4));  // 3 vertex covers out of 4 subsets
}

TEST_CASE("exact expectation on the triangle") {
  const HardnessInstance h = build_hardness_instance(parse_edge_list("a b\nb c\na c\n"));
  const Allocation y = Allocation::indicator(h.stage0, min_vertex_cover(h.stage0));
  CHECK(exact_expected_value(y, h) == Rational(1, 2));  // 4 of 8
}

TEST_CASE("counting identity holds on every small base graph") {
  const std::vector<std::string> bases = {
      "u v\n", "a b\nb c\n", "a b\nb c\na c\n", "a b\nc d\n",
      "a b\nb c\nc d\n", "a b\na c\na d\n", "a b\nb c\nc d\nd a\n"};
  for (const auto& text : bases) {
    const SimpleGraph base = parse_edge_list(text);
    const HardnessInstance h = build_hardness_instance(base);
    const Allocation y = Allocation::indicator(h.stage0, min_vertex_cover(h.stage0));
    const Rational value = exact_expected_value(y, h);
    const BigInt scale = BigInt(1) << base.vertex_count();
    CHECK(value * scale == count_vertex_covers(base));
  }
}

TEST_CASE("every integral first-stage core element fixes the hub and guards") {
  const HardnessInstance h = build_hardness_instance(parse_edge_list("u v\n"));
  const auto covers = testsupport::scan_min_covers(h.stage0);
  CHECK_FALSE(covers.empty());
  const int hub = h.stage0.index_of("alpha");
  const int g1 = h.stage0.index_of("beta1");
  const int g2 = h.stage0.index_of("beta2");
  for (std::uint32_t mask : covers) {
    CHECK((mask >> hub & 1) == 1);
    CHECK((mask >> g1 & 1) == 0);
    CHECK((mask >> g2 & 1) == 0);
  }
}

TEST_CASE("point-mass sampling reduces to the one-scenario instance") {
  const BipartiteGraph g0 = testsupport::bg({"a"}, {"b"}, {{"a", "b"}});
  const PointMassSampler sampler(testsupport::bg({"a"}, {"b"}, {}));

  SaaConfig cfg;
  cfg.samples = 7;
  const SaaResult r = saa_solve(g0, {{"a", 1}, {"b", 1}}, sampler, cfg, 42);
  CHECK(r.samples == 7);

  TwoStageInstance single;
  single.stage0 = g0;
  single.scenarios.push_back({"S1", Rational(1), testsupport::bg({"a"}, {"b"}, {})});
  single.lambda = {{"a", 1}, {"b", 1}};
  single.mode = DiffMode::Pos;
  CHECK(r.empirical_objective == solve_two_stage(single).objective);
  CHECK(evaluate_first_stage(r.y_hat, single) == r.empirical_objective);
}

TEST_CASE("saa is deterministic per seed") {
  const HardnessInstance h = build_hardness_instance(parse_edge_list("u v\n"));
  const auto sampler = h.sampler();
  SaaConfig cfg;
  cfg.samples = 40;
  const SaaResult a = saa_solve(h.stage0, h.lambda, *sampler, cfg, 5);
  const SaaResult b = saa_solve(h.stage0, h.lambda, *sampler, cfg, 5);
  CHECK(a.y_hat == b.y_hat);
  CHECK(a.empirical_objective == b.empirical_objective);

  const SaaResult c = saa_solve(h.stage0, h.lambda, *sampler, cfg, 6);
  CHECK(instance_to_json(a.sampled) == instance_to_json(b.sampled));
  CHECK(instance_to_json(a.sampled) != instance_to_json(c.sampled));
}

TEST_CASE("saa on the single-edge reduction lands near the counting value") {
  const HardnessInstance h = build_hardness_instance(parse_edge_list("u v\n"));
  const auto sampler = h.sampler();
  SaaConfig cfg;
  cfg.accuracy = Rational(1, 4);
  cfg.confidence = Rational(1, 4);
  const SaaResult r = saa_solve(h.stage0, h.lambda, *sampler, cfg, 7);
  // N = ceil(32 * ln(2^6 * 4)) = 178
  CHECK(r.samples == 178);
  CHECK(exact_expected_value(r.y_hat, h) == Rational(3, 4));
}

TEST_CASE("config validation") {
  SaaConfig both;
  both.samples = 5;
  both.accuracy = Rational(1, 2);
  CHECK_THROWS_AS(both.check(), std::invalid_argument);

  SaaConfig missing;
  missing.accuracy = Rational(1, 2);
  CHECK_THROWS_AS(missing.check(), std::invalid_argument);

  SaaConfig bad_conf;
  bad_conf.accuracy = Rational(1, 2);
  bad_conf.confidence = Rational(2);
  CHECK_THROWS_AS(bad_conf.check(), std::invalid_argument);
}
