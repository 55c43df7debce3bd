#include <doctest.h>

#include <algorithm>

#include "coreflow/errors.hpp"
#include "coreflow/instance.hpp"
#include "support/corpus.hpp"

using namespace coreflow;
using testsupport::bg;

TEST_CASE("the fork instance validates cleanly") {
  const TwoStageInstance inst = testsupport::star_fork_instance(DiffMode::Abs);
  CHECK(validate(inst).empty());
}

TEST_CASE("probability violations are reported by field") {
  TwoStageInstance inst = testsupport::star_fork_instance(DiffMode::Abs);
  inst.scenarios[1].prob = Rational(1, 3);
  const auto violations = validate(inst);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0] == "probabilities sum to 5/6");

  inst.scenarios[1].prob = Rational(-1, 2);
  const auto negative = validate(inst);
  CHECK(std::find(negative.begin(), negative.end(),
                  "probability of scenario S2 is not positive") != negative.end());
}

TEST_CASE("bipartition disagreements are reported by vertex") {
  TwoStageInstance inst = testsupport::star_fork_instance(DiffMode::Abs);
  inst.scenarios[0].graph = bg({"b"}, {"a"}, {{"b", "a"}});  // a flipped to Right
  const auto violations = validate(inst);
  CHECK(std::find_if(violations.begin(), violations.end(), [](const std::string& v) {
          return v.find("bipartition mismatch at a") != std::string::npos;
        }) != violations.end());
}

TEST_CASE("lambda must be nonnegative and live on first-stage vertices") {
  TwoStageInstance inst = testsupport::star_fork_instance(DiffMode::Abs);
  inst.lambda["a"] = Rational(-1);
  inst.lambda["zz"] = Rational(1);
  const auto violations = validate(inst);
  CHECK(violations.size() == 2);
}

TEST_CASE("multistage validation") {
  MultistageInstance inst;
  inst.stages.push_back(bg({"a"}, {"b"}, {{"a", "b"}}));
  CHECK_FALSE(validate(inst).empty());  // one stage, missing lambda is implied

  inst.stages.push_back(bg({"a"}, {"b"}, {}));
  inst.lambda.push_back({{"a", 1}});
  CHECK(validate(inst).empty());

  inst.lambda[0]["b"] = Rational(-2);
  CHECK(validate(inst).size() == 1);
}

TEST_CASE("instance JSON round trip") {
  const TwoStageInstance inst = testsupport::star_fork_instance(DiffMode::Abs);
  const std::string text = instance_to_json(inst);
  const InstanceFile parsed = load_instance(text);
  const auto* two = std::get_if<TwoStageInstance>(&parsed);
  REQUIRE(two != nullptr);
  CHECK(two->stage0 == inst.stage0);
  CHECK(two->scenarios.size() == 2);
  CHECK(two->scenarios[0].prob == Rational(1, 2));
  CHECK(two->mode == DiffMode::Abs);
  CHECK(two->lambda == inst.lambda);
  CHECK(instance_to_json(*two) == text);
}

TEST_CASE("unknown keys and malformed fields are rejected") {
  const TwoStageInstance inst = testsupport::star_fork_instance(DiffMode::Pos);
  std::string text = instance_to_json(inst);
  CHECK_THROWS_AS(load_instance("{"), ParseError);
  CHECK_THROWS_AS(load_instance(R"({"kind": "two-stage"})"), ParseError);

  std::string with_extra = text;
  with_extra.insert(with_extra.find("\"kind\""), "\"surprise\": 1,\n  ");
  CHECK_THROWS_AS(load_instance(with_extra), ParseError);

  std::string bad_mode = text;
  const auto pos = bad_mode.find("\"pos\"");
  bad_mode.replace(pos, 5, "\"between\"");
  CHECK_THROWS_AS(load_instance(bad_mode), ParseError);
}

TEST_CASE("seed key is allowed and survives a round trip") {
  const TwoStageInstance inst = testsupport::star_fork_instance(DiffMode::Neg);
  const std::string text = instance_to_json(inst, 12345);
  CHECK(text.find("\"seed\": 12345") != std::string::npos);
  CHECK_NOTHROW(load_instance(text));
}

TEST_CASE("multistage JSON round trip") {
  MultistageInstance inst;
  inst.stages.push_back(bg({"a"}, {"b", "c"}, {{"a", "b"}}));
  inst.stages.push_back(bg({"a"}, {"b"}, {{"a", "b"}}));
  inst.lambda.push_back({{"a", Rational(1, 3)}, {"b", 2}});
  inst.mode = DiffMode::Pos;
  const std::string text = instance_to_json(inst);
  const InstanceFile parsed = load_instance(text);
  const auto* multi = std::get_if<MultistageInstance>(&parsed);
  REQUIRE(multi != nullptr);
  CHECK(multi->stages.size() == 2);
  CHECK(multi->lambda == inst.lambda);
  CHECK(instance_to_json(*multi) == text);
}

TEST_CASE("plain edge lists") {
  const SimpleGraph g = parse_edge_list("u v\n# comment\nw\n");
  CHECK(g.vertex_count() == 3);
  CHECK(g.edges.size() == 1);
  CHECK(g.degree(0) == 1);  // u
  CHECK(g.degree(2) == 0);  // w, declared isolated
  CHECK_THROWS_AS(parse_edge_list("u u\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("u v\nv u\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("u v w\n"), ParseError);
  const SimpleGraph back = parse_edge_list(to_edge_list(g));
  CHECK(back.names == g.names);
  CHECK(back.edges == g.edges);
}

TEST_CASE("hardness construction on a single edge") {
  const SimpleGraph k2 = parse_edge_list("u v\n");
  const HardnessInstance h = build_hardness_instance(k2);
  CHECK(h.stage0.vertex_count() == 6);  // u.1, v.1, u~v, alpha, beta1, beta2
  CHECK(h.stage0.edge_count() == 5);
  CHECK(h.lambda.size() == 1);
  CHECK(h.lambda.at("alpha") == 1);
  CHECK(h.mode == DiffMode::Pos);

  // copies and the hub sit on one side, edge-vertices and guards on the other
  CHECK(h.stage0.side("u.1") == Side::Left);
  CHECK(h.stage0.side("v.1") == Side::Left);
  CHECK(h.stage0.side("alpha") == Side::Left);
  CHECK(h.stage0.side("u~v") == Side::Right);
  CHECK(h.stage0.side("beta1") == Side::Right);
  CHECK(h.stage0.side("beta2") == Side::Right);
}

TEST_CASE("hardness construction on a triangle") {
  const SimpleGraph tri = parse_edge_list("a b\nb c\na c\n");
  const HardnessInstance h = build_hardness_instance(tri);
  CHECK(h.stage0.vertex_count() == 3 * 2 + 3 + 3);  // copies + edge-vertices + hub/guards
  const TwoStageInstance full = explicit_hardness_instance(h);
  CHECK(validate(full).empty());
  CHECK(full.scenarios.size() == 8);
}

TEST_CASE("hardness rejects edgeless and reserved-name bases") {
  CHECK_THROWS_AS(build_hardness_instance(parse_edge_list("u\nv\n")), std::invalid_argument);
  CHECK_THROWS_AS(build_hardness_instance(parse_edge_list("alpha v\n")), std::invalid_argument);
  CHECK_THROWS_AS(build_hardness_instance(parse_edge_list("a.b v\n")), std::invalid_argument);
}

TEST_CASE("support enumeration is the full distribution") {
  const HardnessInstance h = build_hardness_instance(parse_edge_list("u v\n"));
  const auto support = enumerate_support(h);
  REQUIRE(support.size() == 4);
  Rational total = 0;
  for (const auto& point : support) {
    CHECK(point.prob == Rational(1, 4));
    total += point.prob;
  }
  CHECK(total == 1);

  // the full subset keeps every copy: the edge-vertex can be matched
  const BipartiteGraph& all_in = support[3].graph;
  CHECK(all_in.has_vertex("u.1"));
  CHECK(all_in.has_vertex("v.1"));
  CHECK(all_in.has_vertex("u~v"));
  CHECK(all_in.has_vertex("alpha"));
  CHECK_FALSE(all_in.has_vertex("beta1"));
  CHECK(matching_number(all_in) == 1);

  // the empty subset leaves the edge-vertex only the hub
  const BipartiteGraph& none_in = support[0].graph;
  CHECK(none_in.vertex_count() == 2);
  CHECK(none_in.edge_count() == 1);
}

TEST_CASE("sampler draws are scenarios of the declared support") {
  const HardnessInstance h = build_hardness_instance(parse_edge_list("u v\n"));
  const auto sampler = h.sampler();
  Xoshiro256 rng(99);
  for (int i = 0; i < 20; ++i) {
    const BipartiteGraph drawn = sampler->draw(rng);
    CHECK(drawn.has_vertex("alpha"));
    CHECK(drawn.has_vertex("u~v"));
    CHECK_FALSE(drawn.has_vertex("beta1"));
  }
}

TEST_CASE("generated instances are valid and reproducible") {
  GenParams params;
  params.left_count = 4;
  params.right_count = 3;
  params.scenario_count = 3;
  const TwoStageInstance a = gen_random(params, 2024);
  const TwoStageInstance b = gen_random(params, 2024);
  CHECK(instance_to_json(a, 2024) == instance_to_json(b, 2024));
  CHECK(validate(a).empty());

  const TwoStageInstance c = gen_random(params, 2025);
  CHECK(instance_to_json(a) != instance_to_json(c));
}

TEST_CASE("degenerate densities") {
  GenParams params;
  params.density = 0;
  const TwoStageInstance empty = gen_random(params, 7);
  CHECK(empty.stage0.edge_count() == 0);
  for (const Scenario& s : empty.scenarios) CHECK(s.graph.edge_count() == 0);

  params.density = 1;
  const TwoStageInstance full = gen_random(params, 7);
  int lefts = 0, rights = 0;
  for (int v = 0; v < full.stage0.vertex_count(); ++v) {
    (full.stage0.side(v) == Side::Left ? lefts : rights) += 1;
  }
  CHECK(full.stage0.edge_count() == lefts * rights);
}

TEST_CASE("random multistage chains validate") {
  const MultistageInstance inst =
      gen_random_multistage(5, 3, Rational(1, 2), DiffMode::Abs, 31);
  CHECK(validate(inst).empty());
  CHECK(inst.stages.size() == 3);
  CHECK(inst.lambda.size() == 2);
}
