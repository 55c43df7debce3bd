#include <doctest.h>

#include <map>

#include "coreflow/errors.hpp"
#include "coreflow/reduce.hpp"
#include "support/corpus.hpp"

using namespace coreflow;
using testsupport::bg;

namespace {

int count_kind(const FlowNetwork& net, ArcKind kind) {
  int n = 0;
  for (const Arc& a : net.arcs) n += a.kind == kind;
  return n;
}

}  // namespace

TEST_CASE("epsilon on the stated coefficient sets") {
  StageSystem sys = StageSystem::single(bg({"a"}, {"b"}, {{"a", "b"}}));
  ObjectiveCoefficients zero;
  zero.alpha.resize(1);
  CHECK(epsilon(zero) == 1);  // empty sums

  ObjectiveCoefficients minus3;
  minus3.alpha.push_back({{"a", -3}});
  CHECK(epsilon(minus3) == Rational(1, 4));

  const TwoStageInstance fork = testsupport::star_fork_instance(DiffMode::Abs);
  CHECK(epsilon(objective_from_instance(fork)) == Rational(1, 5));
}

TEST_CASE("instance objectives split by mode") {
  const TwoStageInstance fork_abs = testsupport::star_fork_instance(DiffMode::Abs);
  const ObjectiveCoefficients abs = objective_from_instance(fork_abs);
  CHECK(abs.beta[0].at("a") == Rational(1, 2));  // p * lambda
  CHECK(abs.b[0].at("a") == Rational(1, 2));

  const ObjectiveCoefficients pos =
      objective_from_instance(testsupport::star_fork_instance(DiffMode::Pos));
  for (const auto& m : pos.b) {
    for (const auto& [_, v] : m) CHECK(v == 0);
  }

  TwoStageInstance no_lambda = fork_abs;
  no_lambda.lambda.clear();
  const ObjectiveCoefficients silent = objective_from_instance(no_lambda);
  CHECK(epsilon(silent) == 1);
  for (const auto& m : silent.beta) {
    for (const auto& [_, v] : m) CHECK(v == 0);
  }
}

TEST_CASE("auxiliary network of the fork instance, arc by arc") {
  const TwoStageInstance fork = testsupport::star_fork_instance(DiffMode::Abs);
  const StageSystem sys = StageSystem::from_two_stage(fork);
  const ObjectiveCoefficients coeffs = objective_from_instance(fork);
  const AuxGraph aux = build_aux_graph(sys, coeffs, epsilon(coeffs));

  CHECK(aux.net.node_count == 9);  // s, t, a, b, c, a^{S1}, b^{S1}, a^{S2}, c^{S2}
  CHECK(aux.net.arcs.size() == 19);
  CHECK(aux.scale == 10);  // common denominator of 1 and eps/2 = 1/10

  CHECK(count_kind(aux.net, ArcKind::SourceArc) == 3);
  CHECK(count_kind(aux.net, ArcKind::SinkArc) == 4);
  CHECK(count_kind(aux.net, ArcKind::DeltaArc) == 4);
  CHECK(count_kind(aux.net, ArcKind::DArc) == 4);
  CHECK(count_kind(aux.net, ArcKind::EdgeArc) == 4);

  BigInt finite_total = 0;
  for (const Arc& a : aux.net.arcs) {
    switch (a.kind) {
      case ArcKind::SourceArc:
      case ArcKind::SinkArc:
        CHECK(a.capacity == aux.scale);  // alpha == 0, so 1 + eps*alpha scales to D
        break;
      case ArcKind::DeltaArc:
      case ArcKind::DArc:
        CHECK(a.capacity == 1);  // eps * 1/2 = 1/10, scaled by 10
        break;
      case ArcKind::EdgeArc:
        break;
    }
    if (a.kind != ArcKind::EdgeArc) finite_total += a.capacity;
  }
  for (const Arc& a : aux.net.arcs) {
    if (a.kind == ArcKind::EdgeArc) CHECK(a.capacity == finite_total + 1);
  }
}

TEST_CASE("no shared vertices means no link arcs") {
  TwoStageInstance inst;
  inst.stage0 = bg({"a"}, {"b"}, {{"a", "b"}});
  inst.scenarios.push_back({"S1", Rational(1), bg({"x"}, {"y"}, {{"x", "y"}})});
  inst.lambda = {{"a", 1}};
  inst.mode = DiffMode::Abs;
  const StageSystem sys = StageSystem::from_two_stage(inst);
  const ObjectiveCoefficients coeffs = objective_from_instance(inst);
  const AuxGraph aux = build_aux_graph(sys, coeffs, epsilon(coeffs));
  CHECK(count_kind(aux.net, ArcKind::DeltaArc) == 0);
  CHECK(count_kind(aux.net, ArcKind::DArc) == 0);
}

TEST_CASE("negative beta is rejected as an unbounded direction") {
  const TwoStageInstance fork = testsupport::star_fork_instance(DiffMode::Abs);
  const StageSystem sys = StageSystem::from_two_stage(fork);
  ObjectiveCoefficients coeffs = objective_from_instance(fork);
  coeffs.beta[0]["a"] = Rational(-1, 2);
  CHECK_THROWS_AS(build_aux_graph(sys, coeffs, Rational(1, 5)), std::invalid_argument);
}

TEST_CASE("full pipeline on the fork instance") {
  const TwoStageInstance fork = testsupport::star_fork_instance(DiffMode::Abs);
  const StageSystem sys = StageSystem::from_two_stage(fork);
  const PipelineResult pr = run_pipeline(sys, objective_from_instance(fork));

  CHECK(pr.lifted.objective == 0);
  CHECK(pr.dual_obj == 3);  // nu(stage0) + nu(S1) + nu(S2), zero eps part
  CHECK(pr.flow_value == 30);
  CHECK(pr.scale == 10);

  CHECK(pr.lifted.y[0].at("a") == 1);
  CHECK(pr.lifted.y[0].at("b") == 0);
  CHECK(pr.lifted.y[0].at("c") == 0);
  CHECK(pr.lifted.y[1].at("a") == 1);
  CHECK(pr.lifted.y[1].at("b") == 0);
  CHECK(pr.lifted.y[2].at("a") == 1);
  CHECK(pr.lifted.y[2].at("c") == 0);
}

TEST_CASE("single-edge system: canonical cut picks one endpoint") {
  const BipartiteGraph edge = bg({"a"}, {"b"}, {{"a", "b"}});
  const StageSystem sys = StageSystem::single(edge);
  ObjectiveCoefficients coeffs;
  coeffs.alpha.resize(1);
  const PipelineResult pr = run_pipeline(sys, coeffs);
  CHECK(pr.lifted.y[0].total() == 1);
  // the canonical (residual-reachable) cut is {s}: the Left endpoint is taken
  CHECK(pr.lifted.y[0].at("a") == 1);
  CHECK(pr.lifted.y[0].at("b") == 0);
}

TEST_CASE("cut with source side {s} reads off as all-ones on the Left") {
  const TwoStageInstance fork = testsupport::star_fork_instance(DiffMode::Abs);
  const StageSystem sys = StageSystem::from_two_stage(fork);
  const ObjectiveCoefficients coeffs = objective_from_instance(fork);
  const AuxGraph aux = build_aux_graph(sys, coeffs, epsilon(coeffs));

  CutCertificate cut;
  cut.in_source_side.assign(aux.net.node_count, 0);
  cut.in_source_side[aux.net.source] = 1;
  cut.source_side_count = 1;
  cut.value = 3 * aux.scale;  // the three source arcs

  const DualSolution dual = cut_to_dual(aux, cut, sys);
  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (const auto& name : g.names()) {
      if (g.side(name) == Side::Left) {
        CHECK(dual.y[p].at(name) == 1);
      } else {
        CHECK(dual.y[p].at(name) == 0);
      }
    }
  }
  for (const auto& m : dual.delta) {
    for (const auto& [_, v] : m) CHECK(v == 0);
  }
  for (const auto& m : dual.d) {
    for (const auto& [_, v] : m) CHECK(v == 0);
  }
}

TEST_CASE("canonical cut never crosses a covering arc") {
  const TwoStageInstance fork = testsupport::star_fork_instance(DiffMode::Abs);
  const StageSystem sys = StageSystem::from_two_stage(fork);
  const ObjectiveCoefficients coeffs = objective_from_instance(fork);
  const AuxGraph aux = build_aux_graph(sys, coeffs, epsilon(coeffs));
  const MaxFlowResult mf = max_flow(aux.net);
  const CutCertificate cut = min_cut(aux.net, mf);
  for (const Arc& arc : aux.net.arcs) {
    if (arc.kind == ArcKind::EdgeArc) {
      const bool crossing = cut.in_source_side[arc.tail] && !cut.in_source_side[arc.head];
      CHECK_FALSE(crossing);
    }
  }
}

TEST_CASE("normalize_dual is the identity on cut extractions") {
  const TwoStageInstance fork = testsupport::star_fork_instance(DiffMode::Abs);
  const StageSystem sys = StageSystem::from_two_stage(fork);
  const ObjectiveCoefficients coeffs = objective_from_instance(fork);
  const AuxGraph aux = build_aux_graph(sys, coeffs, epsilon(coeffs));
  const MaxFlowResult mf = max_flow(aux.net);
  const CutCertificate cut = min_cut(aux.net, mf);
  const DualSolution dual = cut_to_dual(aux, cut, sys);

  const DualSolution repaired = normalize_dual(dual, sys);
  CHECK(repaired.y == dual.y);
  CHECK(repaired.delta == dual.delta);
  CHECK(repaired.d == dual.d);
  CHECK(repaired.gamma == dual.gamma);
  CHECK(dual_objective(repaired, sys, coeffs, epsilon(coeffs)) ==
        dual_objective(dual, sys, coeffs, epsilon(coeffs)));
}

TEST_CASE("normalize_dual lowers a slack potential to its target") {
  const BipartiteGraph edge = bg({"a"}, {"b"}, {{"a", "b"}});
  const StageSystem sys = StageSystem::single(edge);

  DualSolution dual;
  dual.y.resize(1);
  dual.gamma.resize(1);
  dual.y[0].values = {{"a", 0}, {"b", 2}};
  dual.gamma[0] = {{"a", 2}, {"b", 2}};
  REQUIRE(dual_feasible(dual, sys));
  CHECK_FALSE(dual_normalized(dual, sys));

  const DualSolution repaired = normalize_dual(dual, sys);
  CHECK(repaired.gamma[0].at("a") == 1);  // lowered to the Left target
  CHECK(repaired.gamma[0].at("b") == 2);  // Right potential already equals y
  CHECK(dual_feasible(repaired, sys));
  CHECK(dual_normalized(repaired, sys));

  // gamma moves leave the objective untouched
  ObjectiveCoefficients coeffs;
  coeffs.alpha.resize(1);
  CHECK(dual_objective(repaired, sys, coeffs, epsilon(coeffs)) ==
        dual_objective(dual, sys, coeffs, epsilon(coeffs)));
}

TEST_CASE("normalize_dual lowers chained tight potentials together") {
  // Two parts sharing the isolated Left vertex a; the delta constraint
  // gamma^0 - gamma^1 + delta >= 0 is tight, so both potentials must move.
  TwoStageInstance inst;
  inst.stage0 = BipartiteGraph({{"a", Side::Left}}, {});
  inst.scenarios.push_back({"S1", Rational(1), BipartiteGraph({{"a", Side::Left}}, {})});
  inst.lambda = {{"a", 1}};
  inst.mode = DiffMode::Abs;
  const StageSystem sys = StageSystem::from_two_stage(inst);

  DualSolution dual;
  dual.y.resize(2);
  dual.gamma.resize(2);
  dual.delta.resize(1);
  dual.d.resize(1);
  dual.y[0].values = {{"a", 0}};
  dual.y[1].values = {{"a", 0}};
  dual.gamma[0] = {{"a", 2}};
  dual.gamma[1] = {{"a", 2}};
  dual.delta[0] = {{"a", 0}};  // gamma^0 - gamma^1 + delta = 0, tight
  dual.d[0] = {{"a", 0}};
  REQUIRE(dual_feasible(dual, sys));

  const DualSolution repaired = normalize_dual(dual, sys);
  CHECK(repaired.gamma[0].at("a") == 1);
  CHECK(repaired.gamma[1].at("a") == 1);
  CHECK(dual_feasible(repaired, sys));
  CHECK(dual_normalized(repaired, sys));
}

TEST_CASE("lift asserts the exact allocation sums") {
  const TwoStageInstance fork = testsupport::star_fork_instance(DiffMode::Abs);
  const StageSystem sys = StageSystem::from_two_stage(fork);
  const ObjectiveCoefficients coeffs = objective_from_instance(fork);

  DualSolution bogus;
  bogus.y.resize(3);
  bogus.gamma.resize(3);
  bogus.delta.resize(2);
  bogus.d.resize(2);
  for (int p = 0; p < 3; ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (const auto& name : g.names()) {
      bogus.y[p].values[name] = 1;  // sums exceed nu
      bogus.gamma[p][name] = g.side(name) == Side::Left ? 0 : 1;
    }
  }
  for (int l = 0; l < 2; ++l) {
    for (const auto& name : sys.links[l].shared) {
      bogus.delta[l][name] = 1;
      bogus.d[l][name] = 1;
    }
  }
  CHECK_THROWS_AS(lift_solution(bogus, sys, coeffs), InternalError);
}

TEST_CASE("degenerate systems skip the flow") {
  TwoStageInstance inst;
  inst.stage0 = BipartiteGraph({{"a", Side::Left}, {"b", Side::Right}}, {});
  inst.scenarios.push_back(
      {"S1", Rational(1), BipartiteGraph({{"a", Side::Left}}, {})});
  inst.lambda = {{"a", 1}, {"b", 1}};
  inst.mode = DiffMode::Abs;
  const StageSystem sys = StageSystem::from_two_stage(inst);
  const PipelineResult pr = run_pipeline(sys, objective_from_instance(inst));
  CHECK(pr.degenerate);
  CHECK(pr.lifted.objective == 0);
  CHECK(pr.lifted.y[0].total() == 0);
  CHECK(pr.lifted.y[1].total() == 0);
}

TEST_CASE("dual feasibility checker flags violations") {
  const BipartiteGraph edge = bg({"a"}, {"b"}, {{"a", "b"}});
  const StageSystem sys = StageSystem::single(edge);
  DualSolution dual;
  dual.y.resize(1);
  dual.gamma.resize(1);
  dual.y[0].values = {{"a", 0}, {"b", 0}};
  dual.gamma[0] = {{"a", 1}, {"b", 0}};  // edge constraint: gamma_b >= gamma_a fails
  std::vector<std::string> why;
  CHECK_FALSE(dual_feasible(dual, sys, &why));
  CHECK_FALSE(why.empty());
}
