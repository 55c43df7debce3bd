#pragma once

#include <map>
#include <string>
#include <vector>

#include "coreflow/graph.hpp"
#include "coreflow/instance.hpp"
#include "coreflow/rational.hpp"
#include "coreflow/reduce.hpp"

namespace coreflow {

struct SolveDiagnostics {
  Rational eps;
  BigInt scale = 1;
  BigInt flow_value = 0;
  Rational dual_objective;
  std::map<std::string, int> nu;  // label -> matching number
  int nodes = 0;
  int arcs = 0;
  int cut_source_nodes = 0;
  int cut_arcs = 0;
  bool degenerate = false;
};

// An optimal integral solution: 0/1 core element per stage/scenario plus the
// difference variables realizing the objective.
struct SolveResult {
  std::vector<std::string> labels;      // part labels, index 0 = first stage
  std::vector<Allocation> allocations;  // per part, all values exactly 0/1
  std::vector<std::map<std::string, Rational>> delta;  // per link
  std::vector<std::map<std::string, Rational>> d;
  Rational objective;
  DiffMode mode = DiffMode::Abs;
  SolveDiagnostics diag;

  const Allocation& first_stage() const { return allocations.front(); }
};

// Optimal integral solution through the flow reduction. Validation failures
// raise ValidationError; dot_dump, when given, receives the auxiliary
// network rendered as DOT.
SolveResult solve_two_stage(const TwoStageInstance& inst, std::string* dot_dump = nullptr);
SolveResult solve_multistage(const MultistageInstance& inst, std::string* dot_dump = nullptr);

// Multistage vertex cover for stages sharing one bipartition: one minimum
// vertex cover per stage minimizing the total symmetric difference between
// consecutive covers (restricted to shared vertices).
struct MvcResult {
  std::vector<std::vector<std::string>> covers;  // sorted names per stage
  long long cost = 0;
};

MvcResult solve_mvc(const std::vector<BipartiteGraph>& stages);

// Exhaustive oracles, deliberately independent of the flow reduction: they
// recompute cover sizes by scanning all vertex subsets and optimize over
// explicit minimum-cover lists. Guards: |V0| <= 16 for the two-stage oracle,
// product of per-stage cover counts <= 1e6 for the multistage one.
SolveResult brute_force_two_stage(const TwoStageInstance& inst);
SolveResult brute_force_multistage(const MultistageInstance& inst);
long long brute_force_mvc(const std::vector<BipartiteGraph>& stages);

// Expected cost of committing to the integral core element y: per scenario,
// the best-response core element of the scenario graph is found by a weighted
// minimum-cover solve, honoring the instance's difference mode. Throws
// std::invalid_argument unless y is an integral member of core(stage0).
Rational evaluate_first_stage(const Allocation& y, const TwoStageInstance& inst);

}  // namespace coreflow
