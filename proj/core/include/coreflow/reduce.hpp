#pragma once

#include <map>
#include <string>
#include <vector>

#include "coreflow/flow.hpp"
#include "coreflow/graph.hpp"
#include "coreflow/instance.hpp"
#include "coreflow/rational.hpp"

namespace coreflow {

// Unified view of a solve. A system is a list of parts (one bipartite graph
// per stage or scenario) plus directed links between parts whose shared
// vertices are charged for allocation differences. Two-stage instances
// become a hub (part 0 = first stage, one link 0->s per scenario s);
// multistage instances become a chain (link i->i+1). A link (a,b) carges
// delta for [y^a - y^b]^+ and d for [y^b - y^a]^+.
struct StageSystem {
  struct Link {
    int from = 0;
    int to = 0;
    std::vector<std::string> shared;  // sorted names present in both parts
  };

  std::vector<BipartiteGraph> parts;
  std::vector<std::string> labels;        // "stage0", scenario names, "stage1"...
  std::vector<std::string> node_suffix;   // per part, appended to vertex names in dumps
  std::vector<Link> links;

  int part_count() const { return static_cast<int>(parts.size()); }
  int link_count() const { return static_cast<int>(links.size()); }

  static StageSystem from_two_stage(const TwoStageInstance& inst);
  static StageSystem from_multistage(const MultistageInstance& inst);
  static StageSystem single(const BipartiteGraph& g);
};

// Coefficients of the generalized objective
//   sum_p sum_v alpha^p_v y^p_v + sum_links sum_v (beta_v delta_v + b_v d_v).
// alpha may take any sign; beta and b must be nonnegative (negative entries
// make the LP unbounded and are rejected). Maps may be partial; missing
// entries are zero. alpha keys must be vertices of their part, beta/b keys
// shared vertices of their link.
struct ObjectiveCoefficients {
  std::vector<std::map<std::string, Rational>> alpha;  // size = parts
  std::vector<std::map<std::string, Rational>> beta;   // size = links
  std::vector<std::map<std::string, Rational>> b;      // size = links

  // Throws std::invalid_argument on shape/sign/key violations.
  void check(const StageSystem& sys) const;
};

// The perturbation weight: 1 / (1 + sum|alpha| + sum(beta + b)). Strictly
// positive, and small enough that one unit of allocation always outweighs the
// entire secondary objective.
Rational epsilon(const ObjectiveCoefficients& coeffs);

// Instance objective in generalized form: alpha = 0 and, per link/vertex,
// weight w = p_S * lambda_v (two-stage) or lambda^i_v (multistage) split by
// mode: Abs -> beta = b = w; Pos -> beta = w, b = 0; Neg -> beta = 0, b = w.
ObjectiveCoefficients objective_from_instance(const TwoStageInstance& inst);
ObjectiveCoefficients objective_from_instance(const MultistageInstance& inst);

// The auxiliary s-t network. All capacities are scaled by the common
// denominator of the rational capacities (1 + eps*alpha on source/sink arcs,
// eps*beta and eps*b on link arcs), so the flow problem is exactly integral.
// Covering arcs (one per stage edge, Left -> Right) get capacity
// 1 + sum(all finite capacities), which no minimum cut can use.
struct AuxGraph {
  FlowNetwork net;
  BigInt scale;  // D: integer capacity = D * rational capacity

  struct ArcRef {
    int part = -1;  // source/sink/edge arcs
    int link = -1;  // delta/d arcs
    std::string vertex;
  };
  std::vector<ArcRef> refs;               // parallel to net.arcs
  std::vector<std::vector<int>> node_of;  // node_of[part][vertex index]
};

AuxGraph build_aux_graph(const StageSystem& sys, const ObjectiveCoefficients& coeffs,
                         const Rational& eps);

// A feasible point of the flow dual: per-part allocations y and node
// potentials gamma, per-link difference variables delta and d. Cut extraction
// produces 0/1 values; normalize_dual accepts arbitrary rationals.
struct DualSolution {
  std::vector<Allocation> y;
  std::vector<std::map<std::string, Rational>> delta;  // per link, keyed by shared vertex
  std::vector<std::map<std::string, Rational>> d;
  std::vector<std::map<std::string, Rational>> gamma;  // per part, free sign

  bool integral() const;
};

// Reads the integral optimal dual off the canonical minimum cut: gamma = 1 on
// the source side, 0 elsewhere; each capacitated arc's dual variable is 1
// exactly when the arc crosses the cut. The result is feasible and
// normalized by construction (gamma_v + y_v = 1 on Left, y_v = gamma_v on
// Right); violations raise InternalError.
DualSolution cut_to_dual(const AuxGraph& aux, const CutCertificate& cut, const StageSystem& sys);

// Exact feasibility check of the dual constraints (they do not involve the
// objective coefficients). Appends one message per violated constraint.
bool dual_feasible(const DualSolution& dual, const StageSystem& sys,
                   std::vector<std::string>* why = nullptr);

bool dual_normalized(const DualSolution& dual, const StageSystem& sys);

// Dual objective sum_p sum_v (1 + eps*alpha) y + sum_links eps*(beta delta + b d).
Rational dual_objective(const DualSolution& dual, const StageSystem& sys,
                        const ObjectiveCoefficients& coeffs, const Rational& eps);

// Repair pass turning any feasible dual into a normalized feasible dual:
// first allocations are lowered onto their binding constraints (this strictly
// improves the objective and never triggers on cut-extracted or optimal
// duals), then potentials are moved toward their targets in coupled steps
// that leave the objective untouched. Idempotent on normalized input.
DualSolution normalize_dual(const DualSolution& dual, const StageSystem& sys);

// The dual restricted to (y, delta, d), checked against the primal-side
// contracts: every y^p is a 0/1 minimum vertex cover indicator with
// sum = nu(part), and delta/d dominate the allocation differences. objective
// is the instance-level cost sum_links (beta*delta + b*d) in unscaled
// coefficients. Internal assertion failures raise InternalError.
struct LiftedSolution {
  std::vector<Allocation> y;
  std::vector<std::map<std::string, Rational>> delta;
  std::vector<std::map<std::string, Rational>> d;
  Rational objective;
};

LiftedSolution lift_solution(const DualSolution& dual, const StageSystem& sys,
                             const ObjectiveCoefficients& coeffs);

// End-to-end run: objective -> epsilon -> network -> max flow -> canonical
// cut -> integral dual -> lifted solution, with the strong-duality identity
// (dual objective == flow value / D) asserted on every solve. Systems whose
// parts are all edgeless skip the flow and return the all-zero solution.
struct PipelineResult {
  LiftedSolution lifted;
  Rational eps;
  BigInt scale = 1;
  BigInt flow_value = 0;
  Rational dual_obj;
  std::vector<int> nu;  // per part
  int nodes = 0;
  int arcs = 0;
  int cut_source_nodes = 0;
  int cut_arcs = 0;
  bool degenerate = false;  // all parts edgeless; flow skipped
};

PipelineResult run_pipeline(const StageSystem& sys, const ObjectiveCoefficients& coeffs,
                            std::string* dot_dump = nullptr);

}  // namespace coreflow
