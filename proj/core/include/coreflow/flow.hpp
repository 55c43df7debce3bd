#pragma once

#include <string>
#include <vector>

#include "coreflow/rational.hpp"

namespace coreflow {

// Role of an arc in the auxiliary construction. Source/Sink arcs carry the
// per-vertex allocation duals, Delta/D arcs the stage-difference duals, and
// Edge arcs are the effectively uncapacitated covering arcs.
enum class ArcKind { SourceArc, SinkArc, DeltaArc, DArc, EdgeArc };

struct Arc {
  int tail = 0;
  int head = 0;
  BigInt capacity;  // >= 0, exact integer
  ArcKind kind = ArcKind::EdgeArc;
};

// A directed s-t network with exact integer capacities. Node 0 conventions
// are not imposed; source/sink are explicit. The source has no incoming arcs
// and the sink no outgoing arcs.
struct FlowNetwork {
  int node_count = 0;
  int source = 0;
  int sink = 0;
  std::vector<std::string> node_names;  // size node_count, for DOT dumps
  std::vector<Arc> arcs;

  // Throws std::invalid_argument if structural invariants fail.
  void check() const;
};

struct MaxFlowResult {
  BigInt value;
  std::vector<BigInt> flow;  // per arc, 0 <= flow <= capacity
};

// The canonical minimum cut: source side = nodes reachable from the source in
// the residual graph of a maximum flow. value equals the max-flow value.
struct CutCertificate {
  std::vector<char> in_source_side;  // per node
  BigInt value;
  int source_side_count = 0;
};

// Dinic blocking-flow algorithm over exact big integers. Deterministic: arcs
// are scanned in insertion order, so identical inputs give identical flows.
MaxFlowResult max_flow(const FlowNetwork& net);

// Requires an optimal flow. The returned cut is the canonical one.
CutCertificate min_cut(const FlowNetwork& net, const MaxFlowResult& flow);

// Graphviz rendering of the network (with flow values when given).
std::string to_dot(const FlowNetwork& net, const MaxFlowResult* flow = nullptr);

}  // namespace coreflow
