#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coreflow/rational.hpp"

namespace coreflow {

enum class Side { Left, Right };

// A bipartite graph with a fixed side label per vertex. Vertices are
// identified by name; iteration order is always the sorted name order, which
// keeps every downstream algorithm deterministic. Immutable once built.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // Throws std::invalid_argument on duplicate vertex names, unknown edge
  // endpoints, self-loops, parallel edges, or an edge joining two vertices on
  // the same side.
  BipartiteGraph(const std::vector<std::pair<std::string, Side>>& vertices,
                 const std::vector<std::pair<std::string, std::string>>& edges);

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int v) const { return names_[v]; }
  Side side(int v) const { return sides_[v]; }
  Side side(std::string_view name) const;
  bool has_vertex(std::string_view name) const { return index_of(name) >= 0; }
  int index_of(std::string_view name) const;  // -1 when absent

  // Edges as index pairs, each oriented (Left endpoint, Right endpoint),
  // sorted lexicographically by names.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::pair<std::string, std::string> edge_names(int e) const;

  const std::vector<int>& neighbors(int v) const { return adj_[v]; }

  // Subgraph induced by the named vertices (names absent from the graph are
  // ignored). Side labels are inherited.
  BipartiteGraph induced(const std::vector<std::string>& keep) const;

  bool operator==(const BipartiteGraph& other) const {
    return names_ == other.names_ && sides_ == other.sides_ && edges_ == other.edges_;
  }

 private:
  std::vector<std::string> names_;  // sorted, unique
  std::vector<Side> sides_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

// An allocation of value to players. For core elements all values lie in
// [0,1]; solver outputs are exactly 0/1.
struct Allocation {
  std::map<std::string, Rational> values;

  const Rational& at(const std::string& name) const;
  Rational total() const;
  bool all_zero_or_one() const;

  // 0/1 indicator of a vertex set.
  static Allocation indicator(const BipartiteGraph& g, const std::vector<std::string>& members);

  bool operator==(const Allocation&) const = default;
};

struct Matching {
  std::vector<std::pair<std::string, std::string>> edges;  // (left name, right name)
  int size = 0;
};

// Maximum-cardinality matching (Hopcroft–Karp). Deterministic: vertices are
// scanned in sorted name order.
Matching max_matching(const BipartiteGraph& g);

// nu(g): the size of a maximum matching.
int matching_number(const BipartiteGraph& g);

// Internal form used by the Koenig extraction and the oracles: match_of[v] is
// the partner index or -1. Returns nu(g).
int max_matching_indices(const BipartiteGraph& g, std::vector<int>& match_of);

// Minimum vertex cover of size nu(g), extracted from a maximum matching via
// alternating reachability from unmatched Left vertices. Sorted by name.
std::vector<std::string> min_vertex_cover(const BipartiteGraph& g);

// Exact test of the core conditions: y >= 0, y_u + y_v >= 1 on every edge,
// and sum(y) = nu(g). Throws std::invalid_argument unless y is defined on
// exactly the vertices of g.
bool is_core(const BipartiteGraph& g, const Allocation& y);

// Among all minimum-cardinality vertex covers of g, one minimizing
// sum_v alpha_v * y_v (alpha may take any sign; missing entries are zero).
// Solved exactly through the flow reduction with an empty scenario set; the
// result is a 0/1 allocation. Defined in reduce.cpp.
Allocation weighted_min_vertex_cover(const BipartiteGraph& g,
                                     const std::map<std::string, Rational>& alpha);

}  // namespace coreflow
