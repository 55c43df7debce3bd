#pragma once

// Shared test machinery: tiny graph builders, exhaustive graph enumeration,
// and brute-force reference implementations that stay independent of the
// library's algorithms (matching by bitmask DP, covers and cuts by subset
// scans).

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "coreflow/flow.hpp"
#include "coreflow/graph.hpp"
#include "coreflow/instance.hpp"

namespace testsupport {

using coreflow::BigInt;
using coreflow::BipartiteGraph;
using coreflow::FlowNetwork;
using coreflow::Side;

// Graph over named vertices: lefts/rights + name-pair edges.
BipartiteGraph bg(const std::vector<std::string>& lefts, const std::vector<std::string>& rights,
                  const std::vector<std::pair<std::string, std::string>>& edges);

// Every bipartite graph with n <= max_n vertices: vertices "v0".."v{n-1}",
// the first l of them Left for every l, every edge subset. Covers all side
// shapes up to renaming.
std::vector<BipartiteGraph> all_bipartite_graphs(int max_n);
void for_each_bipartite_graph(int max_n, const std::function<void(const BipartiteGraph&)>& fn);

// All graphs over a fixed vertex set with the given Left prefix size and
// every edge subset (stage pools for multistage corpora).
std::vector<BipartiteGraph> edge_subset_pool(int n, int left_count);

// Maximum matching by DP over subsets of Right vertices; no augmenting paths
// anywhere near this.
int dp_matching_number(const BipartiteGraph& g);

// Minimum vertex cover size by scanning all vertex subsets.
int scan_cover_number(const BipartiteGraph& g);

// All minimum covers as vertex-index masks, ascending.
std::vector<std::uint32_t> scan_min_covers(const BipartiteGraph& g);

// Minimum s-t cut value by scanning all node subsets containing s, not t.
BigInt scan_min_cut_value(const FlowNetwork& net);

// The running example used across the suites: stage0 is the star a-b, a-c;
// scenario S1 keeps {a,b} with edge ab (prob 1/2), scenario S2 keeps {a,c}
// with edge ac (prob 1/2); unit dissatisfaction everywhere.
coreflow::TwoStageInstance star_fork_instance(coreflow::DiffMode mode);

}  // namespace testsupport
