#include "coreflow/graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace coreflow {

BipartiteGraph::BipartiteGraph(const std::vector<std::pair<std::string, Side>>& vertices,
                               const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::pair<std::string, Side>> sorted = vertices;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i].first == sorted[i + 1].first) {
      throw std::invalid_argument("duplicate vertex name: " + sorted[i].first);
    }
  }
  names_.reserve(sorted.size());
  sides_.reserve(sorted.size());
  for (auto& [name, side] : sorted) {
    names_.push_back(std::move(name));
    sides_.push_back(side);
  }

  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    const int ia = index_of(a);
    const int ib = index_of(b);
    if (ia < 0) throw std::invalid_argument("edge endpoint not a vertex: " + a);
    if (ib < 0) throw std::invalid_argument("edge endpoint not a vertex: " + b);
    if (ia == ib) throw std::invalid_argument("self-loop at " + a);
    if (sides_[ia] == sides_[ib]) {
      throw std::invalid_argument("edge " + a + "-" + b + " joins two same-side vertices");
    }
    const int l = sides_[ia] == Side::Left ? ia : ib;
    const int r = sides_[ia] == Side::Left ? ib : ia;
    if (!seen.insert({l, r}).second) {
      throw std::invalid_argument("parallel edge " + a + "-" + b);
    }
  }
  edges_.assign(seen.begin(), seen.end());

  adj_.assign(names_.size(), {});
  for (const auto& [l, r] : edges_) {
    adj_[l].push_back(r);
    adj_[r].push_back(l);
  }
}

Side BipartiteGraph::side(std::string_view name) const {
  const int v = index_of(name);
  if (v < 0) throw std::invalid_argument("unknown vertex: " + std::string(name));
  return sides_[v];
}

int BipartiteGraph::index_of(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return -1;
  return static_cast<int>(it - names_.begin());
}

std::pair<std::string, std::string> BipartiteGraph::edge_names(int e) const {
  return {names_[edges_[e].first], names_[edges_[e].second]};
}

BipartiteGraph BipartiteGraph::induced(const std::vector<std::string>& keep) const {
  std::set<int> kept;
  for (const auto& name : keep) {
    if (int v = index_of(name); v >= 0) kept.insert(v);
  }
  std::vector<std::pair<std::string, Side>> vertices;
  for (int v : kept) vertices.emplace_back(names_[v], sides_[v]);
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [l, r] : edges_) {
    if (kept.count(l) && kept.count(r)) edges.emplace_back(names_[l], names_[r]);
  }
  return BipartiteGraph(vertices, edges);
}

const Rational& Allocation::at(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw std::invalid_argument("allocation has no value for " + name);
  return it->second;
}

Rational Allocation::total() const {
  Rational sum = 0;
  for (const auto& [_, v] : values) sum += v;
  return sum;
}

bool Allocation::all_zero_or_one() const {
  for (const auto& [_, v] : values) {
    if (!is_zero_or_one(v)) return false;
  }
  return true;
}

Allocation Allocation::indicator(const BipartiteGraph& g, const std::vector<std::string>& members) {
  Allocation y;
  for (const auto& name : g.names()) y.values[name] = 0;
  for (const auto& name : members) y.values.at(name) = 1;
  return y;
}

int max_matching_indices(const BipartiteGraph& g, std::vector<int>& match_of) {
  const int n = g.vertex_count();
  match_of.assign(n, -1);
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(n, kInf);
  std::vector<int> lefts;
  for (int v = 0; v < n; ++v) {
    if (g.side(v) == Side::Left) lefts.push_back(v);
  }

  auto bfs = [&]() {
    std::queue<int> q;
    for (int u : lefts) {
      if (match_of[u] == -1) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    bool found_free_right = false;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int r : g.neighbors(u)) {
        const int next = match_of[r];
        if (next == -1) {
          found_free_right = true;
        } else if (dist[next] == kInf) {
          dist[next] = dist[u] + 1;
          q.push(next);
        }
      }
    }
    return found_free_right;
  };

  std::function<bool(int)> dfs = [&](int u) {
    for (int r : g.neighbors(u)) {
      const int next = match_of[r];
      if (next == -1 || (dist[next] == dist[u] + 1 && dfs(next))) {
        match_of[u] = r;
        match_of[r] = u;
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  };

  int size = 0;
  while (bfs()) {
    for (int u : lefts) {
      if (match_of[u] == -1 && dfs(u)) ++size;
    }
  }
  return size;
}

Matching max_matching(const BipartiteGraph& g) {
  std::vector<int> match_of;
  Matching m;
  m.size = max_matching_indices(g, match_of);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.side(v) == Side::Left && match_of[v] != -1) {
      m.edges.emplace_back(g.name(v), g.name(match_of[v]));
    }
  }
  return m;
}

int matching_number(const BipartiteGraph& g) {
  std::vector<int> match_of;
  return max_matching_indices(g, match_of);
}

std::vector<std::string> min_vertex_cover(const BipartiteGraph& g) {
  std::vector<int> match_of;
  max_matching_indices(g, match_of);

  // Koenig: Z = vertices reachable from unmatched Left vertices along
  // alternating paths (non-matching Left->Right, matching Right->Left).
  // Cover = (Left \ Z) union (Right intersect Z).
  const int n = g.vertex_count();
  std::vector<char> in_z(n, 0);
  std::queue<int> q;
  for (int v = 0; v < n; ++v) {
    if (g.side(v) == Side::Left && match_of[v] == -1) {
      in_z[v] = 1;
      q.push(v);
    }
  }
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (g.side(u) == Side::Left) {
      for (int r : g.neighbors(u)) {
        if (match_of[u] != r && !in_z[r]) {
          in_z[r] = 1;
          q.push(r);
        }
      }
    } else if (match_of[u] != -1 && !in_z[match_of[u]]) {
      in_z[match_of[u]] = 1;
      q.push(match_of[u]);
    }
  }

  std::vector<std::string> cover;
  for (int v = 0; v < n; ++v) {
    const bool covered = g.side(v) == Side::Left ? !in_z[v] : bool(in_z[v]);
    if (covered) cover.push_back(g.name(v));
  }
  return cover;
}

bool is_core(const BipartiteGraph& g, const Allocation& y) {
  if (static_cast<int>(y.values.size()) != g.vertex_count()) {
    throw std::invalid_argument("allocation not defined on exactly the graph vertices");
  }
  for (const auto& name : g.names()) {
    if (!y.values.count(name)) {
      throw std::invalid_argument("allocation missing vertex " + name);
    }
  }
  for (const auto& [_, v] : y.values) {
    if (v < 0) return false;
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edge_names(e);
    if (y.at(u) + y.at(v) < 1) return false;
  }
  return y.total() == matching_number(g);
}

}  // namespace coreflow
