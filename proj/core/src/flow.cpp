#include "coreflow/flow.hpp"

#include <queue>
#include <sstream>
#include <stdexcept>

#include "coreflow/errors.hpp"

namespace coreflow {

void FlowNetwork::check() const {
  if (node_count < 2) throw std::invalid_argument("network needs at least source and sink");
  if (source == sink) throw std::invalid_argument("source equals sink");
  if (source < 0 || source >= node_count || sink < 0 || sink >= node_count) {
    throw std::invalid_argument("source/sink out of range");
  }
  if (!node_names.empty() && static_cast<int>(node_names.size()) != node_count) {
    throw std::invalid_argument("node_names size mismatch");
  }
  for (const Arc& a : arcs) {
    if (a.tail < 0 || a.tail >= node_count || a.head < 0 || a.head >= node_count) {
      throw std::invalid_argument("arc endpoint out of range");
    }
    if (a.capacity < 0) throw std::invalid_argument("negative arc capacity");
    if (a.head == source) throw std::invalid_argument("arc into the source");
    if (a.tail == sink) throw std::invalid_argument("arc out of the sink");
    if (a.tail == a.head) throw std::invalid_argument("arc loop");
  }
}

namespace {

// Residual edge pair layout: entry 2i is arc i forward, 2i+1 its reverse.
struct Dinic {
  explicit Dinic(const FlowNetwork& net) : net(net), n(net.node_count) {
    residual.reserve(net.arcs.size() * 2);
    head.reserve(net.arcs.size() * 2);
    adj.assign(n, {});
    for (std::size_t i = 0; i < net.arcs.size(); ++i) {
      const Arc& a = net.arcs[i];
      adj[a.tail].push_back(static_cast<int>(2 * i));
      adj[a.head].push_back(static_cast<int>(2 * i + 1));
      residual.push_back(a.capacity);
      residual.push_back(0);
      head.push_back(a.head);
      head.push_back(a.tail);
    }
  }

  bool build_levels() {
    level.assign(n, -1);
    level[net.source] = 0;
    std::queue<int> q;
    q.push(net.source);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int e : adj[u]) {
        if (residual[e] > 0 && level[head[e]] == -1) {
          level[head[e]] = level[u] + 1;
          q.push(head[e]);
        }
      }
    }
    return level[net.sink] != -1;
  }

  BigInt augment(int u, const BigInt& limit) {
    if (u == net.sink) return limit;
    BigInt pushed = 0;
    for (int& idx = iter[u]; idx < static_cast<int>(adj[u].size()); ++idx) {
      const int e = adj[u][idx];
      const int v = head[e];
      if (residual[e] <= 0 || level[v] != level[u] + 1) continue;
      const BigInt room = limit - pushed;
      const BigInt got = augment(v, residual[e] < room ? residual[e] : room);
      if (got > 0) {
        residual[e] -= got;
        residual[e ^ 1] += got;
        pushed += got;
        if (pushed == limit) return pushed;
      } else {
        level[v] = -1;
      }
    }
    return pushed;
  }

  MaxFlowResult run() {
    BigInt total = 0;
    BigInt cap_sum = 0;
    for (const Arc& a : net.arcs) cap_sum += a.capacity;
    while (build_levels()) {
      iter.assign(n, 0);
      total += augment(net.source, cap_sum + 1);
    }
    MaxFlowResult result;
    result.value = total;
    result.flow.reserve(net.arcs.size());
    for (std::size_t i = 0; i < net.arcs.size(); ++i) {
      result.flow.push_back(net.arcs[i].capacity - residual[2 * i]);
    }
    return result;
  }

  const FlowNetwork& net;
  int n;
  std::vector<BigInt> residual;
  std::vector<int> head;
  std::vector<std::vector<int>> adj;
  std::vector<int> level;
  std::vector<int> iter;
};

}  // namespace

MaxFlowResult max_flow(const FlowNetwork& net) {
  net.check();
  return Dinic(net).run();
}

CutCertificate min_cut(const FlowNetwork& net, const MaxFlowResult& result) {
  if (result.flow.size() != net.arcs.size()) {
    throw std::invalid_argument("flow vector does not match network arcs");
  }
  std::vector<BigInt> residual_fwd(net.arcs.size());
  std::vector<std::vector<int>> fwd(net.node_count), bwd(net.node_count);
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    residual_fwd[i] = net.arcs[i].capacity - result.flow[i];
    fwd[net.arcs[i].tail].push_back(static_cast<int>(i));
    bwd[net.arcs[i].head].push_back(static_cast<int>(i));
  }

  CutCertificate cut;
  cut.in_source_side.assign(net.node_count, 0);
  cut.in_source_side[net.source] = 1;
  std::queue<int> q;
  q.push(net.source);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int i : fwd[u]) {  // forward residual
      if (residual_fwd[i] > 0 && !cut.in_source_side[net.arcs[i].head]) {
        cut.in_source_side[net.arcs[i].head] = 1;
        q.push(net.arcs[i].head);
      }
    }
    for (int i : bwd[u]) {  // backward residual (positive flow)
      if (result.flow[i] > 0 && !cut.in_source_side[net.arcs[i].tail]) {
        cut.in_source_side[net.arcs[i].tail] = 1;
        q.push(net.arcs[i].tail);
      }
    }
  }

  if (cut.in_source_side[net.sink]) {
    throw InternalError("min_cut: sink reachable in residual graph; flow not optimal");
  }
  cut.value = 0;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    if (cut.in_source_side[net.arcs[i].tail] && !cut.in_source_side[net.arcs[i].head]) {
      cut.value += net.arcs[i].capacity;
    }
  }
  if (cut.value != result.value) {
    throw InternalError("min_cut: cut capacity differs from flow value");
  }
  for (char c : cut.in_source_side) cut.source_side_count += c;
  return cut;
}

std::string to_dot(const FlowNetwork& net, const MaxFlowResult* flow) {
  std::ostringstream out;
  out << "digraph aux {\n  rankdir=LR;\n";
  for (int v = 0; v < net.node_count; ++v) {
    const std::string label =
        net.node_names.empty() ? "n" + std::to_string(v) : net.node_names[v];
    out << "  n" << v << " [label=\"" << label << "\"];\n";
  }
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const Arc& a = net.arcs[i];
    out << "  n" << a.tail << " -> n" << a.head << " [label=\"";
    if (flow) out << flow->flow[i] << "/";
    out << a.capacity << "\"";
    if (a.kind == ArcKind::EdgeArc) out << " style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace coreflow
