#include "coreflow/reduce.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "coreflow/errors.hpp"

namespace coreflow {

namespace {

std::vector<std::string> shared_names(const BipartiteGraph& a, const BipartiteGraph& b) {
  std::vector<std::string> out;
  for (const auto& name : a.names()) {
    if (b.has_vertex(name)) out.push_back(name);
  }
  return out;
}

Rational map_at(const std::map<std::string, Rational>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? Rational(0) : it->second;
}

}  // namespace

StageSystem StageSystem::from_two_stage(const TwoStageInstance& inst) {
  StageSystem sys;
  sys.parts.push_back(inst.stage0);
  sys.labels.push_back("stage0");
  sys.node_suffix.push_back("");
  for (const Scenario& s : inst.scenarios) {
    sys.parts.push_back(s.graph);
    sys.labels.push_back(s.name);
    sys.node_suffix.push_back("^{" + s.name + "}");
    sys.links.push_back(
        {0, static_cast<int>(sys.parts.size()) - 1, shared_names(inst.stage0, s.graph)});
  }
  return sys;
}

StageSystem StageSystem::from_multistage(const MultistageInstance& inst) {
  StageSystem sys;
  for (std::size_t i = 0; i < inst.stages.size(); ++i) {
    sys.parts.push_back(inst.stages[i]);
    sys.labels.push_back("stage" + std::to_string(i + 1));
    sys.node_suffix.push_back("^{" + std::to_string(i + 1) + "}");
  }
  for (std::size_t i = 0; i + 1 < inst.stages.size(); ++i) {
    sys.links.push_back({static_cast<int>(i), static_cast<int>(i) + 1,
                         shared_names(inst.stages[i], inst.stages[i + 1])});
  }
  return sys;
}

StageSystem StageSystem::single(const BipartiteGraph& g) {
  StageSystem sys;
  sys.parts.push_back(g);
  sys.labels.push_back("stage0");
  sys.node_suffix.push_back("");
  return sys;
}

void ObjectiveCoefficients::check(const StageSystem& sys) const {
  if (static_cast<int>(alpha.size()) != sys.part_count()) {
    throw std::invalid_argument("alpha: expected one map per part");
  }
  if (static_cast<int>(beta.size()) != sys.link_count() ||
      static_cast<int>(b.size()) != sys.link_count()) {
    throw std::invalid_argument("beta/b: expected one map per link");
  }
  for (int p = 0; p < sys.part_count(); ++p) {
    for (const auto& [name, _] : alpha[p]) {
      if (!sys.parts[p].has_vertex(name)) {
        throw std::invalid_argument("alpha key " + name + " is not a vertex of part " +
                                    sys.labels[p]);
      }
    }
  }
  for (int l = 0; l < sys.link_count(); ++l) {
    for (const auto* m : {&beta[l], &b[l]}) {
      for (const auto& [name, value] : *m) {
        if (!std::binary_search(sys.links[l].shared.begin(), sys.links[l].shared.end(), name)) {
          throw std::invalid_argument("beta/b key " + name + " is not shared on its link");
        }
        if (value < 0) {
          throw std::invalid_argument("beta/b at " + name +
                                      " is negative; that direction is unbounded");
        }
      }
    }
  }
}

Rational epsilon(const ObjectiveCoefficients& coeffs) {
  Rational total = 1;
  for (const auto& m : coeffs.alpha) {
    for (const auto& [_, v] : m) total += abs(v);
  }
  for (const auto* block : {&coeffs.beta, &coeffs.b}) {
    for (const auto& m : *block) {
      for (const auto& [_, v] : m) total += v;
    }
  }
  return 1 / total;
}

namespace {

ObjectiveCoefficients mode_split(const StageSystem& sys, DiffMode mode,
                                 const std::vector<std::map<std::string, Rational>>& weights) {
  ObjectiveCoefficients coeffs;
  coeffs.alpha.resize(sys.part_count());
  coeffs.beta.resize(sys.link_count());
  coeffs.b.resize(sys.link_count());
  for (int l = 0; l < sys.link_count(); ++l) {
    for (const auto& name : sys.links[l].shared) {
      const Rational w = map_at(weights[l], name);
      coeffs.beta[l][name] = (mode == DiffMode::Neg) ? Rational(0) : w;
      coeffs.b[l][name] = (mode == DiffMode::Pos) ? Rational(0) : w;
    }
  }
  return coeffs;
}

}  // namespace

ObjectiveCoefficients objective_from_instance(const TwoStageInstance& inst) {
  StageSystem sys = StageSystem::from_two_stage(inst);
  std::vector<std::map<std::string, Rational>> weights(sys.link_count());
  for (int l = 0; l < sys.link_count(); ++l) {
    const Rational p = inst.scenarios[l].prob;
    for (const auto& name : sys.links[l].shared) {
      weights[l][name] = p * map_at(inst.lambda, name);
    }
  }
  return mode_split(sys, inst.mode, weights);
}

ObjectiveCoefficients objective_from_instance(const MultistageInstance& inst) {
  StageSystem sys = StageSystem::from_multistage(inst);
  std::vector<std::map<std::string, Rational>> weights(sys.link_count());
  for (int l = 0; l < sys.link_count(); ++l) {
    for (const auto& name : sys.links[l].shared) {
      weights[l][name] = map_at(inst.lambda[l], name);
    }
  }
  return mode_split(sys, inst.mode, weights);
}

AuxGraph build_aux_graph(const StageSystem& sys, const ObjectiveCoefficients& coeffs,
                         const Rational& eps) {
  coeffs.check(sys);

  AuxGraph aux;
  FlowNetwork& net = aux.net;
  net.source = 0;
  net.sink = 1;
  net.node_names = {"s", "t"};
  aux.node_of.resize(sys.part_count());
  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    aux.node_of[p].resize(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
      aux.node_of[p][v] = static_cast<int>(net.node_names.size());
      net.node_names.push_back(g.name(v) + sys.node_suffix[p]);
    }
  }
  net.node_count = static_cast<int>(net.node_names.size());

  // Rational capacities in arc insertion order; scaled to integers below.
  std::vector<Rational> caps;
  auto push_arc = [&](int tail, int head, Rational cap, ArcKind kind, AuxGraph::ArcRef ref) {
    if (cap < 0) {
      throw std::invalid_argument("negative capacity on arc at " + ref.vertex);
    }
    net.arcs.push_back({tail, head, BigInt(0), kind});
    caps.push_back(std::move(cap));
    aux.refs.push_back(std::move(ref));
  };

  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (int v = 0; v < g.vertex_count(); ++v) {
      const Rational cap = 1 + eps * map_at(coeffs.alpha[p], g.name(v));
      if (g.side(v) == Side::Left) {
        push_arc(net.source, aux.node_of[p][v], cap, ArcKind::SourceArc, {p, -1, g.name(v)});
      } else {
        push_arc(aux.node_of[p][v], net.sink, cap, ArcKind::SinkArc, {p, -1, g.name(v)});
      }
    }
  }

  // Link arcs between the copies of a shared vertex. On the Left side flow
  // runs b->a for delta and a->b for d; on the Right side the directions
  // swap.
  for (int l = 0; l < sys.link_count(); ++l) {
    const auto& link = sys.links[l];
    const BipartiteGraph& ga = sys.parts[link.from];
    for (const auto& name : link.shared) {
      const int na = aux.node_of[link.from][ga.index_of(name)];
      const int nb = aux.node_of[link.to][sys.parts[link.to].index_of(name)];
      const Rational cap_beta = eps * map_at(coeffs.beta[l], name);
      const Rational cap_b = eps * map_at(coeffs.b[l], name);
      if (ga.side(name) == Side::Left) {
        push_arc(nb, na, cap_beta, ArcKind::DeltaArc, {-1, l, name});
        push_arc(na, nb, cap_b, ArcKind::DArc, {-1, l, name});
      } else {
        push_arc(na, nb, cap_beta, ArcKind::DeltaArc, {-1, l, name});
        push_arc(nb, na, cap_b, ArcKind::DArc, {-1, l, name});
      }
    }
  }

  aux.scale = common_denominator(caps);
  BigInt finite_total = 0;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    net.arcs[i].capacity = numerator(caps[i]) * (aux.scale / denominator(caps[i]));
    finite_total += net.arcs[i].capacity;
  }

  const BigInt unbounded = finite_total + 1;
  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (const auto& [le, ri] : g.edges()) {
      net.arcs.push_back({aux.node_of[p][le], aux.node_of[p][ri], unbounded, ArcKind::EdgeArc});
      aux.refs.push_back({p, -1, g.name(le) + "-" + g.name(ri)});
    }
  }
  net.check();
  return aux;
}

bool DualSolution::integral() const {
  for (const auto& alloc : y) {
    if (!alloc.all_zero_or_one()) return false;
  }
  for (const auto* block : {&delta, &d, &gamma}) {
    for (const auto& m : *block) {
      for (const auto& [_, v] : m) {
        if (!is_zero_or_one(v)) return false;
      }
    }
  }
  return true;
}

DualSolution cut_to_dual(const AuxGraph& aux, const CutCertificate& cut, const StageSystem& sys) {
  DualSolution dual;
  dual.y.resize(sys.part_count());
  dual.gamma.resize(sys.part_count());
  dual.delta.resize(sys.link_count());
  dual.d.resize(sys.link_count());

  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (int v = 0; v < g.vertex_count(); ++v) {
      const bool on_source_side = cut.in_source_side[aux.node_of[p][v]];
      dual.gamma[p][g.name(v)] = on_source_side ? 1 : 0;
    }
  }

  for (std::size_t i = 0; i < aux.net.arcs.size(); ++i) {
    const Arc& arc = aux.net.arcs[i];
    const bool crossing = cut.in_source_side[arc.tail] && !cut.in_source_side[arc.head];
    const AuxGraph::ArcRef& ref = aux.refs[i];
    switch (arc.kind) {
      case ArcKind::SourceArc:
      case ArcKind::SinkArc:
        dual.y[ref.part].values[ref.vertex] = crossing ? 1 : 0;
        break;
      case ArcKind::DeltaArc:
        dual.delta[ref.link][ref.vertex] = crossing ? 1 : 0;
        break;
      case ArcKind::DArc:
        dual.d[ref.link][ref.vertex] = crossing ? 1 : 0;
        break;
      case ArcKind::EdgeArc:
        if (crossing) {
          throw InternalError("canonical cut crosses an uncapacitated covering arc");
        }
        break;
    }
  }

  std::vector<std::string> why;
  if (!dual_feasible(dual, sys, &why)) {
    throw InternalError("cut_to_dual produced an infeasible dual: " + why.front());
  }
  if (!dual_normalized(dual, sys)) {
    throw InternalError("cut_to_dual produced a non-normalized dual");
  }
  return dual;
}

bool dual_feasible(const DualSolution& dual, const StageSystem& sys,
                   std::vector<std::string>* why) {
  bool ok = true;
  auto fail = [&](const std::string& msg) {
    ok = false;
    if (why) why->push_back(msg);
  };

  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (const auto& name : g.names()) {
      const Rational yv = map_at(dual.y[p].values, name);
      const Rational gv = map_at(dual.gamma[p], name);
      if (yv < 0) fail("y < 0 at " + name + " in " + sys.labels[p]);
      if (g.side(name) == Side::Left) {
        if (gv + yv < 1) fail("gamma + y < 1 at " + name + " in " + sys.labels[p]);
      } else {
        if (yv - gv < 0) fail("y - gamma < 0 at " + name + " in " + sys.labels[p]);
      }
    }
    for (const auto& [le, ri] : g.edges()) {
      if (map_at(dual.gamma[p], g.name(ri)) < map_at(dual.gamma[p], g.name(le))) {
        fail("gamma decreases along edge " + g.name(le) + "-" + g.name(ri) + " in " +
             sys.labels[p]);
      }
    }
  }

  for (int l = 0; l < sys.link_count(); ++l) {
    const auto& link = sys.links[l];
    const BipartiteGraph& ga = sys.parts[link.from];
    for (const auto& name : link.shared) {
      const Rational dv = map_at(dual.delta[l], name);
      const Rational ddv = map_at(dual.d[l], name);
      if (dv < 0) fail("delta < 0 at " + name);
      if (ddv < 0) fail("d < 0 at " + name);
      const Rational ga_v = map_at(dual.gamma[link.from], name);
      const Rational gb_v = map_at(dual.gamma[link.to], name);
      if (ga.side(name) == Side::Left) {
        if (ga_v - gb_v + dv < 0) fail("delta constraint violated at " + name + " (Left)");
        if (gb_v - ga_v + ddv < 0) fail("d constraint violated at " + name + " (Left)");
      } else {
        if (gb_v - ga_v + dv < 0) fail("delta constraint violated at " + name + " (Right)");
        if (ga_v - gb_v + ddv < 0) fail("d constraint violated at " + name + " (Right)");
      }
    }
  }
  return ok;
}

bool dual_normalized(const DualSolution& dual, const StageSystem& sys) {
  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (const auto& name : g.names()) {
      const Rational yv = map_at(dual.y[p].values, name);
      const Rational gv = map_at(dual.gamma[p], name);
      if (g.side(name) == Side::Left ? (gv + yv != 1) : (yv != gv)) return false;
    }
  }
  return true;
}

Rational dual_objective(const DualSolution& dual, const StageSystem& sys,
                        const ObjectiveCoefficients& coeffs, const Rational& eps) {
  Rational total = 0;
  for (int p = 0; p < sys.part_count(); ++p) {
    for (const auto& name : sys.parts[p].names()) {
      total += (1 + eps * map_at(coeffs.alpha[p], name)) * map_at(dual.y[p].values, name);
    }
  }
  for (int l = 0; l < sys.link_count(); ++l) {
    for (const auto& name : sys.links[l].shared) {
      total += eps * map_at(coeffs.beta[l], name) * map_at(dual.delta[l], name);
      total += eps * map_at(coeffs.b[l], name) * map_at(dual.d[l], name);
    }
  }
  return total;
}

namespace {

// Coupled potential move used by normalize_dual. All copies of one vertex
// name sit on the same side; the set grows along tight link constraints, and
// every member moves by the same eta (down on Left, up on Right).
struct PotentialRepair {
  const StageSystem& sys;
  DualSolution& dual;
  const std::string& name;
  bool left;

  // Excess of the member over its normalization target; positive means the
  // potential still has to move.
  Rational excess(int p) const {
    const Rational gv = map_at(dual.gamma[p], name);
    const Rational yv = map_at(dual.y[p].values, name);
    return left ? Rational(gv + yv - 1) : Rational(yv - gv);
  }

  bool repair(int p0) {
    bool moved = false;
    while (excess(p0) > 0) {
      std::set<int> members{p0};
      Rational eta;
      while (true) {
        eta = excess(p0);
        for (int p : members) eta = std::min(eta, excess(p));
        bool grew = false;
        for (int l = 0; l < sys.link_count() && !grew; ++l) {
          const auto& link = sys.links[l];
          if (!std::binary_search(link.shared.begin(), link.shared.end(), name)) continue;
          for (auto [inside, outside] : {std::pair{link.from, link.to},
                                         std::pair{link.to, link.from}}) {
            if (!members.count(inside) || members.count(outside)) continue;
            // Moving gamma[inside] strains one of the two constraints of this
            // link; the strained one has +gamma[inside] when lowering (Left)
            // or -gamma[inside] when raising (Right).
            const Rational gi = map_at(dual.gamma[inside], name);
            const Rational go = map_at(dual.gamma[outside], name);
            Rational slack;
            if (left) {
              const bool inside_is_from = inside == link.from;
              const Rational var = inside_is_from ? map_at(dual.delta[l], name)
                                                  : map_at(dual.d[l], name);
              slack = gi - go + var;
            } else {
              const bool inside_is_from = inside == link.from;
              const Rational var = inside_is_from ? map_at(dual.delta[l], name)
                                                  : map_at(dual.d[l], name);
              slack = go - gi + var;
            }
            if (slack < eta) {
              if (slack > 0) {
                eta = slack;
              } else {
                members.insert(outside);
                grew = true;
                break;
              }
            }
          }
        }
        if (!grew) break;
      }
      if (eta <= 0) break;
      for (int p : members) {
        dual.gamma[p][name] += left ? -eta : eta;
      }
      moved = true;
    }
    return moved;
  }
};

}  // namespace

DualSolution normalize_dual(const DualSolution& input, const StageSystem& sys) {
  std::vector<std::string> why;
  if (!dual_feasible(input, sys, &why)) {
    throw std::invalid_argument("normalize_dual: input infeasible: " + why.front());
  }

  DualSolution dual = input;
  // Make every map dense so the repair loops see explicit entries.
  for (int p = 0; p < sys.part_count(); ++p) {
    for (const auto& name : sys.parts[p].names()) {
      dual.y[p].values.try_emplace(name, 0);
      dual.gamma[p].try_emplace(name, 0);
    }
  }

  // Allocations first: lower y onto its binding constraint. y appears in that
  // one constraint only, so this keeps feasibility.
  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (const auto& name : g.names()) {
      Rational& yv = dual.y[p].values[name];
      const Rational gv = dual.gamma[p][name];
      const Rational excess =
          g.side(name) == Side::Left ? Rational(gv + yv - 1) : Rational(yv - gv);
      if (excess > 0 && yv > 0) yv -= std::min(yv, excess);
    }
  }

  // Then potentials, in coupled steps.
  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (const auto& name : g.names()) {
      PotentialRepair repair{sys, dual, name, g.side(name) == Side::Left};
      repair.repair(p);
    }
  }

  if (!dual_feasible(dual, sys, &why)) {
    throw InternalError("normalize_dual broke feasibility: " + why.front());
  }
  if (!dual_normalized(dual, sys)) {
    throw InternalError("normalize_dual failed to reach the normalized form");
  }
  return dual;
}

LiftedSolution lift_solution(const DualSolution& dual, const StageSystem& sys,
                             const ObjectiveCoefficients& coeffs) {
  if (!dual.integral()) {
    throw std::invalid_argument("lift_solution requires an integral dual");
  }
  if (!dual_normalized(dual, sys)) {
    throw std::invalid_argument("lift_solution requires a normalized dual");
  }

  LiftedSolution out;
  out.y = dual.y;
  out.delta = dual.delta;
  out.d = dual.d;

  for (int p = 0; p < sys.part_count(); ++p) {
    const BipartiteGraph& g = sys.parts[p];
    for (const auto& name : g.names()) out.y[p].values.try_emplace(name, 0);

    if (out.y[p].total() != matching_number(g)) {
      throw InternalError("lifted allocation sum differs from nu in part " + sys.labels[p]);
    }
    for (const auto& [le, ri] : g.edges()) {
      if (out.y[p].at(g.name(le)) + out.y[p].at(g.name(ri)) < 1) {
        throw InternalError("lifted allocation is not a vertex cover in part " + sys.labels[p]);
      }
    }
  }

  out.objective = 0;
  for (int l = 0; l < sys.link_count(); ++l) {
    const auto& link = sys.links[l];
    for (const auto& name : link.shared) {
      const Rational ya = out.y[link.from].at(name);
      const Rational yb = out.y[link.to].at(name);
      const Rational dv = map_at(out.delta[l], name);
      const Rational ddv = map_at(out.d[l], name);
      if (dv < ya - yb || ddv < yb - ya) {
        throw InternalError("difference variables do not dominate allocation change at " + name);
      }
      out.objective += map_at(coeffs.beta[l], name) * dv + map_at(coeffs.b[l], name) * ddv;
    }
  }
  return out;
}

PipelineResult run_pipeline(const StageSystem& sys, const ObjectiveCoefficients& coeffs,
                            std::string* dot_dump) {
  coeffs.check(sys);

  PipelineResult result;
  result.eps = epsilon(coeffs);
  for (const BipartiteGraph& g : sys.parts) result.nu.push_back(matching_number(g));

  const bool any_edges =
      std::any_of(sys.parts.begin(), sys.parts.end(),
                  [](const BipartiteGraph& g) { return g.edge_count() > 0; });
  if (!any_edges) {
    // Every core is {0}; nothing to route.
    result.degenerate = true;
    result.lifted.y.resize(sys.part_count());
    for (int p = 0; p < sys.part_count(); ++p) {
      for (const auto& name : sys.parts[p].names()) result.lifted.y[p].values[name] = 0;
    }
    result.lifted.delta.resize(sys.link_count());
    result.lifted.d.resize(sys.link_count());
    for (int l = 0; l < sys.link_count(); ++l) {
      for (const auto& name : sys.links[l].shared) {
        result.lifted.delta[l][name] = 0;
        result.lifted.d[l][name] = 0;
      }
    }
    result.lifted.objective = 0;
    return result;
  }

  const AuxGraph aux = build_aux_graph(sys, coeffs, result.eps);
  const MaxFlowResult flow = max_flow(aux.net);
  const CutCertificate cut = min_cut(aux.net, flow);
  if (dot_dump) *dot_dump = to_dot(aux.net, &flow);

  const DualSolution dual = cut_to_dual(aux, cut, sys);
  result.lifted = lift_solution(dual, sys, coeffs);

  result.scale = aux.scale;
  result.flow_value = flow.value;
  result.dual_obj = dual_objective(dual, sys, coeffs, result.eps);
  result.nodes = aux.net.node_count;
  result.arcs = static_cast<int>(aux.net.arcs.size());
  result.cut_source_nodes = cut.source_side_count;
  for (const Arc& a : aux.net.arcs) {
    if (cut.in_source_side[a.tail] && !cut.in_source_side[a.head]) ++result.cut_arcs;
  }

  // Strong duality, exact: the integral dual read off the cut must price the
  // maximum flow to the last bit.
  if (result.dual_obj * aux.scale != Rational(flow.value)) {
    throw InternalError("dual objective does not equal flow value / scale");
  }
  // Cross-check the lifted objective against the flow value: the dual
  // objective decomposes into sum(nu) + eps * (alpha part + lifted objective).
  Rational alpha_part = 0;
  for (int p = 0; p < sys.part_count(); ++p) {
    for (const auto& [name, a] : coeffs.alpha[p]) {
      alpha_part += a * result.lifted.y[p].at(name);
    }
  }
  Rational nu_sum = 0;
  for (int nu : result.nu) nu_sum += nu;
  if (nu_sum + result.eps * (alpha_part + result.lifted.objective) != result.dual_obj) {
    throw InternalError("lifted objective inconsistent with dual objective");
  }
  return result;
}

// Declared in graph.hpp; lives here because it runs the reduction.
Allocation weighted_min_vertex_cover(const BipartiteGraph& g,
                                     const std::map<std::string, Rational>& alpha) {
  StageSystem sys = StageSystem::single(g);
  ObjectiveCoefficients coeffs;
  coeffs.alpha.push_back(alpha);
  const PipelineResult result = run_pipeline(sys, coeffs);
  return result.lifted.y[0];
}

}  // namespace coreflow
