#include "coreflow/solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "coreflow/errors.hpp"

namespace coreflow {

namespace {

Rational map_at(const std::map<std::string, Rational>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? Rational(0) : it->second;
}

SolveDiagnostics diagnostics_of(const PipelineResult& pr, const StageSystem& sys) {
  SolveDiagnostics diag;
  diag.eps = pr.eps;
  diag.scale = pr.scale;
  diag.flow_value = pr.flow_value;
  diag.dual_objective = pr.dual_obj;
  diag.nodes = pr.nodes;
  diag.arcs = pr.arcs;
  diag.cut_source_nodes = pr.cut_source_nodes;
  diag.cut_arcs = pr.cut_arcs;
  diag.degenerate = pr.degenerate;
  for (int p = 0; p < sys.part_count(); ++p) diag.nu[sys.labels[p]] = pr.nu[p];
  return diag;
}

SolveResult package(const PipelineResult& pr, const StageSystem& sys, DiffMode mode) {
  SolveResult result;
  result.labels = sys.labels;
  result.allocations = pr.lifted.y;
  result.delta = pr.lifted.delta;
  result.d = pr.lifted.d;
  result.objective = pr.lifted.objective;
  result.mode = mode;
  result.diag = diagnostics_of(pr, sys);

  for (int p = 0; p < sys.part_count(); ++p) {
    if (!result.allocations[p].all_zero_or_one() || !is_core(sys.parts[p], result.allocations[p])) {
      throw InternalError("solver produced a non-core allocation for " + sys.labels[p]);
    }
  }
  return result;
}

}  // namespace

SolveResult solve_two_stage(const TwoStageInstance& inst, std::string* dot_dump) {
  require_valid(inst);
  const StageSystem sys = StageSystem::from_two_stage(inst);
  const PipelineResult pr = run_pipeline(sys, objective_from_instance(inst), dot_dump);
  return package(pr, sys, inst.mode);
}

SolveResult solve_multistage(const MultistageInstance& inst, std::string* dot_dump) {
  require_valid(inst);
  if (inst.stages.size() < 2) throw ValidationError({"fewer than 2 stages"});
  const StageSystem sys = StageSystem::from_multistage(inst);
  const PipelineResult pr = run_pipeline(sys, objective_from_instance(inst), dot_dump);
  return package(pr, sys, inst.mode);
}

namespace {

MultistageInstance mvc_instance(const std::vector<BipartiteGraph>& stages) {
  MultistageInstance inst;
  inst.stages = stages;
  inst.mode = DiffMode::Abs;
  for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
    std::map<std::string, Rational> lam;
    for (const auto& name : stages[i].names()) {
      if (stages[i + 1].has_vertex(name)) lam[name] = 1;
    }
    inst.lambda.push_back(std::move(lam));
  }
  return inst;
}

long long to_int_cost(const Rational& value) {
  if (!is_integer(value)) {
    throw InternalError("unit-weight cover cost is not an integer");
  }
  return static_cast<long long>(numerator(value));
}

}  // namespace

MvcResult solve_mvc(const std::vector<BipartiteGraph>& stages) {
  const SolveResult sr = solve_multistage(mvc_instance(stages));
  MvcResult result;
  for (const Allocation& alloc : sr.allocations) {
    std::vector<std::string> cover;
    for (const auto& [name, value] : alloc.values) {
      if (value == 1) cover.push_back(name);
    }
    result.covers.push_back(std::move(cover));
  }
  result.cost = to_int_cost(sr.objective);
  return result;
}

// ---------------------------------------------------------------------------
// Brute-force oracles. These share nothing with the flow pipeline: cover
// sizes come from scanning all vertex subsets, and the optimum from explicit
// enumeration over minimum-cover lists.

namespace {

struct CoverList {
  int n = 0;
  int tau = 0;
  std::vector<std::uint32_t> masks;  // every minimum cover, ascending
};

CoverList enumerate_min_covers(const BipartiteGraph& g, const char* guard_what, int guard_bits) {
  const int n = g.vertex_count();
  if (n > guard_bits) {
    throw GuardError(std::string(guard_what) + " has " + std::to_string(n) +
                     " vertices, oracle guard is " + std::to_string(guard_bits));
  }
  std::vector<std::uint32_t> edge_masks;
  for (const auto& [l, r] : g.edges()) {
    edge_masks.push_back((1u << l) | (1u << r));
  }
  auto covers_all = [&](std::uint32_t mask) {
    for (std::uint32_t em : edge_masks) {
      if (!(mask & em)) return false;
    }
    return true;
  };

  CoverList out;
  out.n = n;
  out.tau = n + 1;
  const std::uint32_t total = n >= 32 ? 0 : (1u << n);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (covers_all(mask)) out.tau = std::min(out.tau, std::popcount(mask));
  }
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (std::popcount(mask) == out.tau && covers_all(mask)) out.masks.push_back(mask);
  }
  return out;
}

Allocation allocation_of_mask(const BipartiteGraph& g, std::uint32_t mask) {
  Allocation y;
  for (int v = 0; v < g.vertex_count(); ++v) {
    y.values[g.name(v)] = (mask >> v & 1) ? 1 : 0;
  }
  return y;
}

// Transition cost between the 0/1 choices of two stages, over their shared
// vertices, by difference mode.
struct SharedCost {
  struct Entry {
    int bit_a;
    int bit_b;
    Rational weight;
  };
  std::vector<Entry> entries;
  DiffMode mode;

  Rational eval(std::uint32_t mask_a, std::uint32_t mask_b) const {
    Rational total = 0;
    for (const Entry& e : entries) {
      const bool a = mask_a >> e.bit_a & 1;
      const bool b = mask_b >> e.bit_b & 1;
      const bool drop = a && !b;
      const bool rise = !a && b;
      switch (mode) {
        case DiffMode::Abs:
          if (drop || rise) total += e.weight;
          break;
        case DiffMode::Pos:
          if (drop) total += e.weight;
          break;
        case DiffMode::Neg:
          if (rise) total += e.weight;
          break;
      }
    }
    return total;
  }
};

SharedCost shared_cost(const BipartiteGraph& a, const BipartiteGraph& b,
                       const std::map<std::string, Rational>& weights, DiffMode mode) {
  SharedCost cost;
  cost.mode = mode;
  for (int v = 0; v < a.vertex_count(); ++v) {
    const int w = b.index_of(a.name(v));
    if (w >= 0) cost.entries.push_back({v, w, map_at(weights, a.name(v))});
  }
  return cost;
}

void fill_diffs(const BipartiteGraph& a, const BipartiteGraph& b, std::uint32_t mask_a,
                std::uint32_t mask_b, std::map<std::string, Rational>& delta,
                std::map<std::string, Rational>& d) {
  for (int v = 0; v < a.vertex_count(); ++v) {
    const int w = b.index_of(a.name(v));
    if (w < 0) continue;
    const int ya = mask_a >> v & 1;
    const int yb = mask_b >> w & 1;
    delta[a.name(v)] = std::max(ya - yb, 0);
    d[a.name(v)] = std::max(yb - ya, 0);
  }
}

}  // namespace

SolveResult brute_force_two_stage(const TwoStageInstance& inst) {
  require_valid(inst);
  if (inst.stage0.vertex_count() > 16) {
    throw GuardError("first-stage graph has " + std::to_string(inst.stage0.vertex_count()) +
                     " vertices, oracle guard is 16");
  }

  const CoverList covers0 = enumerate_min_covers(inst.stage0, "first-stage graph", 16);
  struct ScenarioData {
    CoverList covers;
    SharedCost cost;
  };
  std::vector<ScenarioData> scenario_data;
  for (const Scenario& s : inst.scenarios) {
    std::map<std::string, Rational> weights;
    for (const auto& name : inst.stage0.names()) {
      if (s.graph.has_vertex(name)) weights[name] = s.prob * map_at(inst.lambda, name);
    }
    scenario_data.push_back({enumerate_min_covers(s.graph, "scenario graph", 20),
                             shared_cost(inst.stage0, s.graph, weights, inst.mode)});
  }

  Rational best_val;
  std::uint32_t best_mask = 0;
  std::vector<std::uint32_t> best_inner;
  bool have_best = false;
  for (std::uint32_t y : covers0.masks) {
    Rational val = 0;
    std::vector<std::uint32_t> inner;
    for (const ScenarioData& sd : scenario_data) {
      Rational best_inner_val;
      std::uint32_t best_inner_mask = 0;
      bool have_inner = false;
      for (std::uint32_t c : sd.covers.masks) {
        const Rational v = sd.cost.eval(y, c);
        if (!have_inner || v < best_inner_val) {
          have_inner = true;
          best_inner_val = v;
          best_inner_mask = c;
        }
      }
      val += have_inner ? best_inner_val : Rational(0);
      inner.push_back(best_inner_mask);
    }
    if (!have_best || val < best_val) {
      have_best = true;
      best_val = val;
      best_mask = y;
      best_inner = std::move(inner);
    }
  }
  if (!have_best) throw InternalError("no minimum cover candidates enumerated");

  SolveResult result;
  result.mode = inst.mode;
  result.objective = best_val;
  result.labels.push_back("stage0");
  result.allocations.push_back(allocation_of_mask(inst.stage0, best_mask));
  result.diag.nu["stage0"] = covers0.tau;
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    result.labels.push_back(inst.scenarios[s].name);
    result.allocations.push_back(allocation_of_mask(inst.scenarios[s].graph, best_inner[s]));
    result.diag.nu[inst.scenarios[s].name] = scenario_data[s].covers.tau;
    std::map<std::string, Rational> delta, d;
    fill_diffs(inst.stage0, inst.scenarios[s].graph, best_mask, best_inner[s], delta, d);
    result.delta.push_back(std::move(delta));
    result.d.push_back(std::move(d));
  }
  return result;
}

SolveResult brute_force_multistage(const MultistageInstance& inst) {
  require_valid(inst);

  std::vector<CoverList> covers;
  double product = 1;
  for (const BipartiteGraph& g : inst.stages) {
    covers.push_back(enumerate_min_covers(g, "stage graph", 20));
    product *= static_cast<double>(covers.back().masks.size());
    if (product > 1e6) {
      throw GuardError("product of per-stage minimum-cover counts exceeds 1e6");
    }
  }

  const int k = static_cast<int>(inst.stages.size());
  std::vector<SharedCost> transition;
  for (int i = 0; i + 1 < k; ++i) {
    transition.push_back(
        shared_cost(inst.stages[i], inst.stages[i + 1], inst.lambda[i], inst.mode));
  }

  // Forward DP over per-stage minimum-cover lists.
  std::vector<std::vector<Rational>> dp(k);
  std::vector<std::vector<int>> parent(k);
  dp[0].assign(covers[0].masks.size(), Rational(0));
  parent[0].assign(covers[0].masks.size(), -1);
  for (int i = 1; i < k; ++i) {
    dp[i].resize(covers[i].masks.size());
    parent[i].assign(covers[i].masks.size(), -1);
    for (std::size_t j = 0; j < covers[i].masks.size(); ++j) {
      bool have = false;
      for (std::size_t pj = 0; pj < covers[i - 1].masks.size(); ++pj) {
        const Rational cand =
            dp[i - 1][pj] + transition[i - 1].eval(covers[i - 1].masks[pj], covers[i].masks[j]);
        if (!have || cand < dp[i][j]) {
          have = true;
          dp[i][j] = cand;
          parent[i][j] = static_cast<int>(pj);
        }
      }
    }
  }

  int best_last = 0;
  for (std::size_t j = 1; j < dp[k - 1].size(); ++j) {
    if (dp[k - 1][j] < dp[k - 1][best_last]) best_last = static_cast<int>(j);
  }
  std::vector<int> choice(k);
  choice[k - 1] = best_last;
  for (int i = k - 1; i > 0; --i) choice[i - 1] = parent[i][choice[i]];

  SolveResult result;
  result.mode = inst.mode;
  result.objective = dp[k - 1][best_last];
  for (int i = 0; i < k; ++i) {
    result.labels.push_back("stage" + std::to_string(i + 1));
    result.allocations.push_back(allocation_of_mask(inst.stages[i], covers[i].masks[choice[i]]));
    result.diag.nu[result.labels.back()] = covers[i].tau;
  }
  for (int i = 0; i + 1 < k; ++i) {
    std::map<std::string, Rational> delta, d;
    fill_diffs(inst.stages[i], inst.stages[i + 1], covers[i].masks[choice[i]],
               covers[i + 1].masks[choice[i + 1]], delta, d);
    result.delta.push_back(std::move(delta));
    result.d.push_back(std::move(d));
  }
  return result;
}

long long brute_force_mvc(const std::vector<BipartiteGraph>& stages) {
  return to_int_cost(brute_force_multistage(mvc_instance(stages)).objective);
}

Rational evaluate_first_stage(const Allocation& y, const TwoStageInstance& inst) {
  require_valid(inst);
  if (!y.all_zero_or_one()) {
    throw std::invalid_argument("evaluate_first_stage requires an integral allocation");
  }
  if (!is_core(inst.stage0, y)) {
    throw std::invalid_argument("allocation is not a core element of the first-stage graph");
  }

  Rational total = 0;
  for (const Scenario& s : inst.scenarios) {
    // Linearize the mode cost over the scenario's core: for integral y and
    // y^S <= 1, [y_v - y^S_v]^+ = y_v (1 - y^S_v) and [y^S_v - y_v]^+ =
    // (1 - y_v) y^S_v, so the inner problem is a weighted minimum-cover
    // solve plus a constant.
    std::map<std::string, Rational> alpha;
    Rational constant = 0;
    for (const auto& name : inst.stage0.names()) {
      if (!s.graph.has_vertex(name)) continue;
      const Rational lam = map_at(inst.lambda, name);
      const bool held = y.at(name) == 1;
      const bool charge_drop = inst.mode != DiffMode::Neg;
      const bool charge_rise = inst.mode != DiffMode::Pos;
      if (held && charge_drop) {
        constant += lam;
        alpha[name] -= lam;
      }
      if (!held && charge_rise) {
        alpha[name] += lam;
      }
    }
    const Allocation response = weighted_min_vertex_cover(s.graph, alpha);
    Rational inner = constant;
    for (const auto& [name, a] : alpha) inner += a * response.at(name);
    total += s.prob * inner;
  }
  return total;
}

}  // namespace coreflow
