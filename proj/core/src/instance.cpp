#include "coreflow/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coreflow/errors.hpp"

namespace coreflow {

using nlohmann::json;

std::string to_string(DiffMode mode) {
  switch (mode) {
    case DiffMode::Abs: return "abs";
    case DiffMode::Pos: return "pos";
    case DiffMode::Neg: return "neg";
  }
  throw InternalError("unreachable mode");
}

DiffMode mode_of_string(const std::string& text) {
  if (text == "abs") return DiffMode::Abs;
  if (text == "pos") return DiffMode::Pos;
  if (text == "neg") return DiffMode::Neg;
  throw ParseError("unknown mode \"" + text + "\" (expected abs|pos|neg)");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Collects side disagreements across a sequence of graphs sharing vertex
// names. First sighting of a name fixes its side.
void check_bipartition_agreement(const std::vector<const BipartiteGraph*>& graphs,
                                 std::vector<std::string>& out) {
  std::map<std::string, Side> seen;
  std::set<std::string> reported;
  for (const BipartiteGraph* g : graphs) {
    for (int v = 0; v < g->vertex_count(); ++v) {
      const std::string& name = g->name(v);
      auto [it, inserted] = seen.emplace(name, g->side(v));
      if (!inserted && it->second != g->side(v) && reported.insert(name).second) {
        out.push_back("bipartition mismatch at " + name);
      }
    }
  }
}

void check_lambda(const std::map<std::string, Rational>& lambda,
                  const std::vector<std::string>& allowed_keys, const std::string& where,
                  std::vector<std::string>& out) {
  for (const auto& [name, value] : lambda) {
    if (!std::binary_search(allowed_keys.begin(), allowed_keys.end(), name)) {
      out.push_back(where + " lambda key " + name + " is not an eligible vertex");
    }
    if (value < 0) {
      out.push_back(where + " lambda at " + name + " is negative");
    }
  }
}

std::vector<std::string> sorted_shared_names(const BipartiteGraph& a, const BipartiteGraph& b) {
  std::vector<std::string> shared;
  for (const auto& name : a.names()) {
    if (b.has_vertex(name)) shared.push_back(name);
  }
  return shared;
}

}  // namespace

std::vector<std::string> validate(const TwoStageInstance& inst) {
  std::vector<std::string> out;

  if (inst.scenarios.empty()) {
    out.push_back("scenario list is empty");
  }
  Rational prob_sum = 0;
  std::set<std::string> names;
  for (const Scenario& s : inst.scenarios) {
    prob_sum += s.prob;
    if (s.prob <= 0) {
      out.push_back("probability of scenario " + s.name + " is not positive");
    }
    if (!names.insert(s.name).second) {
      out.push_back("duplicate scenario name " + s.name);
    }
  }
  if (!inst.scenarios.empty() && prob_sum != 1) {
    out.push_back("probabilities sum to " + rat_to_string(prob_sum));
  }

  std::vector<const BipartiteGraph*> graphs{&inst.stage0};
  for (const Scenario& s : inst.scenarios) graphs.push_back(&s.graph);
  check_bipartition_agreement(graphs, out);

  check_lambda(inst.lambda, inst.stage0.names(), "", out);
  return out;
}

std::vector<std::string> validate(const MultistageInstance& inst) {
  std::vector<std::string> out;

  if (inst.stages.size() < 2) {
    out.push_back("fewer than 2 stages");
  }
  if (inst.lambda.size() + 1 != inst.stages.size()) {
    out.push_back("lambda has " + std::to_string(inst.lambda.size()) + " transition maps, expected " +
                  std::to_string(inst.stages.empty() ? 0 : inst.stages.size() - 1));
  }

  std::vector<const BipartiteGraph*> graphs;
  for (const BipartiteGraph& g : inst.stages) graphs.push_back(&g);
  check_bipartition_agreement(graphs, out);

  for (std::size_t i = 0; i + 1 < inst.stages.size() && i < inst.lambda.size(); ++i) {
    const auto shared = sorted_shared_names(inst.stages[i], inst.stages[i + 1]);
    check_lambda(inst.lambda[i], shared, "transition " + std::to_string(i + 1), out);
  }
  return out;
}

void require_valid(const TwoStageInstance& inst) {
  if (auto v = validate(inst); !v.empty()) throw ValidationError(std::move(v));
}

void require_valid(const MultistageInstance& inst) {
  if (auto v = validate(inst); !v.empty()) throw ValidationError(std::move(v));
}

// ---------------------------------------------------------------------------
// SimpleGraph

int SimpleGraph::degree(int v) const {
  int d = 0;
  for (const auto& [a, b] : edges) d += (a == v) + (b == v);
  return d;
}

SimpleGraph parse_edge_list(const std::string& text) {
  std::set<std::string> names;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string u, v, extra;
    if (!(ls >> u)) continue;  // blank
    if (!(ls >> v)) {
      names.insert(u);  // isolated vertex declaration
      continue;
    }
    if (ls >> extra) {
      throw ParseError("line " + std::to_string(line_no) + ": expected \"u v\"");
    }
    if (u == v) throw ParseError("line " + std::to_string(line_no) + ": self-loop at " + u);
    names.insert(u);
    names.insert(v);
    raw_edges.emplace_back(u, v);
  }

  SimpleGraph g;
  g.names.assign(names.begin(), names.end());
  auto index_of = [&](const std::string& name) {
    return static_cast<int>(std::lower_bound(g.names.begin(), g.names.end(), name) -
                            g.names.begin());
  };
  std::set<std::pair<int, int>> edge_set;
  for (const auto& [u, v] : raw_edges) {
    int a = index_of(u), b = index_of(v);
    if (a > b) std::swap(a, b);
    if (!edge_set.insert({a, b}).second) {
      throw ParseError("repeated edge " + u + " " + v);
    }
  }
  g.edges.assign(edge_set.begin(), edge_set.end());
  return g;
}

std::string to_edge_list(const SimpleGraph& g) {
  std::ostringstream out;
  std::vector<char> touched(g.names.size(), 0);
  for (const auto& [a, b] : g.edges) {
    out << g.names[a] << " " << g.names[b] << "\n";
    touched[a] = touched[b] = 1;
  }
  for (std::size_t v = 0; v < g.names.size(); ++v) {
    if (!touched[v]) out << g.names[v] << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Hardness construction

namespace {

constexpr const char* kHub = "alpha";
constexpr const char* kGuard1 = "beta1";
constexpr const char* kGuard2 = "beta2";

std::string copy_name(const std::string& base, int i) {
  return base + "." + std::to_string(i);
}

std::string edge_vertex_name(const SimpleGraph& g, int a, int b) {
  return g.names[a] + "~" + g.names[b];
}

}  // namespace

HardnessInstance build_hardness_instance(const SimpleGraph& base) {
  if (base.edges.empty()) {
    throw std::invalid_argument("hardness construction requires a base graph with an edge");
  }
  for (const auto& name : base.names) {
    if (name.find('.') != std::string::npos || name.find('~') != std::string::npos ||
        name == kHub || name == kGuard1 || name == kGuard2) {
      throw std::invalid_argument("base vertex name \"" + name + "\" collides with reserved names");
    }
  }

  HardnessInstance inst;
  inst.base = base;
  inst.hub_name = kHub;
  inst.guard_names = {kGuard1, kGuard2};

  // Left: all copies plus the hub. Right: one vertex per base edge plus the
  // two guards.
  std::vector<std::pair<std::string, Side>> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int v = 0; v < base.vertex_count(); ++v) {
    const int d = base.degree(v);
    for (int i = 1; i <= d; ++i) vertices.emplace_back(copy_name(base.names[v], i), Side::Left);
  }
  vertices.emplace_back(kHub, Side::Left);
  vertices.emplace_back(kGuard1, Side::Right);
  vertices.emplace_back(kGuard2, Side::Right);
  for (const auto& [a, b] : base.edges) {
    const std::string ev = edge_vertex_name(base, a, b);
    vertices.emplace_back(ev, Side::Right);
    for (int endpoint : {a, b}) {
      const int d = base.degree(endpoint);
      for (int i = 1; i <= d; ++i) edges.emplace_back(ev, copy_name(base.names[endpoint], i));
    }
    edges.emplace_back(kHub, ev);
  }
  edges.emplace_back(kHub, kGuard1);
  edges.emplace_back(kHub, kGuard2);

  inst.stage0 = BipartiteGraph(vertices, edges);
  inst.lambda[kHub] = 1;
  inst.mode = DiffMode::Pos;
  return inst;
}

BipartiteGraph HardnessInstance::scenario_graph(std::uint64_t subset) const {
  std::vector<std::string> keep;
  for (int v = 0; v < base.vertex_count(); ++v) {
    if (subset >> v & 1) {
      const int d = base.degree(v);
      for (int i = 1; i <= d; ++i) keep.push_back(copy_name(base.names[v], i));
    }
  }
  for (const auto& [a, b] : base.edges) keep.push_back(edge_vertex_name(base, a, b));
  keep.push_back(hub_name);
  return stage0.induced(keep);
}

namespace {

class HardnessSampler : public ScenarioSampler {
 public:
  explicit HardnessSampler(const HardnessInstance& inst) : inst_(inst) {}

  BipartiteGraph draw(Xoshiro256& rng) const override {
    std::uint64_t subset = 0;
    for (int v = 0; v < inst_.base.vertex_count(); ++v) {
      subset |= (rng.next() & 1) << v;
    }
    return inst_.scenario_graph(subset);
  }

 private:
  HardnessInstance inst_;
};

}  // namespace

std::unique_ptr<ScenarioSampler> HardnessInstance::sampler() const {
  return std::make_unique<HardnessSampler>(*this);
}

std::vector<SupportPoint> enumerate_support(const HardnessInstance& inst) {
  const int n = inst.base.vertex_count();
  if (n > 20) {
    throw GuardError("enumerate_support: base graph has " + std::to_string(n) +
                     " vertices, guard is 20");
  }
  const std::uint64_t total = 1ULL << n;
  const Rational prob(BigInt(1), BigInt(1) << n);
  std::vector<SupportPoint> out;
  out.reserve(total);
  for (std::uint64_t subset = 0; subset < total; ++subset) {
    out.push_back({subset, prob, inst.scenario_graph(subset)});
  }
  return out;
}

TwoStageInstance explicit_hardness_instance(const HardnessInstance& inst) {
  TwoStageInstance out;
  out.stage0 = inst.stage0;
  out.lambda = inst.lambda;
  out.mode = inst.mode;
  for (const SupportPoint& p : enumerate_support(inst)) {
    out.scenarios.push_back({"S" + std::to_string(p.subset), p.prob, p.graph});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random generation

namespace {

std::vector<std::pair<std::string, std::string>> draw_edges(
    const std::vector<std::pair<std::string, Side>>& vertices, const Rational& density,
    Xoshiro256& rng) {
  std::vector<std::string> lefts, rights;
  for (const auto& [name, side] : vertices) {
    (side == Side::Left ? lefts : rights).push_back(name);
  }
  std::sort(lefts.begin(), lefts.end());
  std::sort(rights.begin(), rights.end());
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& l : lefts) {
    for (const auto& r : rights) {
      if (rng.chance(density)) edges.emplace_back(l, r);
    }
  }
  return edges;
}

}  // namespace

TwoStageInstance gen_random(const GenParams& params, std::uint64_t seed) {
  if (params.density < 0 || params.density > 1) {
    throw std::invalid_argument("density must lie in [0,1]");
  }
  Xoshiro256 rng(seed);
  TwoStageInstance inst;
  inst.mode = params.mode;

  std::vector<std::pair<std::string, Side>> base_vertices;
  for (int i = 0; i < params.left_count; ++i) {
    base_vertices.emplace_back("l" + std::to_string(i), Side::Left);
  }
  for (int i = 0; i < params.right_count; ++i) {
    base_vertices.emplace_back("r" + std::to_string(i), Side::Right);
  }
  inst.stage0 = BipartiteGraph(base_vertices, draw_edges(base_vertices, params.density, rng));

  for (const auto& [name, _] : base_vertices) {
    inst.lambda[name] = Rational(rng.below(5), 4);  // 0, 1/4, ..., 1
  }

  std::vector<std::uint64_t> weights;
  for (int s = 0; s < params.scenario_count; ++s) weights.push_back(1 + rng.below(8));
  const std::uint64_t weight_sum = [&] {
    std::uint64_t w = 0;
    for (auto x : weights) w += x;
    return w;
  }();

  for (int s = 0; s < params.scenario_count; ++s) {
    std::vector<std::pair<std::string, Side>> vertices;
    for (const auto& v : base_vertices) {
      if (rng.chance(Rational(3, 4))) vertices.push_back(v);
    }
    const int fresh = static_cast<int>(rng.below(3));  // 0..2 new players
    for (int i = 0; i < fresh; ++i) {
      vertices.emplace_back("n" + std::to_string(s) + "x" + std::to_string(i),
                            rng.next() & 1 ? Side::Left : Side::Right);
    }
    Scenario sc;
    sc.name = "S" + std::to_string(s + 1);
    sc.prob = Rational(weights[s], weight_sum);
    sc.graph = BipartiteGraph(vertices, draw_edges(vertices, params.density, rng));
    inst.scenarios.push_back(std::move(sc));
  }
  return inst;
}

MultistageInstance gen_random_multistage(int vertex_count, int stage_count, Rational density,
                                         DiffMode mode, std::uint64_t seed) {
  if (stage_count < 2) throw std::invalid_argument("need at least 2 stages");
  Xoshiro256 rng(seed);
  MultistageInstance inst;
  inst.mode = mode;

  std::vector<std::pair<std::string, Side>> universe;
  for (int i = 0; i < vertex_count; ++i) {
    universe.emplace_back("v" + std::to_string(i), rng.next() & 1 ? Side::Left : Side::Right);
  }

  for (int s = 0; s < stage_count; ++s) {
    std::vector<std::pair<std::string, Side>> vertices;
    for (const auto& v : universe) {
      if (rng.chance(Rational(7, 8))) vertices.push_back(v);
    }
    inst.stages.emplace_back(vertices, draw_edges(vertices, density, rng));
  }
  for (int s = 0; s + 1 < stage_count; ++s) {
    std::map<std::string, Rational> lam;
    for (const auto& name : sorted_shared_names(inst.stages[s], inst.stages[s + 1])) {
      lam[name] = Rational(rng.below(5), 4);
    }
    inst.lambda.push_back(std::move(lam));
  }
  return inst;
}

// ---------------------------------------------------------------------------
// JSON files

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw ParseError(msg); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) parse_fail(where + ": unknown key \"" + key + "\"");
  }
}

const json& need(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where + ": missing key \"" + key + "\"");
  return *it;
}

std::vector<std::string> string_array(const json& arr, const std::string& where) {
  if (!arr.is_array()) parse_fail(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (!item.is_string()) parse_fail(where + ": expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

// The global side map comes from the top-level "left"/"right" arrays.
std::map<std::string, Side> side_map(const json& root) {
  std::map<std::string, Side> sides;
  for (const auto& name : string_array(need(root, "left", "instance"), "left")) {
    if (!sides.emplace(name, Side::Left).second) parse_fail("left: duplicate vertex " + name);
  }
  for (const auto& name : string_array(need(root, "right", "instance"), "right")) {
    if (sides.count(name)) parse_fail("vertex " + name + " listed in both left and right");
    sides.emplace(name, Side::Right);
  }
  return sides;
}

BipartiteGraph graph_from_json(const json& obj, const std::map<std::string, Side>& sides,
                               const std::string& where, bool scenario_keys) {
  if (!obj.is_object()) parse_fail(where + ": expected an object");
  std::set<std::string> allowed = {"vertices", "edges"};
  if (scenario_keys) {
    allowed.insert("name");
    allowed.insert("prob");
  }
  reject_unknown_keys(obj, allowed, where);

  std::vector<std::pair<std::string, Side>> vertices;
  for (const auto& name : string_array(need(obj, "vertices", where), where + ".vertices")) {
    auto it = sides.find(name);
    if (it == sides.end()) parse_fail(where + ": vertex " + name + " not declared in left/right");
    vertices.emplace_back(name, it->second);
  }
  std::vector<std::pair<std::string, std::string>> edges;
  const json& earr = need(obj, "edges", where);
  if (!earr.is_array()) parse_fail(where + ".edges: expected an array of pairs");
  for (const auto& e : earr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      parse_fail(where + ".edges: expected [\"u\", \"v\"] pairs");
    }
    edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  try {
    return BipartiteGraph(vertices, edges);
  } catch (const std::invalid_argument& ex) {
    parse_fail(where + ": " + ex.what());
  }
}

std::map<std::string, Rational> lambda_from_json(const json& obj, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + ": expected an object of fraction strings");
  std::map<std::string, Rational> out;
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_string()) parse_fail(where + "." + key + ": expected a fraction string");
    out[key] = rat_of_string(value.get<std::string>());
  }
  return out;
}

Rational fraction_field(const json& obj, const std::string& key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_string()) parse_fail(where + "." + key + ": expected a fraction string");
  return rat_of_string(v.get<std::string>());
}

json graph_to_json(const BipartiteGraph& g) {
  json obj;
  obj["vertices"] = g.names();
  json edges = json::array();
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edge_names(e);
    edges.push_back({u, v});
  }
  obj["edges"] = std::move(edges);
  return obj;
}

json lambda_to_json(const std::map<std::string, Rational>& lambda) {
  json obj = json::object();
  for (const auto& [name, value] : lambda) obj[name] = rat_to_string(value);
  return obj;
}

void sides_to_json(json& root, const std::vector<const BipartiteGraph*>& graphs) {
  std::set<std::string> left, right;
  for (const BipartiteGraph* g : graphs) {
    for (int v = 0; v < g->vertex_count(); ++v) {
      (g->side(v) == Side::Left ? left : right).insert(g->name(v));
    }
  }
  root["left"] = left;
  root["right"] = right;
}

}  // namespace

InstanceFile load_instance(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    parse_fail(std::string("invalid JSON: ") + ex.what());
  }
  if (!root.is_object()) parse_fail("instance: expected a JSON object");

  const json& kind = need(root, "kind", "instance");
  if (!kind.is_string()) parse_fail("kind: expected a string");
  const std::string kind_str = kind.get<std::string>();
  const auto sides = side_map(root);
  const std::string mode_str = need(root, "mode", "instance").get<std::string>();

  if (kind_str == "two-stage") {
    reject_unknown_keys(root,
                        {"kind", "left", "right", "stage0", "scenarios", "lambda", "mode", "seed"},
                        "instance");
    TwoStageInstance inst;
    inst.mode = mode_of_string(mode_str);
    inst.stage0 = graph_from_json(need(root, "stage0", "instance"), sides, "stage0", false);
    const json& scen = need(root, "scenarios", "instance");
    if (!scen.is_array()) parse_fail("scenarios: expected an array");
    int idx = 0;
    for (const auto& s : scen) {
      const std::string where = "scenarios[" + std::to_string(idx++) + "]";
      Scenario sc;
      sc.graph = graph_from_json(s, sides, where, true);
      const json& name = need(s, "name", where);
      if (!name.is_string()) parse_fail(where + ".name: expected a string");
      sc.name = name.get<std::string>();
      sc.prob = fraction_field(s, "prob", where);
      inst.scenarios.push_back(std::move(sc));
    }
    inst.lambda = lambda_from_json(need(root, "lambda", "instance"), "lambda");
    return inst;
  }
  if (kind_str == "multistage") {
    reject_unknown_keys(root, {"kind", "left", "right", "stages", "lambda", "mode", "seed"},
                        "instance");
    MultistageInstance inst;
    inst.mode = mode_of_string(mode_str);
    const json& stages = need(root, "stages", "instance");
    if (!stages.is_array()) parse_fail("stages: expected an array");
    int idx = 0;
    for (const auto& s : stages) {
      inst.stages.push_back(
          graph_from_json(s, sides, "stages[" + std::to_string(idx++) + "]", false));
    }
    const json& lambda = need(root, "lambda", "instance");
    if (!lambda.is_array()) parse_fail("lambda: expected an array of objects (one per transition)");
    idx = 0;
    for (const auto& l : lambda) {
      inst.lambda.push_back(lambda_from_json(l, "lambda[" + std::to_string(idx++) + "]"));
    }
    return inst;
  }
  parse_fail("kind: expected \"two-stage\" or \"multistage\"");
}

InstanceFile load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_instance(buf.str());
}

std::string instance_to_json(const TwoStageInstance& inst, std::optional<std::uint64_t> seed) {
  json root;
  root["kind"] = "two-stage";
  std::vector<const BipartiteGraph*> graphs{&inst.stage0};
  for (const Scenario& s : inst.scenarios) graphs.push_back(&s.graph);
  sides_to_json(root, graphs);
  root["stage0"] = graph_to_json(inst.stage0);
  json scenarios = json::array();
  for (const Scenario& s : inst.scenarios) {
    json obj = graph_to_json(s.graph);
    obj["name"] = s.name;
    obj["prob"] = rat_to_string(s.prob);
    scenarios.push_back(std::move(obj));
  }
  root["scenarios"] = std::move(scenarios);
  root["lambda"] = lambda_to_json(inst.lambda);
  root["mode"] = to_string(inst.mode);
  if (seed) root["seed"] = *seed;
  return root.dump(2) + "\n";
}

std::string instance_to_json(const MultistageInstance& inst, std::optional<std::uint64_t> seed) {
  json root;
  root["kind"] = "multistage";
  std::vector<const BipartiteGraph*> graphs;
  for (const BipartiteGraph& g : inst.stages) graphs.push_back(&g);
  sides_to_json(root, graphs);
  json stages = json::array();
  for (const BipartiteGraph& g : inst.stages) stages.push_back(graph_to_json(g));
  root["stages"] = std::move(stages);
  json lambda = json::array();
  for (const auto& l : inst.lambda) lambda.push_back(lambda_to_json(l));
  root["lambda"] = std::move(lambda);
  root["mode"] = to_string(inst.mode);
  if (seed) root["seed"] = *seed;
  return root.dump(2) + "\n";
}

}  // namespace coreflow
