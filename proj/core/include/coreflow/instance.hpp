#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coreflow/graph.hpp"
#include "coreflow/rational.hpp"
#include "coreflow/rng.hpp"

namespace coreflow {

// Which per-vertex difference between consecutive allocations the objective
// charges. Instance files must state it explicitly; there is no default.
enum class DiffMode { Abs, Pos, Neg };

std::string to_string(DiffMode mode);
DiffMode mode_of_string(const std::string& text);

struct Scenario {
  std::string name;
  Rational prob;
  BipartiteGraph graph;
};

// First-stage graph plus an explicit list of second-stage scenarios.
// Dissatisfaction weights lambda live on the first-stage vertices; missing
// entries mean zero.
struct TwoStageInstance {
  BipartiteGraph stage0;
  std::vector<Scenario> scenarios;
  std::map<std::string, Rational> lambda;
  DiffMode mode = DiffMode::Abs;
};

// k >= 2 predetermined stage graphs sharing one global side-labeling.
// lambda[i] weights the transition between stages i and i+1 and is keyed by
// vertices shared between them; missing entries mean zero.
struct MultistageInstance {
  std::vector<BipartiteGraph> stages;
  std::vector<std::map<std::string, Rational>> lambda;  // size stages.size()-1
  DiffMode mode = DiffMode::Abs;
};

// Invariant check. Returns an empty list when the instance is well-formed;
// otherwise one message per violated field. Violations are data, not errors.
std::vector<std::string> validate(const TwoStageInstance& inst);
std::vector<std::string> validate(const MultistageInstance& inst);

// Throws ValidationError when validate() reports anything.
void require_valid(const TwoStageInstance& inst);
void require_valid(const MultistageInstance& inst);

// ---------------------------------------------------------------------------
// Implicit distributions

// A source of i.i.d. second-stage graphs. Implementations are stateless with
// respect to draws: all randomness comes from the caller-owned stream, so a
// sampler can be shared across workers that each hold their own stream.
class ScenarioSampler {
 public:
  virtual ~ScenarioSampler() = default;
  virtual BipartiteGraph draw(Xoshiro256& rng) const = 0;
};

// Always returns the same graph.
class PointMassSampler : public ScenarioSampler {
 public:
  explicit PointMassSampler(BipartiteGraph g) : g_(std::move(g)) {}
  BipartiteGraph draw(Xoshiro256&) const override { return g_; }

 private:
  BipartiteGraph g_;
};

// ---------------------------------------------------------------------------
// Arbitrary (not necessarily bipartite) undirected graphs, used as the input
// of the counting reduction.

struct SimpleGraph {
  std::vector<std::string> names;           // sorted, unique
  std::vector<std::pair<int, int>> edges;   // index pairs, tail < head

  int vertex_count() const { return static_cast<int>(names.size()); }
  int degree(int v) const;
};

// Parses the plain edge-list format: one "u v" pair per line, '#' starts a
// comment, blank lines ignored. Isolated vertices can be declared by a line
// holding a single name. Throws ParseError on malformed lines, self-loops or
// repeated edges.
SimpleGraph parse_edge_list(const std::string& text);
std::string to_edge_list(const SimpleGraph& g);

// ---------------------------------------------------------------------------
// The counting reduction: a two-stage instance whose optimal value encodes
// the number of vertex covers of an arbitrary base graph.

struct HardnessInstance {
  SimpleGraph base;
  BipartiteGraph stage0;
  std::map<std::string, Rational> lambda;  // zero except at the hub vertex
  DiffMode mode = DiffMode::Pos;

  std::string hub_name;                    // the vertex with lambda 1
  std::vector<std::string> guard_names;    // the two degree-one guards

  // Second-stage graph for the copy-block subset S (bit i = base vertex i):
  // the subgraph of stage0 induced by all copies of vertices in S plus every
  // edge-vertex and the hub.
  BipartiteGraph scenario_graph(std::uint64_t subset) const;

  // Draws each copy block independently with probability 1/2.
  std::unique_ptr<ScenarioSampler> sampler() const;
};

// Builds the reduction instance. Requires a simple base graph with at least
// one edge whose vertex names stay clear of the reserved copy/edge-vertex
// names; throws std::invalid_argument otherwise.
HardnessInstance build_hardness_instance(const SimpleGraph& base);

struct SupportPoint {
  std::uint64_t subset = 0;
  Rational prob;
  BipartiteGraph graph;
};

// All 2^|V| scenarios of the hardness distribution with exact probabilities.
// Guarded at |V| <= 20 (throws GuardError beyond).
std::vector<SupportPoint> enumerate_support(const HardnessInstance& inst);

// The same support folded into an explicit two-stage instance with scenario
// names "S<subset>" and uniform probability 1/2^|V|.
TwoStageInstance explicit_hardness_instance(const HardnessInstance& inst);

// ---------------------------------------------------------------------------
// Random instances (test corpora)

struct GenParams {
  int left_count = 3;
  int right_count = 3;
  Rational density = Rational(1, 2);  // in [0,1]
  int scenario_count = 2;
  DiffMode mode = DiffMode::Abs;
};

// Deterministic for a fixed seed. Scenario graphs drop first-stage vertices,
// occasionally add fresh ones, and redraw edges at the same density; lambda
// and probabilities are small exact rationals.
TwoStageInstance gen_random(const GenParams& params, std::uint64_t seed);

// Random same-bipartition stage chain (for multistage corpora).
MultistageInstance gen_random_multistage(int vertex_count, int stage_count, Rational density,
                                         DiffMode mode, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Instance files: UTF-8 JSON, strict keys. See README for the schema.

using InstanceFile = std::variant<TwoStageInstance, MultistageInstance>;

InstanceFile load_instance(const std::string& json_text);
InstanceFile load_instance_file(const std::string& path);

// seed, when present, is recorded under the optional "seed" key.
std::string instance_to_json(const TwoStageInstance& inst,
                             std::optional<std::uint64_t> seed = std::nullopt);
std::string instance_to_json(const MultistageInstance& inst,
                             std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace coreflow
