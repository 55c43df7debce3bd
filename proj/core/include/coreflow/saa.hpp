#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "coreflow/instance.hpp"
#include "coreflow/solver.hpp"

namespace coreflow {

// Accuracy/confidence pair for the sample-average approximation, or an
// explicit sample count. Exactly one of the two ways of fixing N may be used.
struct SaaConfig {
  std::optional<Rational> accuracy;    // > 0
  std::optional<Rational> confidence;  // in (0,1)
  std::optional<long long> samples;

  // Throws std::invalid_argument on inconsistent configuration.
  void check() const;
};

// Certified enclosure of ln(x) for rational x > 0: lo <= ln(x) <= hi and
// hi - lo <= tol. Series-based, exact rational arithmetic throughout.
std::pair<Rational, Rational> ln_bounds(const Rational& x, const Rational& tol);

// Upper bound within tol of the true value. The outward direction keeps the
// sample-count guarantee conservative.
Rational ln_upper(const Rational& x, const Rational& tol);

// The sample bound 2 * lambda_sum^2 * ln(2^v0_count / confidence) / accuracy^2
// before rounding, with ln replaced by its certified upper bound at precision
// 1e-9.
Rational saa_sample_bound(const Rational& lambda_sum, int v0_count, const Rational& confidence,
                          const Rational& accuracy);

// ceil of the sample bound.
long long required_samples(const Rational& lambda_sum, int v0_count, const Rational& confidence,
                           const Rational& accuracy);

struct SaaResult {
  Allocation y_hat;               // integral first-stage core element
  long long samples = 0;          // N actually drawn
  std::uint64_t seed = 0;
  Rational empirical_objective;   // optimum of the sampled instance
  TwoStageInstance sampled;       // the explicit instance that was solved
};

// Draws N i.i.d. scenarios from the sampler (N from cfg), builds the explicit
// instance with uniform probabilities 1/N and the positive-part objective,
// and solves it exactly. Deterministic for a fixed seed; each draw uses its
// own derived stream so trials can run on concurrent workers.
SaaResult saa_solve(const BipartiteGraph& g0, const std::map<std::string, Rational>& lambda,
                    const ScenarioSampler& sampler, const SaaConfig& cfg, std::uint64_t seed);

// Exact expectation of the hardness instance's objective under first stage y:
// the full 2^|V| support is enumerated and every inner optimum solved
// exactly. Guarded at |V| <= 20.
Rational exact_expected_value(const Allocation& y, const HardnessInstance& inst);

// Ground-truth count of vertex covers of an arbitrary graph by subset
// enumeration. Guarded at |V| <= 20.
unsigned long long count_vertex_covers(const SimpleGraph& g);

}  // namespace coreflow
