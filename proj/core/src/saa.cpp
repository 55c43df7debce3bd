#include "coreflow/saa.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

#include "coreflow/errors.hpp"

namespace coreflow {

void SaaConfig::check() const {
  if (samples) {
    if (accuracy || confidence) {
      throw std::invalid_argument("give either an explicit sample count or accuracy+confidence");
    }
    if (*samples < 1) throw std::invalid_argument("sample count must be positive");
    return;
  }
  if (!accuracy || !confidence) {
    throw std::invalid_argument("both accuracy and confidence are required");
  }
  if (*accuracy <= 0) throw std::invalid_argument("accuracy must be positive");
  if (*confidence <= 0 || *confidence >= 1) {
    throw std::invalid_argument("confidence must lie in (0,1)");
  }
}

namespace {

// Enclosure of ln(m) for m in [1,2) via the atanh series
//   ln m = 2 * sum_{j>=0} z^(2j+1) / (2j+1),  z = (m-1)/(m+1) in [0,1/3).
// Partial sums bound from below; the geometric tail bounds from above.
std::pair<Rational, Rational> ln_series(const Rational& m, const Rational& tol) {
  const Rational z = (m - 1) / (m + 1);
  if (z == 0) return {0, 0};
  const Rational z2 = z * z;
  Rational term = z;  // z^(2j+1)
  Rational sum = 0;
  int two_j_plus_1 = 1;
  while (true) {
    sum += term / two_j_plus_1;
    term *= z2;
    two_j_plus_1 += 2;
    const Rational tail = 2 * term / (two_j_plus_1 * (1 - z2));
    if (tail <= tol) {
      return {2 * sum, 2 * sum + tail};
    }
  }
}

}  // namespace

std::pair<Rational, Rational> ln_bounds(const Rational& x, const Rational& tol) {
  if (x <= 0) throw std::invalid_argument("ln of a non-positive value");
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");

  Rational m = x;
  long long k = 0;
  while (m >= 2) {
    m /= 2;
    ++k;
  }
  while (m < 1) {
    m *= 2;
    --k;
  }

  const Rational half_tol = tol / 2;
  const auto [m_lo, m_hi] = ln_series(m, half_tol);
  if (k == 0) return {m_lo, m_hi};

  const long long abs_k = k < 0 ? -k : k;
  const auto [ln2_lo, ln2_hi] = ln_series(Rational(2), half_tol / abs_k);
  if (k > 0) return {m_lo + k * ln2_lo, m_hi + k * ln2_hi};
  return {m_lo + k * ln2_hi, m_hi + k * ln2_lo};
}

Rational ln_upper(const Rational& x, const Rational& tol) { return ln_bounds(x, tol).second; }

Rational saa_sample_bound(const Rational& lambda_sum, int v0_count, const Rational& confidence,
                          const Rational& accuracy) {
  if (lambda_sum < 0) throw std::invalid_argument("lambda sum must be nonnegative");
  if (v0_count < 0) throw std::invalid_argument("vertex count must be nonnegative");
  if (accuracy <= 0) throw std::invalid_argument("accuracy must be positive");
  if (confidence <= 0 || confidence >= 1) {
    throw std::invalid_argument("confidence must lie in (0,1)");
  }
  const Rational argument = Rational(BigInt(1) << v0_count) / confidence;
  const Rational log_bound = ln_upper(argument, Rational(1, 1000000000));
  return 2 * lambda_sum * lambda_sum * log_bound / (accuracy * accuracy);
}

long long required_samples(const Rational& lambda_sum, int v0_count, const Rational& confidence,
                           const Rational& accuracy) {
  const BigInt n = rat_ceil(saa_sample_bound(lambda_sum, v0_count, confidence, accuracy));
  if (n > BigInt(std::numeric_limits<long long>::max())) {
    throw GuardError("required sample count does not fit in 64 bits");
  }
  return static_cast<long long>(n);
}

SaaResult saa_solve(const BipartiteGraph& g0, const std::map<std::string, Rational>& lambda,
                    const ScenarioSampler& sampler, const SaaConfig& cfg, std::uint64_t seed) {
  cfg.check();

  long long n;
  if (cfg.samples) {
    n = *cfg.samples;
  } else {
    Rational lambda_sum = 0;
    for (const auto& name : g0.names()) {
      auto it = lambda.find(name);
      if (it != lambda.end()) lambda_sum += it->second;
    }
    n = required_samples(lambda_sum, g0.vertex_count(), *cfg.confidence, *cfg.accuracy);
    if (n < 1) n = 1;  // lambda == 0 still needs one scenario to form an instance
  }

  SaaResult result;
  result.samples = n;
  result.seed = seed;
  result.sampled.stage0 = g0;
  result.sampled.lambda = lambda;
  result.sampled.mode = DiffMode::Pos;
  for (long long i = 0; i < n; ++i) {
    Xoshiro256 rng = stream_for(seed, static_cast<std::uint64_t>(i));
    Scenario s;
    s.name = "S" + std::to_string(i + 1);
    s.prob = Rational(1, n);
    s.graph = sampler.draw(rng);
    result.sampled.scenarios.push_back(std::move(s));
  }

  const SolveResult solved = solve_two_stage(result.sampled);
  result.y_hat = solved.first_stage();
  result.empirical_objective = solved.objective;
  return result;
}

Rational exact_expected_value(const Allocation& y, const HardnessInstance& inst) {
  const TwoStageInstance full = explicit_hardness_instance(inst);  // guards |V| <= 20
  return evaluate_first_stage(y, full);
}

unsigned long long count_vertex_covers(const SimpleGraph& g) {
  const int n = g.vertex_count();
  if (n > 20) {
    throw GuardError("count_vertex_covers: graph has " + std::to_string(n) +
                     " vertices, guard is 20");
  }
  std::vector<std::uint32_t> edge_masks;
  for (const auto& [a, b] : g.edges) edge_masks.push_back((1u << a) | (1u << b));

  unsigned long long count = 0;
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool covers = true;
    for (std::uint32_t em : edge_masks) {
      if ((mask & em) == 0) {
        covers = false;
        break;
      }
    }
    if (covers) ++count;
  }
  return count;
}

}  // namespace coreflow
