#pragma once

#include <cstdint>
#include <vector>

#include "pacbound/bounds.hpp"
#include "pacbound/ensemble.hpp"
#include "pacbound/solver.hpp"
#include "pacbound/unionbound.hpp"

namespace pacbound {

/// Specification of an MGF experiment: n tasks with sizes m_i, i.i.d.
/// Bernoulli(mu) losses, and the multiplier lambda of
/// E[exp(n lambda kl(muhat | mu))] with muhat the inverse-size-weighted mean.
struct MgfSpec {
  std::vector<std::int64_t> task_sizes;
  double mu = 0.5;
  double multiplier = 1.0;
};

// Exact expectation by enumeration of all joint binomial outcomes; the
// outcome count prod(m_i + 1) is capped via sum(m_i) <= 30. Log-space
// accumulation, exponentiation only at return.
double mgf_unbalanced_exact(const MgfSpec& spec);
double mgf_unbalanced_exact_serial(const MgfSpec& spec);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Monte-Carlo estimate for instances beyond the enumeration cap.
McEstimate mgf_unbalanced_mc(const MgfSpec& spec, std::int64_t samples, std::uint64_t seed);
McEstimate mgf_unbalanced_mc_serial(const MgfSpec& spec, std::int64_t samples,
                                    std::uint64_t seed);

// Exact E[exp(sum_i (lambda/n)(Phi_{lambda/(n m_i)}(mu_i) - muhat_i))] by
// per-task enumeration; the generalized Catoni lemma asserts <= 1.
double mgf_catoni_check(const std::vector<std::int64_t>& task_sizes,
                        const std::vector<double>& mus, double lambda);

enum class BoundFamily {
  StandardRate,
  TaskKl,
  TaskCatoniGrid,
  SampleKl,
  SampleCatoni,
  MetaTaskKl,
  MetaSampleKl,
};

BoundFamily bound_family_from_string(const std::string& name);
std::string to_string(BoundFamily family);

/// Environment prototype for the meta-learning coverage generators: tasks
/// are sampled uniformly from this list.
struct MetaEnvPrototype {
  std::int64_t sample_count = 1;
  double risk = 0.0;
};

struct CoverageConfig {
  BoundFamily family = BoundFamily::TaskKl;
  int n_tasks = 5;
  std::int64_t m_lo = 20;
  std::int64_t m_hi = 200;
  bool fixed_risk = false;
  double risk_param = 0.3;  // the fixed risk, or the upper end of U[0, risk_param]
  double delta = 0.05;
  double kl_budget = 0.0;  // 0 = the point-posterior configuration
  std::vector<MetaEnvPrototype> env;  // meta families only
  std::int64_t m_max = 0;             // meta families only
};

struct CoverageReport {
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  double violation_rate = 0.0;
  double binomial_ci_upper = 1.0;  // one-sided upper bound at 99% confidence
  std::uint64_t seed = 0;
};

// Monte-Carlo check of the 1-delta guarantee: draws synthetic data from
// known true risks, evaluates the selected bound, and counts trials where
// the bound undercuts the true target risk. Deterministic given the seed.
CoverageReport coverage_test(const CoverageConfig& config, std::int64_t trials,
                             std::uint64_t seed);
CoverageReport coverage_test_serial(const CoverageConfig& config, std::int64_t trials,
                                    std::uint64_t seed);

// One-sided Clopper-Pearson upper confidence bound for a binomial proportion.
double binomial_upper_ci(std::int64_t successes, std::int64_t trials, double confidence);

// Brute-force cross-check for the solver: exhaustive feasibility scan over a
// q-anchored grid (n <= 3), followed by local refinement down to step/100.
double grid_oracle(const std::vector<RiskConstraint>& cs, const ObjectiveWeights& w,
                   double step);
double grid_oracle_serial(const std::vector<RiskConstraint>& cs, const ObjectiveWeights& w,
                          double step);

}  // namespace pacbound
