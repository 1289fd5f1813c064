#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pacbound/bounds.hpp"
#include "pacbound/ensemble.hpp"
#include "pacbound/solver.hpp"

namespace pacbound {

/// Exact rational, used for delta accounting so that shares sum to the total
/// without floating-point drift.
struct Fraction {
  long long num = 0;
  long long den = 1;

  static Fraction of(long long num, long long den);
  Fraction operator+(const Fraction& o) const;
  bool operator==(const Fraction& o) const = default;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

enum class LambdaPolicy { ExponentialAroundNmh, LinearFractionOfM, Custom };

/// Candidate multipliers for the Catoni-style bounds, plus how the total
/// delta is split across suite members. An empty delta_split means an even
/// split over every member of the suite (kl and standard-rate included);
/// explicit fractions apply to the lambda members only and must leave room
/// for the rest.
struct LambdaGrid {
  std::vector<double> values;
  LambdaPolicy policy = LambdaPolicy::Custom;
  std::vector<Fraction> delta_split;

  // 11 values exponentially spaced in [1e-2 * scale, 1e2 * scale].
  static LambdaGrid exponential(double scale, int count = 11);
  // scale * c for c in {0.5, 0.6, ..., 1.5}.
  static LambdaGrid linear_fraction(double scale);
  static LambdaGrid custom(std::vector<double> values);
};

enum class RiskView { TaskCentric, SampleCentric };

struct SuiteMember {
  BoundResult result;
  double lambda = 0.0;  // 0 when the member is not a Catoni bound
  Fraction delta_fraction;
};

struct SuiteResult {
  std::vector<SuiteMember> members;
  std::optional<BoundResult> joint;  // task-centric only
  double pointwise_min = 1.0;
  BoundResult best;
  bool solver_converged = true;
};

/// Evaluates every requested bound with its delta share, plus (task-centric)
/// the joint optimization over the intersection of all constraint-type
/// members. The best value is the minimum over all valid members; the joint
/// bound participates only when its solver converged.
SuiteResult run_bound_suite(const Ensemble& e, const ComplexityBudget& b, RiskView view,
                            const LambdaGrid& grid, bool include_kl, bool include_standard,
                            const MaurerOptions& maurer = {});

/// Budget statistics for the two-level meta-learning bounds:
/// C(rho) = meta_kl + expected_inner_kl + log(2/delta).
struct MetaBudget {
  int n_tasks = 1;
  std::int64_t m_max = 1;
  double meta_kl = 0.0;
  double expected_inner_kl = 0.0;
  double delta = 0.05;

  double c_rho() const;
};

// Raw two-stage compositions with fully assembled budgets; the theorem-level
// wrappers below assemble the budgets from a MetaBudget.
double meta_task_kl_raw(const Ensemble& e, double inner_rhs, double outer_budget,
                        const MaurerOptions& maurer = {});
double meta_sample_kl_raw(const Ensemble& e, std::int64_t m_max, double inner_budget,
                          double outer_budget, const MaurerOptions& maurer = {});

BoundResult meta_task_kl(const Ensemble& e, const MetaBudget& mb,
                         const MaurerOptions& maurer = {});
BoundResult meta_sample_kl(const Ensemble& e, const MetaBudget& mb,
                           const MaurerOptions& maurer = {});
BoundResult meta_task_catoni(const Ensemble& e, const MetaBudget& mb,
                             const std::vector<double>& inner_lambdas, double outer_lambda);
BoundResult meta_sample_catoni(const Ensemble& e, const MetaBudget& mb, double inner_lambda,
                               double outer_lambda);

}  // namespace pacbound
