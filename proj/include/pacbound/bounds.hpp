#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pacbound/ensemble.hpp"

namespace pacbound {

enum class BoundKind {
  McAllester,
  Maurer,
  StandardRateTask,
  TaskKl,
  TaskCatoni,
  SampleKl,
  SampleCatoni,
  PinskerTask,
  PinskerSample,
  JointTask,
  MetaTaskKl,
  MetaSampleKl,
  MetaTaskCatoni,
  MetaSampleCatoni,
};

std::string to_string(BoundKind kind);

enum class ConstraintKind { TaskKl, TaskCatoni, SampleKl, SampleCatoni };

/// One convex inequality g(p) <= budget_rhs over the unknown risk vector
/// p in [0,1]^n. g is separable: g(p) = sum_i g_i(p_i), with
///   TaskKl:     g_i(p) = m_i kl(q_i|p)
///   TaskCatoni: g_i(p) = -m_i log(1 - p + p e^{-lambda_i/(n m_i)})
/// The Sample* kinds are the n = 1 instances of the same two forms with
/// m = M and q = her^S.
class RiskConstraint {
 public:
  static RiskConstraint task_kl(std::vector<std::int64_t> m, std::vector<double> q,
                                double budget_rhs);
  static RiskConstraint task_catoni(std::vector<std::int64_t> m, std::vector<double> q,
                                    std::vector<double> lambdas, double budget_rhs);
  static RiskConstraint sample_kl(std::int64_t total_samples, double q, double budget_rhs);
  static RiskConstraint sample_catoni(std::int64_t total_samples, double q, double lambda,
                                      double budget_rhs);

  ConstraintKind kind() const { return kind_; }
  bool is_kl() const { return kind_ == ConstraintKind::TaskKl || kind_ == ConstraintKind::SampleKl; }
  int dimension() const { return static_cast<int>(m_.size()); }
  double budget_rhs() const { return budget_rhs_; }
  const std::vector<std::int64_t>& sample_counts() const { return m_; }
  const std::vector<double>& empirical_risks() const { return q_; }
  const std::vector<double>& lambdas() const { return lambdas_; }

  double eval(const std::vector<double>& p) const;  // g(p)
  double coord(int i, double p) const;              // g_i(p)
  double coord_deriv(int i, double p) const;        // g_i'(p)
  bool feasible_at_empirical() const;               // g(q) <= budget_rhs

 private:
  RiskConstraint() = default;
  ConstraintKind kind_ = ConstraintKind::TaskKl;
  std::vector<std::int64_t> m_;
  std::vector<double> q_;
  std::vector<double> lambdas_;       // TaskCatoni / SampleCatoni only
  std::vector<double> exp_neg_a_;     // cached e^{-lambda_i/(n m_i)}
  double budget_rhs_ = 0.0;
};

struct Diagnostics {
  int solver_iterations = 0;
  double constraint_residual = 0.0;
  int active_constraints = 0;
  double wall_time = 0.0;
};

/// A certified upper bound on the selected risk scalarization, together with
/// the confidence budget it consumed. Values are clamped to [0,1]; a clamped
/// (uninformative) bound is reported as exactly 1 with the vacuous flag set.
struct BoundResult {
  double value = 1.0;
  BoundKind kind = BoundKind::Maurer;
  double delta_consumed = 0.0;
  bool vacuous = false;
  Diagnostics diag;
};

struct MaurerOptions {
  // Denominator of the single-task kl budget: m by default, 2m selectable.
  bool double_denominator = false;
  double denominator(double m) const { return double_denominator ? 2.0 * m : m; }
};

// Single-task baselines.
BoundResult single_task_mcallester(std::int64_t m, double q, double kl_budget, double delta);
BoundResult single_task_maurer(std::int64_t m, double q, double kl_budget, double delta,
                               const MaurerOptions& opts = {});

// Explicit standard-rate bound on her^T via the harmonic mean.
BoundResult standard_rate_task_centric(const Ensemble& e, const ComplexityBudget& b);
BoundResult standard_rate_task_centric(const Ensemble& e, const ComplexityBudget& b,
                                       double delta_share);

// Fast-rate constraint builders. The 3-argument overloads take an explicit
// delta share so a union-bound caller can do its own splitting; the
// 2-argument forms spend the budget's full delta.
RiskConstraint build_task_kl_constraint(const Ensemble& e, const ComplexityBudget& b);
RiskConstraint build_task_kl_constraint(const Ensemble& e, const ComplexityBudget& b,
                                        double delta_share);
RiskConstraint build_task_catoni_constraint(const Ensemble& e, const ComplexityBudget& b,
                                            const std::vector<double>& lambdas);
RiskConstraint build_task_catoni_constraint(const Ensemble& e, const ComplexityBudget& b,
                                            const std::vector<double>& lambdas,
                                            double delta_share);

// Sample-centric bounds (scalar inversions).
BoundResult sample_kl_bound(const Ensemble& e, const ComplexityBudget& b);
BoundResult sample_kl_bound(const Ensemble& e, const ComplexityBudget& b, double delta_share);
BoundResult sample_catoni_bound(const Ensemble& e, const ComplexityBudget& b, double lambda);
BoundResult sample_catoni_bound(const Ensemble& e, const ComplexityBudget& b, double lambda,
                                double delta_share);

// Explicit standard-rate consequences of the fast-rate constraints.
BoundResult pinsker_sample_centric(const Ensemble& e, const ComplexityBudget& b);
BoundResult pinsker_sample_centric(const Ensemble& e, const ComplexityBudget& b,
                                   double delta_share);
BoundResult pinsker_task_centric(const Ensemble& e, const ComplexityBudget& b);
BoundResult pinsker_task_centric(const Ensemble& e, const ComplexityBudget& b,
                                 double delta_share);

}  // namespace pacbound
