#pragma once

#include <vector>

#include "pacbound/bounds.hpp"
#include "pacbound/ensemble.hpp"

namespace pacbound {

/// Linear objective over the risk vector: uniform 1/n for the task-centric
/// mean, m_i/M for the sample-centric mean. Weights are nonnegative and sum
/// to one.
struct ObjectiveWeights {
  std::vector<double> weights;

  static ObjectiveWeights uniform(int n);
  static ObjectiveWeights sample_weighted(const Ensemble& e);
};

struct SolveReport {
  double optimum = 0.0;
  std::vector<double> argmax;
  std::vector<double> dual_multipliers;  // one per constraint
  std::vector<double> residuals;         // g_k(argmax) - rhs_k, per constraint
  bool converged = false;
  bool boundary = false;  // some coordinate clamped at the upper box edge
  bool vacuous = false;   // empty/unusable feasible set, bound falls back to 1
  int iterations = 0;
  double duality_gap = 0.0;
};

// Maximizes sum_i w_i p_i over {p in [0,1]^n : g(p) <= budget_rhs} for one
// separable convex constraint, by bisection on the Lagrange multiplier with
// exact coordinate-wise stationarity solves.
SolveReport maximize_single_constraint(const RiskConstraint& c, const ObjectiveWeights& w);

// Maximizes over the intersection of several constraints (shared dimension).
// Dual coordinate descent over the multiplier vector; the inner maximization
// stays coordinate-separable. On non-convergence the reported optimum falls
// back to the minimum of the single-constraint optima, which is always a
// valid upper bound for the intersection.
SolveReport maximize_joint(const std::vector<RiskConstraint>& cs, const ObjectiveWeights& w);

// The multi-task Catoni inverse: maximizes the uniform mean subject to
// -sum_i m_i log(1 - p_i + p_i e^{-lambda_i/(n m_i)}) <= (1/n) sum_i lambda_i q_i + budget.
SolveReport maximize_catoni_multi(const Ensemble& e, const std::vector<double>& q,
                                  double budget, const std::vector<double>& lambdas);

}  // namespace pacbound
