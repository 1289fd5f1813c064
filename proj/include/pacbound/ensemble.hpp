#pragma once

#include <cstdint>
#include <vector>

#include "pacbound/klmath.hpp"

namespace pacbound {

/// Per-task observed statistics: training set size m_i and empirical risk.
struct TaskStat {
  std::int64_t sample_count = 1;
  Prob empirical_risk;
};

/// An unbalanced multi-task problem instance. Immutable after construction;
/// all derived aggregates are computed once and cached.
class Ensemble {
 public:
  explicit Ensemble(std::vector<TaskStat> tasks);

  int size() const { return static_cast<int>(tasks_.size()); }
  const std::vector<TaskStat>& tasks() const { return tasks_; }
  const std::vector<std::int64_t>& sample_counts() const { return counts_; }
  const std::vector<double>& empirical_risks() const { return risks_; }

  std::int64_t total_samples() const { return total_samples_; }      // M
  std::int64_t min_samples() const { return min_samples_; }          // m_min
  double harmonic_mean() const { return harmonic_mean_; }            // m_h
  double task_centric_empirical() const { return task_centric_; }    // her^T
  double sample_centric_empirical() const { return sample_centric_; }  // her^S
  bool balanced() const { return balanced_; }

 private:
  std::vector<TaskStat> tasks_;
  std::vector<std::int64_t> counts_;
  std::vector<double> risks_;
  std::int64_t total_samples_ = 0;
  std::int64_t min_samples_ = 0;
  double harmonic_mean_ = 0.0;
  double task_centric_ = 0.0;
  double sample_centric_ = 0.0;
  bool balanced_ = false;
};

Ensemble build_ensemble(std::vector<TaskStat> tasks);

/// The KL(Q||P) complexity term together with the confidence level delta.
/// Either a plain scalar or a {hyper, per-task} decomposition; decomposed
/// budgets collapse to hyper + sum(per_task) wherever a theorem consumes a
/// single scalar, and keep the parts only for reporting.
class ComplexityBudget {
 public:
  static ComplexityBudget scalar(double total_kl, double delta);
  static ComplexityBudget decomposed(double hyper_kl, std::vector<double> per_task_kl,
                                     double delta);

  double total_kl() const { return total_kl_; }
  double delta() const { return delta_; }
  bool is_decomposed() const { return decomposed_; }
  double hyper_kl() const { return hyper_kl_; }
  const std::vector<double>& per_task_kl() const { return per_task_kl_; }

 private:
  ComplexityBudget() = default;
  double total_kl_ = 0.0;
  double delta_ = 0.05;
  bool decomposed_ = false;
  double hyper_kl_ = 0.0;
  std::vector<double> per_task_kl_;
};

/// KL decomposition for the Gaussian family used in the linear-model setup:
/// hyper term (d/2)||psi||^2 and per-task terms
/// (d/2)(sigma^2 - log sigma^2) + (1/2)||mu_i - psi||^2.
ComplexityBudget gaussian_budget(int dim, double sigma,
                                 const std::vector<std::vector<double>>& task_means,
                                 const std::vector<double>& bias, double delta);

/// Candidate vector of true risks, one entry per task.
struct RiskVector {
  std::vector<double> values;
};

}  // namespace pacbound
