#include "pacbound/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pacbound {

namespace {

// Accumulates sum(1/m_i) as an exact int64 fraction; falls back to floating
// point on overflow. Eq-5-style denominators are sensitive at small m_h, so
// the exact path is worth keeping for realistic task counts.
bool harmonic_sum_exact(const std::vector<std::int64_t>& m, std::int64_t* num,
                        std::int64_t* den) {
  std::int64_t n = 0, d = 1;
  for (std::int64_t mi : m) {
    // n/d + 1/mi = (n*mi + d) / (d*mi)
    std::int64_t nm, dm;
    if (__builtin_mul_overflow(n, mi, &nm)) return false;
    if (__builtin_add_overflow(nm, d, &nm)) return false;
    if (__builtin_mul_overflow(d, mi, &dm)) return false;
    std::int64_t g = std::gcd(nm, dm);
    n = nm / g;
    d = dm / g;
  }
  *num = n;
  *den = d;
  return true;
}

}  // namespace

Ensemble::Ensemble(std::vector<TaskStat> tasks) : tasks_(std::move(tasks)) {
  if (tasks_.empty()) {
    throw std::invalid_argument("Ensemble: task list must be non-empty");
  }
  const int n = static_cast<int>(tasks_.size());
  counts_.reserve(n);
  risks_.reserve(n);
  for (const TaskStat& t : tasks_) {
    if (t.sample_count < 1) {
      throw std::invalid_argument("Ensemble: sample_count must be >= 1");
    }
    counts_.push_back(t.sample_count);
    risks_.push_back(t.empirical_risk.value());
  }

  total_samples_ = std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
  min_samples_ = *std::min_element(counts_.begin(), counts_.end());
  balanced_ = std::all_of(counts_.begin(), counts_.end(),
                          [&](std::int64_t m) { return m == counts_[0]; });

  std::int64_t hnum = 0, hden = 1;
  if (harmonic_sum_exact(counts_, &hnum, &hden)) {
    harmonic_mean_ = static_cast<double>(n) * static_cast<double>(hden) /
                     static_cast<double>(hnum);
  } else {
    long double s = 0.0L;
    for (std::int64_t mi : counts_) s += 1.0L / static_cast<long double>(mi);
    harmonic_mean_ = static_cast<double>(static_cast<long double>(n) / s);
  }

  double sum_q = 0.0;
  double sum_mq = 0.0;
  for (int i = 0; i < n; ++i) {
    sum_q += risks_[i];
    sum_mq += static_cast<double>(counts_[i]) * risks_[i];
  }
  task_centric_ = sum_q / n;
  // In the balanced case the two scalarizations are the same number; reuse
  // the task-centric value so the identity holds bit-for-bit.
  sample_centric_ = balanced_ ? task_centric_
                              : sum_mq / static_cast<double>(total_samples_);
}

Ensemble build_ensemble(std::vector<TaskStat> tasks) {
  return Ensemble(std::move(tasks));
}

ComplexityBudget ComplexityBudget::scalar(double total_kl, double delta) {
  if (!(total_kl >= 0.0)) {
    throw std::invalid_argument("ComplexityBudget: total_kl must be >= 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("ComplexityBudget: delta must lie in (0,1)");
  }
  ComplexityBudget b;
  b.total_kl_ = total_kl;
  b.delta_ = delta;
  return b;
}

ComplexityBudget ComplexityBudget::decomposed(double hyper_kl,
                                              std::vector<double> per_task_kl,
                                              double delta) {
  if (!(hyper_kl >= 0.0)) {
    throw std::invalid_argument("ComplexityBudget: hyper_kl must be >= 0");
  }
  for (double v : per_task_kl) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("ComplexityBudget: per_task_kl entries must be >= 0");
    }
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("ComplexityBudget: delta must lie in (0,1)");
  }
  ComplexityBudget b;
  b.decomposed_ = true;
  b.hyper_kl_ = hyper_kl;
  b.per_task_kl_ = std::move(per_task_kl);
  b.total_kl_ = hyper_kl;
  for (double v : b.per_task_kl_) b.total_kl_ += v;
  b.delta_ = delta;
  return b;
}

ComplexityBudget gaussian_budget(int dim, double sigma,
                                 const std::vector<std::vector<double>>& task_means,
                                 const std::vector<double>& bias, double delta) {
  if (dim < 1) throw std::invalid_argument("gaussian_budget: dim must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_budget: sigma must be > 0");
  if (static_cast<int>(bias.size()) != dim) {
    throw std::invalid_argument("gaussian_budget: bias vector dimension mismatch");
  }
  double bias_sq = 0.0;
  for (double v : bias) bias_sq += v * v;
  const double hyper = 0.5 * dim * bias_sq;

  const double s2 = sigma * sigma;
  const double per_task_base = 0.5 * dim * (s2 - std::log(s2));
  std::vector<double> per_task;
  per_task.reserve(task_means.size());
  for (const auto& mu : task_means) {
    if (static_cast<int>(mu.size()) != dim) {
      throw std::invalid_argument("gaussian_budget: mean vector dimension mismatch");
    }
    double diff_sq = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = mu[k] - bias[k];
      diff_sq += d * d;
    }
    per_task.push_back(per_task_base + 0.5 * diff_sq);
  }
  return ComplexityBudget::decomposed(hyper, std::move(per_task), delta);
}

}  // namespace pacbound
