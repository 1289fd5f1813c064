#include "pacbound/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "pacbound/klmath.hpp"

namespace pacbound {

namespace {

BoundResult clamp_result(double raw, BoundKind kind, double delta) {
  BoundResult r;
  r.kind = kind;
  r.delta_consumed = delta;
  if (!(raw < 1.0)) {
    r.value = 1.0;
    r.vacuous = true;
  } else {
    r.value = raw < 0.0 ? 0.0 : raw;
  }
  return r;
}

void check_delta(double delta, const char* what) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument(std::string(what) + ": delta must lie in (0,1)");
  }
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::McAllester: return "mcallester";
    case BoundKind::Maurer: return "maurer";
    case BoundKind::StandardRateTask: return "standard_rate_task";
    case BoundKind::TaskKl: return "task_kl";
    case BoundKind::TaskCatoni: return "task_catoni";
    case BoundKind::SampleKl: return "sample_kl";
    case BoundKind::SampleCatoni: return "sample_catoni";
    case BoundKind::PinskerTask: return "pinsker_task";
    case BoundKind::PinskerSample: return "pinsker_sample";
    case BoundKind::JointTask: return "joint_task";
    case BoundKind::MetaTaskKl: return "meta_task_kl";
    case BoundKind::MetaSampleKl: return "meta_sample_kl";
    case BoundKind::MetaTaskCatoni: return "meta_task_catoni";
    case BoundKind::MetaSampleCatoni: return "meta_sample_catoni";
  }
  return "unknown";
}

RiskConstraint RiskConstraint::task_kl(std::vector<std::int64_t> m, std::vector<double> q,
                                       double budget_rhs) {
  if (m.empty() || m.size() != q.size()) {
    throw std::invalid_argument("RiskConstraint: m and q must be non-empty and match");
  }
  RiskConstraint c;
  c.kind_ = ConstraintKind::TaskKl;
  c.m_ = std::move(m);
  c.q_ = std::move(q);
  c.budget_rhs_ = budget_rhs;
  return c;
}

RiskConstraint RiskConstraint::task_catoni(std::vector<std::int64_t> m, std::vector<double> q,
                                           std::vector<double> lambdas, double budget_rhs) {
  if (m.empty() || m.size() != q.size() || m.size() != lambdas.size()) {
    throw std::invalid_argument("RiskConstraint: m, q, lambdas must be non-empty and match");
  }
  for (double l : lambdas) {
    if (!(l > 0.0)) {
      throw std::invalid_argument("RiskConstraint: all lambdas must be > 0");
    }
  }
  RiskConstraint c;
  c.kind_ = ConstraintKind::TaskCatoni;
  const int n = static_cast<int>(m.size());
  c.exp_neg_a_.reserve(n);
  for (int i = 0; i < n; ++i) {
    c.exp_neg_a_.push_back(std::exp(-lambdas[i] / (static_cast<double>(n) * m[i])));
  }
  c.m_ = std::move(m);
  c.q_ = std::move(q);
  c.lambdas_ = std::move(lambdas);
  c.budget_rhs_ = budget_rhs;
  return c;
}

RiskConstraint RiskConstraint::sample_kl(std::int64_t total_samples, double q,
                                         double budget_rhs) {
  RiskConstraint c = task_kl({total_samples}, {q}, budget_rhs);
  c.kind_ = ConstraintKind::SampleKl;
  return c;
}

RiskConstraint RiskConstraint::sample_catoni(std::int64_t total_samples, double q,
                                             double lambda, double budget_rhs) {
  RiskConstraint c = task_catoni({total_samples}, {q}, {lambda}, budget_rhs);
  c.kind_ = ConstraintKind::SampleCatoni;
  return c;
}

double RiskConstraint::coord(int i, double p) const {
  if (is_kl()) {
    return static_cast<double>(m_[i]) * kl_bernoulli(q_[i], p);
  }
  // -m log(1 - p + p e^{-a}) = -m log1p(p (e^{-a} - 1))
  return -static_cast<double>(m_[i]) * std::log1p(p * (exp_neg_a_[i] - 1.0));
}

double RiskConstraint::coord_deriv(int i, double p) const {
  if (is_kl()) {
    return static_cast<double>(m_[i]) * kl_bernoulli_dp(q_[i], p);
  }
  const double e = exp_neg_a_[i];
  return static_cast<double>(m_[i]) * (1.0 - e) / (1.0 - p + p * e);
}

double RiskConstraint::eval(const std::vector<double>& p) const {
  if (static_cast<int>(p.size()) != dimension()) {
    throw std::invalid_argument("RiskConstraint::eval: dimension mismatch");
  }
  double g = 0.0;
  for (int i = 0; i < dimension(); ++i) g += coord(i, p[i]);
  return g;
}

bool RiskConstraint::feasible_at_empirical() const {
  double g = 0.0;
  for (int i = 0; i < dimension(); ++i) g += coord(i, q_[i]);
  return g <= budget_rhs_ + 1e-12;
}

BoundResult single_task_mcallester(std::int64_t m, double q, double kl_budget, double delta) {
  if (m < 1) throw std::invalid_argument("single_task_mcallester: m must be >= 1");
  check_delta(delta, "single_task_mcallester");
  const double md = static_cast<double>(m);
  const double slack = std::sqrt(
      (kl_budget + std::log(1.0 / delta) + 2.5 * std::log(md) + 8.0) / (2.0 * md - 1.0));
  return clamp_result(q + slack, BoundKind::McAllester, delta);
}

BoundResult single_task_maurer(std::int64_t m, double q, double kl_budget, double delta,
                               const MaurerOptions& opts) {
  if (m < 1) throw std::invalid_argument("single_task_maurer: m must be >= 1");
  check_delta(delta, "single_task_maurer");
  const double md = static_cast<double>(m);
  const double budget =
      (kl_budget + std::log(2.0 * std::sqrt(md) / delta)) / opts.denominator(md);
  BoundResult r = clamp_result(kl_inv_upper(q, budget), BoundKind::Maurer, delta);
  r.vacuous = r.value >= 1.0;
  return r;
}

BoundResult standard_rate_task_centric(const Ensemble& e, const ComplexityBudget& b) {
  return standard_rate_task_centric(e, b, b.delta());
}

BoundResult standard_rate_task_centric(const Ensemble& e, const ComplexityBudget& b,
                                       double delta_share) {
  check_delta(delta_share, "standard_rate_task_centric");
  const double nmh = static_cast<double>(e.size()) * e.harmonic_mean();
  const double slack = std::sqrt(
      (b.total_kl() + std::log(4.0 * nmh / delta_share) + 1.0) / (2.0 * nmh));
  return clamp_result(e.task_centric_empirical() + slack, BoundKind::StandardRateTask,
                      delta_share);
}

RiskConstraint build_task_kl_constraint(const Ensemble& e, const ComplexityBudget& b) {
  return build_task_kl_constraint(e, b, b.delta());
}

RiskConstraint build_task_kl_constraint(const Ensemble& e, const ComplexityBudget& b,
                                        double delta_share) {
  check_delta(delta_share, "build_task_kl_constraint");
  double rhs = b.total_kl() + std::log(1.0 / delta_share);
  for (std::int64_t m : e.sample_counts()) {
    rhs += std::log(2.0 * std::sqrt(static_cast<double>(m)));
  }
  return RiskConstraint::task_kl(e.sample_counts(), e.empirical_risks(), rhs);
}

RiskConstraint build_task_catoni_constraint(const Ensemble& e, const ComplexityBudget& b,
                                            const std::vector<double>& lambdas) {
  return build_task_catoni_constraint(e, b, lambdas, b.delta());
}

RiskConstraint build_task_catoni_constraint(const Ensemble& e, const ComplexityBudget& b,
                                            const std::vector<double>& lambdas,
                                            double delta_share) {
  check_delta(delta_share, "build_task_catoni_constraint");
  if (static_cast<int>(lambdas.size()) != e.size()) {
    throw std::invalid_argument("build_task_catoni_constraint: lambda vector length mismatch");
  }
  const int n = e.size();
  double rhs = b.total_kl() + std::log(1.0 / delta_share);
  for (int i = 0; i < n; ++i) {
    rhs += lambdas[i] * e.empirical_risks()[i] / n;
  }
  return RiskConstraint::task_catoni(e.sample_counts(), e.empirical_risks(), lambdas, rhs);
}

BoundResult sample_kl_bound(const Ensemble& e, const ComplexityBudget& b) {
  return sample_kl_bound(e, b, b.delta());
}

BoundResult sample_kl_bound(const Ensemble& e, const ComplexityBudget& b, double delta_share) {
  check_delta(delta_share, "sample_kl_bound");
  const double M = static_cast<double>(e.total_samples());
  const double budget =
      (b.total_kl() + std::log(2.0 * std::sqrt(M) / delta_share)) / M;
  BoundResult r = clamp_result(kl_inv_upper(e.sample_centric_empirical(), budget),
                               BoundKind::SampleKl, delta_share);
  r.vacuous = r.value >= 1.0;
  return r;
}

BoundResult sample_catoni_bound(const Ensemble& e, const ComplexityBudget& b, double lambda) {
  return sample_catoni_bound(e, b, lambda, b.delta());
}

BoundResult sample_catoni_bound(const Ensemble& e, const ComplexityBudget& b, double lambda,
                                double delta_share) {
  check_delta(delta_share, "sample_catoni_bound");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("sample_catoni_bound: lambda must be > 0");
  }
  const double M = static_cast<double>(e.total_samples());
  const double rhs = e.sample_centric_empirical() +
                     (b.total_kl() + std::log(1.0 / delta_share)) / lambda;
  if (rhs >= 1.0) {
    // Phi_a <= 1 everywhere, so no p below 1 is excluded.
    BoundResult r = clamp_result(1.0, BoundKind::SampleCatoni, delta_share);
    return r;
  }
  return clamp_result(phi_inv(lambda / M, rhs), BoundKind::SampleCatoni, delta_share);
}

BoundResult pinsker_sample_centric(const Ensemble& e, const ComplexityBudget& b) {
  return pinsker_sample_centric(e, b, b.delta());
}

BoundResult pinsker_sample_centric(const Ensemble& e, const ComplexityBudget& b,
                                   double delta_share) {
  check_delta(delta_share, "pinsker_sample_centric");
  const double M = static_cast<double>(e.total_samples());
  const double slack = std::sqrt(
      (b.total_kl() + std::log(2.0 * std::sqrt(M) / delta_share)) / (2.0 * M));
  return clamp_result(e.sample_centric_empirical() + slack, BoundKind::PinskerSample,
                      delta_share);
}

BoundResult pinsker_task_centric(const Ensemble& e, const ComplexityBudget& b) {
  return pinsker_task_centric(e, b, b.delta());
}

BoundResult pinsker_task_centric(const Ensemble& e, const ComplexityBudget& b,
                                 double delta_share) {
  const RiskConstraint c = build_task_kl_constraint(e, b, delta_share);
  const double nmh = static_cast<double>(e.size()) * e.harmonic_mean();
  const double slack = std::sqrt(c.budget_rhs() / (2.0 * nmh));
  return clamp_result(e.task_centric_empirical() + slack, BoundKind::PinskerTask,
                      delta_share);
}

}  // namespace pacbound
