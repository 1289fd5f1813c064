#include "pacbound/unionbound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pacbound/klmath.hpp"

namespace pacbound {

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BoundResult result_from_solve(const SolveReport& rep, BoundKind kind, double delta_share) {
  BoundResult r;
  r.kind = kind;
  r.delta_consumed = delta_share;
  if (rep.vacuous || !(rep.optimum < 1.0)) {
    r.value = 1.0;
    r.vacuous = true;
  } else {
    r.value = std::max(0.0, rep.optimum);
  }
  r.diag.solver_iterations = rep.iterations;
  double worst = 0.0;
  for (double res : rep.residuals) worst = std::max(worst, res);
  r.diag.constraint_residual = worst;
  int active = 0;
  for (double nu : rep.dual_multipliers) {
    if (nu > 1e-10) ++active;
  }
  r.diag.active_constraints = active;
  return r;
}

void validate_meta(const Ensemble& e, const MetaBudget& mb, bool needs_m_max) {
  if (mb.n_tasks != e.size()) {
    throw std::invalid_argument("MetaBudget: n_tasks must match the ensemble size");
  }
  if (!(mb.meta_kl >= 0.0) || !(mb.expected_inner_kl >= 0.0)) {
    throw std::invalid_argument("MetaBudget: KL terms must be >= 0");
  }
  if (!(mb.delta > 0.0 && mb.delta < 1.0)) {
    throw std::invalid_argument("MetaBudget: delta must lie in (0,1)");
  }
  if (needs_m_max) {
    for (std::int64_t m : e.sample_counts()) {
      if (m > mb.m_max) {
        throw std::invalid_argument("MetaBudget: m_max is smaller than a task sample count");
      }
    }
  }
}

BoundResult clamp_meta(double raw, BoundKind kind, double delta) {
  BoundResult r;
  r.kind = kind;
  r.delta_consumed = delta;
  if (!(raw < 1.0)) {
    r.value = 1.0;
    r.vacuous = true;
  } else {
    r.value = std::max(0.0, raw);
  }
  return r;
}

}  // namespace

Fraction Fraction::of(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Fraction{num, den};
}

Fraction Fraction::operator+(const Fraction& o) const {
  return Fraction::of(num * o.den + o.num * den, den * o.den);
}

LambdaGrid LambdaGrid::exponential(double scale, int count) {
  if (!(scale > 0.0)) throw std::invalid_argument("LambdaGrid: scale must be > 0");
  if (count < 1) throw std::invalid_argument("LambdaGrid: count must be >= 1");
  LambdaGrid g;
  g.policy = LambdaPolicy::ExponentialAroundNmh;
  if (count == 1) {
    g.values = {scale};
    return g;
  }
  for (int i = 0; i < count; ++i) {
    const double exponent = -2.0 + 4.0 * i / (count - 1);
    g.values.push_back(scale * std::pow(10.0, exponent));
  }
  return g;
}

LambdaGrid LambdaGrid::linear_fraction(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("LambdaGrid: scale must be > 0");
  LambdaGrid g;
  g.policy = LambdaPolicy::LinearFractionOfM;
  for (int i = 0; i <= 10; ++i) {
    g.values.push_back(scale * (0.5 + 0.1 * i));
  }
  return g;
}

LambdaGrid LambdaGrid::custom(std::vector<double> values) {
  LambdaGrid g;
  g.policy = LambdaPolicy::Custom;
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) {
      throw std::invalid_argument("LambdaGrid: values must be strictly positive");
    }
    if (i > 0 && values[i] == values[i - 1]) {
      throw std::invalid_argument("LambdaGrid: values must be strictly increasing");
    }
  }
  g.values = std::move(values);
  return g;
}

SuiteResult run_bound_suite(const Ensemble& e, const ComplexityBudget& b, RiskView view,
                            const LambdaGrid& grid, bool include_kl, bool include_standard,
                            const MaurerOptions& maurer) {
  const int k_lambda = static_cast<int>(grid.values.size());
  const int k_total = k_lambda + (include_kl ? 1 : 0) + (include_standard ? 1 : 0);
  if (k_total < 1) {
    throw std::invalid_argument("run_bound_suite: no bounds selected");
  }

  // Delta accounting in exact rationals; the shares must add up to the whole.
  std::vector<Fraction> lambda_fracs;
  Fraction other_frac;
  if (grid.delta_split.empty()) {
    lambda_fracs.assign(k_lambda, Fraction::of(1, k_total));
    other_frac = Fraction::of(1, k_total);
  } else {
    if (static_cast<int>(grid.delta_split.size()) != k_lambda) {
      throw std::invalid_argument("run_bound_suite: delta_split length mismatch");
    }
    Fraction sum{0, 1};
    for (const Fraction& f : grid.delta_split) {
      if (f.num < 0) throw std::invalid_argument("run_bound_suite: negative delta share");
      sum = sum + f;
    }
    if (sum.num > sum.den) {
      throw std::invalid_argument("run_bound_suite: delta over-allocation");
    }
    lambda_fracs = grid.delta_split;
    const int others = (include_kl ? 1 : 0) + (include_standard ? 1 : 0);
    if (others > 0) {
      const Fraction remaining = Fraction::of(sum.den - sum.num, sum.den);
      if (remaining.num <= 0) {
        throw std::invalid_argument("run_bound_suite: delta over-allocation");
      }
      other_frac = Fraction::of(remaining.num, remaining.den * others);
    }
  }

  SuiteResult out;
  std::vector<RiskConstraint> joint_set;

  const auto push_member = [&](BoundResult r, double lambda, Fraction frac,
                               std::chrono::steady_clock::time_point t0) {
    r.diag.wall_time = elapsed_s(t0);
    out.members.push_back(SuiteMember{std::move(r), lambda, frac});
  };

  if (include_standard) {
    const double share = b.delta() * other_frac.value();
    const auto t0 = std::chrono::steady_clock::now();
    BoundResult r = view == RiskView::TaskCentric
                        ? standard_rate_task_centric(e, b, share)
                        : pinsker_sample_centric(e, b, share);
    push_member(std::move(r), 0.0, other_frac, t0);
  }

  if (include_kl) {
    const double share = b.delta() * other_frac.value();
    const auto t0 = std::chrono::steady_clock::now();
    if (view == RiskView::TaskCentric) {
      RiskConstraint c = build_task_kl_constraint(e, b, share);
      SolveReport rep = maximize_single_constraint(c, ObjectiveWeights::uniform(e.size()));
      out.solver_converged = out.solver_converged && (rep.converged || rep.vacuous);
      push_member(result_from_solve(rep, BoundKind::TaskKl, share), 0.0, other_frac, t0);
      joint_set.push_back(std::move(c));
    } else {
      push_member(sample_kl_bound(e, b, share), 0.0, other_frac, t0);
    }
  }

  for (int j = 0; j < k_lambda; ++j) {
    const double lambda = grid.values[j];
    const double share = b.delta() * lambda_fracs[j].value();
    const auto t0 = std::chrono::steady_clock::now();
    if (view == RiskView::TaskCentric) {
      const std::vector<double> lambdas(e.size(), lambda);
      RiskConstraint c = build_task_catoni_constraint(e, b, lambdas, share);
      SolveReport rep = maximize_single_constraint(c, ObjectiveWeights::uniform(e.size()));
      out.solver_converged = out.solver_converged && (rep.converged || rep.vacuous);
      push_member(result_from_solve(rep, BoundKind::TaskCatoni, share), lambda,
                  lambda_fracs[j], t0);
      joint_set.push_back(std::move(c));
    } else {
      push_member(sample_catoni_bound(e, b, lambda, share), lambda, lambda_fracs[j], t0);
    }
  }

  out.pointwise_min = 1.0;
  for (const SuiteMember& m : out.members) {
    out.pointwise_min = std::min(out.pointwise_min, m.result.value);
  }

  if (view == RiskView::TaskCentric && !joint_set.empty()) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep = maximize_joint(joint_set, ObjectiveWeights::uniform(e.size()));
    out.solver_converged = out.solver_converged && (rep.converged || rep.vacuous);
    BoundResult joint = result_from_solve(rep, BoundKind::JointTask, b.delta());
    joint.diag.wall_time = elapsed_s(t0);
    if (!rep.converged && !rep.vacuous) {
      // The fallback optimum equals the constraint-member minimum; keep it
      // but flag it so callers know the pointwise minimum carries the result.
      joint.vacuous = joint.value >= 1.0;
    }
    out.joint = std::move(joint);
  }

  const BoundResult* best = nullptr;
  for (const SuiteMember& m : out.members) {
    if (best == nullptr || m.result.value < best->value) best = &m.result;
  }
  if (out.joint && out.joint->value < best->value) best = &*out.joint;
  out.best = *best;
  return out;
}

double MetaBudget::c_rho() const {
  return meta_kl + expected_inner_kl + std::log(2.0 / delta);
}

double meta_task_kl_raw(const Ensemble& e, double inner_rhs, double outer_inv_budget) {
  const RiskConstraint c =
      RiskConstraint::task_kl(e.sample_counts(), e.empirical_risks(), inner_rhs);
  const SolveReport rep = maximize_single_constraint(c, ObjectiveWeights::uniform(e.size()));
  const double inner = std::min(1.0, std::max(0.0, rep.optimum));
  return kl_inv_upper(inner, outer_inv_budget);
}

double meta_sample_kl_raw(const Ensemble& e, std::int64_t m_max, double inner_inv_budget,
                          double outer_inv_budget) {
  const double inner = kl_inv_upper(e.sample_centric_empirical(), inner_inv_budget);
  const double scaled = static_cast<double>(e.total_samples()) /
                        (static_cast<double>(e.size()) * static_cast<double>(m_max)) * inner;
  return kl_inv_upper(scaled, outer_inv_budget);
}

BoundResult meta_task_kl(const Ensemble& e, const MetaBudget& mb, const MaurerOptions& maurer) {
  validate_meta(e, mb, /*needs_m_max=*/false);
  double c1 = 0.0;
  for (std::int64_t m : e.sample_counts()) {
    c1 += std::log(2.0 * std::sqrt(static_cast<double>(m)));
  }
  const double n = static_cast<double>(e.size());
  const double outer =
      (mb.meta_kl + std::log(4.0 * std::sqrt(n) / mb.delta)) / maurer.denominator(n);
  return clamp_meta(meta_task_kl_raw(e, mb.c_rho() + c1, outer), BoundKind::MetaTaskKl,
                    mb.delta);
}

BoundResult meta_sample_kl(const Ensemble& e, const MetaBudget& mb,
                           const MaurerOptions& maurer) {
  validate_meta(e, mb, /*needs_m_max=*/true);
  const double M = static_cast<double>(e.total_samples());
  const double c2 = std::log(2.0 * std::sqrt(M));
  const double n = static_cast<double>(e.size());
  const double inner = (mb.c_rho() + c2) / M;
  const double outer =
      (mb.meta_kl + std::log(4.0 * std::sqrt(n) / mb.delta)) / maurer.denominator(n);
  return clamp_meta(meta_sample_kl_raw(e, mb.m_max, inner, outer), BoundKind::MetaSampleKl,
                    mb.delta);
}

BoundResult meta_task_catoni(const Ensemble& e, const MetaBudget& mb,
                             const std::vector<double>& inner_lambdas, double outer_lambda) {
  validate_meta(e, mb, /*needs_m_max=*/false);
  if (!(outer_lambda > 0.0)) {
    throw std::invalid_argument("meta_task_catoni: outer lambda must be > 0");
  }
  const SolveReport rep =
      maximize_catoni_multi(e, e.empirical_risks(), mb.c_rho(), inner_lambdas);
  const double inner = std::min(1.0, std::max(0.0, rep.optimum));
  const double n = static_cast<double>(e.size());
  const double rhs_out = inner + (mb.meta_kl + std::log(2.0 / mb.delta)) / outer_lambda;
  const double raw = rhs_out >= 1.0 ? 1.0 : phi_inv(outer_lambda / n, rhs_out);
  BoundResult r = clamp_meta(raw, BoundKind::MetaTaskCatoni, mb.delta);
  r.diag.solver_iterations = rep.iterations;
  return r;
}

BoundResult meta_sample_catoni(const Ensemble& e, const MetaBudget& mb, double inner_lambda,
                               double outer_lambda) {
  validate_meta(e, mb, /*needs_m_max=*/true);
  if (!(inner_lambda > 0.0) || !(outer_lambda > 0.0)) {
    throw std::invalid_argument("meta_sample_catoni: lambdas must be > 0");
  }
  const double M = static_cast<double>(e.total_samples());
  const double n = static_cast<double>(e.size());
  const double rhs_in = e.sample_centric_empirical() + mb.c_rho() / inner_lambda;
  const double inner = rhs_in >= 1.0 ? 1.0 : phi_inv(inner_lambda / M, rhs_in);
  const double scaled = M / (n * static_cast<double>(mb.m_max)) * inner;
  const double rhs_out = scaled + (mb.meta_kl + std::log(2.0 / mb.delta)) / outer_lambda;
  const double raw = rhs_out >= 1.0 ? 1.0 : phi_inv(outer_lambda / n, rhs_out);
  return clamp_meta(raw, BoundKind::MetaSampleCatoni, mb.delta);
}

}  // namespace pacbound
