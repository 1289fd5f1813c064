#include "pacbound/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pacbound {

namespace {

constexpr double kCap = 0.99999999999999989;  // nextafter(1.0, 0.0)
constexpr int kInnerIters = 90;
constexpr int kDualIters = 200;
constexpr int kSweepCap = 500;

double dot(const std::vector<double>& w, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * p[i];
  return s;
}

void check_weights(const ObjectiveWeights& w, int n) {
  if (static_cast<int>(w.weights.size()) != n) {
    throw std::invalid_argument("ObjectiveWeights: dimension mismatch");
  }
  double s = 0.0;
  for (double wi : w.weights) {
    if (!(wi >= 0.0)) throw std::invalid_argument("ObjectiveWeights: weights must be >= 0");
    s += wi;
  }
  if (std::fabs(s - 1.0) > 1e-9) {
    throw std::invalid_argument("ObjectiveWeights: weights must sum to 1");
  }
}

// Maximizer of w*p - nu*g_i(p) for one constraint, i.e. the root of
// g_i'(p) = w/nu on the coordinate's interval. g_i' is increasing, so plain
// bisection converges; run it down to the bracket's floating-point floor.
double coord_argmax_single(const RiskConstraint& c, int i, double target) {
  if (c.is_kl()) {
    const double q = c.empirical_risks()[i];
    if (q >= 1.0) return 1.0;  // kl(1|p) only admits p = 1 on [q,1]
    if (!(target > 0.0)) return q;
    if (c.coord_deriv(i, kCap) <= target) return kCap;
    double lo = q, hi = kCap;
    for (int it = 0; it < kInnerIters; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (c.coord_deriv(i, mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  // Catoni: derivative spans [g'(0), g'(1)], both finite and positive.
  if (!(target > 0.0)) return 0.0;
  if (c.coord_deriv(i, 0.0) >= target) return 0.0;
  if (c.coord_deriv(i, 1.0) <= target) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < kInnerIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (c.coord_deriv(i, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Upper box edge used when clamping a coordinate: exact 1.0 is only
// representable in the argmax when every constraint stays finite there.
double upper_edge(const RiskConstraint& c, int i) {
  if (c.is_kl() && c.empirical_risks()[i] < 1.0) return kCap;
  return 1.0;
}

SolveReport vacuous_report(int n) {
  SolveReport rep;
  rep.optimum = 1.0;
  rep.argmax.assign(n, 1.0);
  rep.vacuous = true;
  rep.converged = false;
  return rep;
}

}  // namespace

ObjectiveWeights ObjectiveWeights::uniform(int n) {
  if (n < 1) throw std::invalid_argument("ObjectiveWeights::uniform: n must be >= 1");
  ObjectiveWeights w;
  w.weights.assign(n, 1.0 / n);
  return w;
}

ObjectiveWeights ObjectiveWeights::sample_weighted(const Ensemble& e) {
  ObjectiveWeights w;
  const double M = static_cast<double>(e.total_samples());
  w.weights.reserve(e.size());
  for (std::int64_t m : e.sample_counts()) {
    w.weights.push_back(static_cast<double>(m) / M);
  }
  return w;
}

SolveReport maximize_single_constraint(const RiskConstraint& c, const ObjectiveWeights& w) {
  const int n = c.dimension();
  check_weights(w, n);
  const double rhs = c.budget_rhs();
  SolveReport rep;
  rep.argmax.assign(n, 0.0);

  if (!c.feasible_at_empirical()) {
    // Only reachable with a negative right-hand side; the assembled theorem
    // budgets keep the empirical point (kl) or the origin (Catoni) feasible.
    return vacuous_report(n);
  }

  if (c.is_kl() && rhs <= 0.0) {
    rep.argmax = c.empirical_risks();
    rep.optimum = dot(w.weights, rep.argmax);
    rep.dual_multipliers = {0.0};
    rep.residuals = {c.eval(rep.argmax) - rhs};
    rep.converged = true;
    return rep;
  }

  // All-ones clamp: the whole box fits inside the constraint.
  {
    std::vector<double> top(n);
    for (int i = 0; i < n; ++i) top[i] = upper_edge(c, i);
    const double gtop = c.eval(top);
    if (gtop <= rhs) {
      rep.argmax = std::move(top);
      rep.optimum = dot(w.weights, rep.argmax);
      rep.dual_multipliers = {0.0};
      rep.residuals = {gtop - rhs};
      rep.boundary = true;
      rep.converged = true;
      return rep;
    }
  }

  std::vector<double> p(n);
  const auto eval_at = [&](double nu) {
    for (int i = 0; i < n; ++i) {
      p[i] = coord_argmax_single(c, i, w.weights[i] / nu);
    }
    return c.eval(p) - rhs;
  };

  // Bracket the multiplier; the residual is decreasing in nu.
  double nu_lo = 1e-12, nu_hi = 1e12;
  int iters = 0;
  while (eval_at(nu_lo) <= 0.0 && nu_lo > 1e-200) {
    nu_lo *= 1e-3;
    ++iters;
  }
  while (eval_at(nu_hi) > 0.0 && nu_hi < 1e200) {
    nu_hi *= 1e3;
    ++iters;
  }

  double resid_hi = eval_at(nu_hi);
  double nu = nu_hi;
  const double scale = std::max(1.0, std::fabs(rhs));
  for (int it = 0; it < kDualIters; ++it) {
    ++iters;
    const double mid = std::sqrt(nu_lo * nu_hi);  // bisection in log space
    if (!(mid > nu_lo && mid < nu_hi)) break;
    const double r = eval_at(mid);
    if (r > 0.0) {
      nu_lo = mid;
    } else {
      nu_hi = mid;
      resid_hi = r;
      nu = mid;
    }
    if (-nu_hi * resid_hi <= 1e-9 * scale && nu_hi / nu_lo < 1.0 + 1e-9) break;
  }

  const double final_resid = eval_at(nu);
  rep.argmax = p;
  rep.boundary = std::any_of(p.begin(), p.end(), [](double v) { return v >= kCap; });
  rep.optimum = dot(w.weights, rep.argmax);
  rep.dual_multipliers = {nu};
  rep.residuals = {final_resid};
  rep.duality_gap = std::max(0.0, -nu * final_resid);
  rep.iterations = iters;
  rep.converged = final_resid <= 1e-8 * scale && rep.duality_gap <= 1e-6;
  return rep;
}

SolveReport maximize_joint(const std::vector<RiskConstraint>& cs, const ObjectiveWeights& w) {
  if (cs.empty()) throw std::invalid_argument("maximize_joint: constraint list is empty");
  const int n = cs[0].dimension();
  for (const auto& c : cs) {
    if (c.dimension() != n) {
      throw std::invalid_argument("maximize_joint: constraints must share dimension");
    }
  }
  check_weights(w, n);
  const int K = static_cast<int>(cs.size());

  for (const auto& c : cs) {
    if (c.is_kl() && c.budget_rhs() < 0.0) return vacuous_report(n);
    if (!c.is_kl() && !c.feasible_at_empirical()) return vacuous_report(n);
  }

  // Zero-budget kl constraint pins p at the empirical point.
  for (const auto& c : cs) {
    if (c.is_kl() && c.budget_rhs() == 0.0) {
      SolveReport rep;
      rep.argmax = c.empirical_risks();
      for (const auto& ck : cs) {
        const double r = ck.eval(rep.argmax) - ck.budget_rhs();
        rep.residuals.push_back(r);
        if (r > 1e-12) return vacuous_report(n);
      }
      rep.optimum = dot(w.weights, rep.argmax);
      rep.dual_multipliers.assign(K, 0.0);
      rep.converged = true;
      return rep;
    }
  }

  // All-ones clamp across the whole set.
  {
    std::vector<double> top(n, 1.0);
    for (int i = 0; i < n; ++i) {
      for (const auto& c : cs) top[i] = std::min(top[i], upper_edge(c, i));
    }
    bool all_ok = true;
    std::vector<double> res(K);
    for (int k = 0; k < K; ++k) {
      res[k] = cs[k].eval(top) - cs[k].budget_rhs();
      all_ok = all_ok && res[k] <= 0.0;
    }
    if (all_ok) {
      SolveReport rep;
      rep.argmax = std::move(top);
      rep.optimum = dot(w.weights, rep.argmax);
      rep.dual_multipliers.assign(K, 0.0);
      rep.residuals = std::move(res);
      rep.boundary = true;
      rep.converged = true;
      return rep;
    }
  }

  std::vector<double> nu(K, 0.0);
  std::vector<double> p(n, 0.0);

  // Coordinate maximizer of w_i p - sum_k nu_k g_{k,i}(p) on [0,1]; the
  // derivative is decreasing, so bisection on its sign.
  const auto compute_p = [&]() {
    const auto deriv = [&](int i, double x) {
      double d = w.weights[i];
      for (int k = 0; k < K; ++k) {
        if (nu[k] > 0.0) d -= nu[k] * cs[k].coord_deriv(i, x);
      }
      return d;
    };
#pragma omp parallel for schedule(static) if (n >= 64)
    for (int i = 0; i < n; ++i) {
      double hi_edge = 1.0;
      for (const auto& c : cs) hi_edge = std::min(hi_edge, upper_edge(c, i));
      if (deriv(i, hi_edge) >= 0.0) {
        p[i] = hi_edge;
        continue;
      }
      if (deriv(i, 1e-300) <= 0.0) {
        p[i] = 0.0;
        continue;
      }
      double lo = 0.0, hi = hi_edge;
      for (int it = 0; it < kInnerIters; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (deriv(i, mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      p[i] = 0.5 * (lo + hi);
    }
  };

  const auto rho = [&](int k) { return cs[k].eval(p) - cs[k].budget_rhs(); };

  int iters = 0;
  double best_feasible = -1.0;
  std::vector<double> best_point;
  bool done = false;
  for (int sweep = 0; sweep < kSweepCap && !done; ++sweep) {
    for (int k = 0; k < K; ++k) {
      ++iters;
      const double scale_k = std::max(1.0, std::fabs(cs[k].budget_rhs()));
      nu[k] = 0.0;
      compute_p();
      if (rho(k) <= 0.0) continue;  // constraint slack at nu_k = 0
      double lo = 1e-12, hi = 1e12;
      nu[k] = lo;
      compute_p();
      while (rho(k) <= 0.0 && lo > 1e-200) {
        lo *= 1e-3;
        nu[k] = lo;
        compute_p();
      }
      nu[k] = hi;
      compute_p();
      while (rho(k) > 0.0 && hi < 1e200) {
        hi *= 1e3;
        nu[k] = hi;
        compute_p();
      }
      for (int it = 0; it < kDualIters; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break;
        nu[k] = mid;
        compute_p();
        const double r = rho(k);
        if (r > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
        if (std::fabs(r) <= 1e-11 * scale_k) break;
      }
      nu[k] = hi;
    }
    compute_p();
    bool feasible = true;
    double gap = 0.0;
    for (int k = 0; k < K; ++k) {
      const double r = rho(k);
      feasible = feasible && r <= 1e-9 * std::max(1.0, std::fabs(cs[k].budget_rhs()));
      gap += -nu[k] * std::min(r, 0.0);
    }
    if (feasible) {
      const double val = dot(w.weights, p);
      if (val > best_feasible) {
        best_feasible = val;
        best_point = p;
      }
      if (gap <= 1e-7) done = true;
    }
  }

  compute_p();
  SolveReport rep;
  rep.argmax = p;
  rep.dual_multipliers = nu;
  rep.iterations = iters;
  bool feasible = true;
  double gap = 0.0;
  int active = 0;
  double worst = 0.0;
  rep.residuals.resize(K);
  for (int k = 0; k < K; ++k) {
    rep.residuals[k] = rho(k);
    worst = std::max(worst, rep.residuals[k]);
    feasible = feasible &&
               rep.residuals[k] <= 1e-8 * std::max(1.0, std::fabs(cs[k].budget_rhs()));
    gap += -nu[k] * std::min(rep.residuals[k], 0.0);
    if (nu[k] > 1e-10) ++active;
  }
  rep.duality_gap = gap;
  rep.boundary = std::any_of(p.begin(), p.end(), [](double v) { return v >= kCap; });
  rep.optimum = dot(w.weights, p);
  rep.converged = feasible && gap <= 1e-6;

  if (!rep.converged) {
    // Valid fallback: the intersection optimum never exceeds any single
    // constraint's optimum.
    double fallback = 1.0;
    for (const auto& c : cs) {
      fallback = std::min(fallback, maximize_single_constraint(c, w).optimum);
    }
    rep.optimum = fallback;
    if (!best_point.empty()) rep.argmax = best_point;
  }
  return rep;
}

SolveReport maximize_catoni_multi(const Ensemble& e, const std::vector<double>& q,
                                  double budget, const std::vector<double>& lambdas) {
  const int n = e.size();
  if (static_cast<int>(q.size()) != n || static_cast<int>(lambdas.size()) != n) {
    throw std::invalid_argument("maximize_catoni_multi: dimension mismatch");
  }
  double rhs = budget;
  for (int i = 0; i < n; ++i) rhs += lambdas[i] * q[i] / n;
  const RiskConstraint c =
      RiskConstraint::task_catoni(e.sample_counts(), q, lambdas, rhs);
  return maximize_single_constraint(c, ObjectiveWeights::uniform(n));
}

}  // namespace pacbound
