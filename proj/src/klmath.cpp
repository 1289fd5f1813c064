#include "pacbound/klmath.hpp"

#include <limits>

namespace pacbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_prob_arg(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": argument must lie in [0,1]");
  }
}

}  // namespace

double kl_bernoulli(double q, double p) {
  // Each term is guarded so that log(0) never meets a zero coefficient:
  // q = 0 kills the first term before p is touched, and likewise for q = 1.
  double t1 = 0.0;
  if (q > 0.0) {
    t1 = (p > 0.0) ? q * (std::log(q) - std::log(p)) : kInf;
  }
  double t2 = 0.0;
  if (q < 1.0) {
    t2 = (p < 1.0) ? (1.0 - q) * (std::log1p(-q) - std::log1p(-p)) : kInf;
  }
  return t1 + t2;
}

KlValue kl_bernoulli(Prob q, Prob p) {
  return KlValue{kl_bernoulli(q.value(), p.value())};
}

double kl_bernoulli_dp(double q, double p) {
  return (p - q) / (p * (1.0 - p));
}

double kl_inv_upper(double q, double budget) {
  check_prob_arg(q, "kl_inv_upper");
  if (!(budget >= 0.0)) {
    throw std::invalid_argument("kl_inv_upper: budget must be >= 0");
  }
  if (budget == 0.0 || q == 1.0) return q == 1.0 ? 1.0 : q;
  if (std::isinf(budget)) return 1.0;

  double hi = std::nextafter(1.0, 0.0);
  if (kl_bernoulli(q, hi) <= budget) return 1.0;
  double lo = q;
  // Bisection until the bracket has no interior double. The kl slope blows
  // up near p -> 1, so a fixed p-tolerance would not keep the residual small.
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (kl_bernoulli(q, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Prob kl_inv_upper(Prob q, double budget) {
  return Prob(kl_inv_upper(q.value(), budget));
}

double kl_inv_lower(double q, double budget) {
  check_prob_arg(q, "kl_inv_lower");
  if (!(budget >= 0.0)) {
    throw std::invalid_argument("kl_inv_lower: budget must be >= 0");
  }
  if (budget == 0.0 || q == 0.0) return q == 0.0 ? 0.0 : q;
  if (std::isinf(budget)) return 0.0;

  double lo = std::numeric_limits<double>::min();
  if (kl_bernoulli(q, lo) <= budget) return lo;
  double hi = q;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (kl_bernoulli(q, mid) <= budget) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Prob kl_inv_lower(Prob q, double budget) {
  return Prob(kl_inv_lower(q.value(), budget));
}

double phi(double a, double p) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("phi: multiplier a must be > 0");
  }
  check_prob_arg(p, "phi");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  // 1 - p + p e^{-a} = 1 + p expm1(-a), kept in log1p form for small a.
  return -std::log1p(p * std::expm1(-a)) / a;
}

double phi_inv(double a, double target) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("phi_inv: multiplier a must be > 0");
  }
  if (!(target >= 0.0 && target <= 1.0)) {
    throw std::invalid_argument("phi_inv: target must lie in [0,1]");
  }
  if (target == 0.0) return 0.0;
  if (target == 1.0) return 1.0;

  double p = std::expm1(-a * target) / std::expm1(-a);
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;

  // The closed form can lose digits for a near 0; refine against the
  // monotone forward map when the residual is visible.
  double r = phi(a, p) - target;
  if (std::fabs(r) > 1e-12) {
    double lo = 0.0, hi = 1.0;
    if (r > 0.0) {
      hi = p;
    } else {
      lo = p;
    }
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (phi(a, mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    p = 0.5 * (lo + hi);
  }
  return p;
}

}  // namespace pacbound
