#pragma once

#include <cmath>
#include <stdexcept>

namespace pacbound {

/// Probability value, validated to lie in [0,1]. NaN is rejected.
class Prob {
 public:
  Prob() = default;
  explicit Prob(double v) : v_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("Prob: value must lie in [0,1]");
    }
  }
  double value() const { return v_; }
  friend bool operator==(const Prob&, const Prob&) = default;

 private:
  double v_ = 0.0;
};

/// Result of a Bernoulli KL evaluation. Nonnegative; +inf is a valid value
/// (second argument at the boundary with mismatched first argument).
struct KlValue {
  double value = 0.0;
  bool infinite() const { return std::isinf(value); }
};

// kl(q|p) = q log(q/p) + (1-q) log((1-q)/(1-p)), with 0 log 0 = 0 and
// x log(x/0) = +inf for x > 0. Never NaN for q, p in [0,1].
double kl_bernoulli(double q, double p);
KlValue kl_bernoulli(Prob q, Prob p);

// d/dp kl(q|p) = (p - q) / (p (1-p))
double kl_bernoulli_dp(double q, double p);

// sup{p in [q,1] : kl(q|p) <= budget}. Rejects negative budget.
double kl_inv_upper(double q, double budget);
Prob kl_inv_upper(Prob q, double budget);

// inf{p in [0,q] : kl(q|p) <= budget}. Rejects negative budget.
double kl_inv_lower(double q, double budget);
Prob kl_inv_lower(Prob q, double budget);

// Catoni transform Phi_a(p) = -(1/a) log(1 - p + p e^{-a}), a > 0.
// Lies in [0, p].
double phi(double a, double p);

// Unique p in [0,1] with phi(a, p) = target. Rejects target outside [0,1].
double phi_inv(double a, double target);

}  // namespace pacbound
