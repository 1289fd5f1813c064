#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "pacbound/klmath.hpp"
#include "pacbound/rng.hpp"

using namespace pacbound;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent inversion oracle: coarse dense scan followed by a localized
// 1e-9-step scan, never touching the bisection code under test.
double scan_kl_inv_upper(double q, double budget) {
  double best = q;
  for (double p = q; p <= 1.0; p += 1e-5) {
    if (kl_bernoulli(q, p) <= budget) best = p;
  }
  const double hi = std::min(1.0, best + 2e-5);
  for (double p = best; p <= hi; p += 1e-9) {
    if (kl_bernoulli(q, p) <= budget) best = p;
  }
  return best;
}

double scan_kl_inv_lower(double q, double budget) {
  double best = q;
  for (double p = q; p >= 1e-5; p -= 1e-5) {
    if (kl_bernoulli(q, p) <= budget) best = p;
  }
  const double lo = std::max(1e-9, best - 2e-5);
  for (double p = best; p >= lo; p -= 1e-9) {
    if (kl_bernoulli(q, p) <= budget) best = p;
  }
  return best;
}

}  // namespace

TEST_CASE("kl_bernoulli closed forms and conventions") {
  CHECK(kl_bernoulli(0.5, 0.5) == 0.0);
  CHECK(kl_bernoulli(0.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // High-precision evaluation of the definition as the oracle value.
  CHECK(kl_bernoulli(0.2, 0.4) == doctest::Approx(0.09151622184943568).epsilon(1e-12));

  CHECK(kl_bernoulli(0.0, 0.0) == 0.0);
  CHECK(kl_bernoulli(1.0, 1.0) == 0.0);
  CHECK(kl_bernoulli(0.3, 0.0) == kInf);
  CHECK(kl_bernoulli(0.3, 1.0) == kInf);
  CHECK(kl_bernoulli(1.0, 0.5) == doctest::Approx(std::log(2.0)));
  CHECK(!std::isnan(kl_bernoulli(0.0, 1.0)));
  CHECK(!std::isnan(kl_bernoulli(1.0, 0.0)));
}

TEST_CASE("kl_bernoulli is nonnegative with equality iff q == p") {
  for (int qi = 0; qi <= 100; ++qi) {
    for (int pi = 0; pi <= 100; ++pi) {
      const double q = qi / 100.0, p = pi / 100.0;
      const double v = kl_bernoulli(q, p);
      CHECK(v >= 0.0);
      if (qi == pi) {
        CHECK(v == 0.0);
      } else {
        CHECK(v > 0.0);
      }
    }
  }
}

TEST_CASE("kl_bernoulli monotone away from q and convex in p") {
  for (double q : {0.05, 0.3, 0.62, 0.9}) {
    for (double p = q; p + 1e-3 < 1.0; p += 1e-3) {
      CHECK(kl_bernoulli(q, p + 1e-3) > kl_bernoulli(q, p));
    }
    for (double p = q; p - 1e-3 > 0.0; p -= 1e-3) {
      CHECK(kl_bernoulli(q, p - 1e-3) > kl_bernoulli(q, p));
    }
  }
  SplitRng rng(7, 0);
  for (int i = 0; i < 2000; ++i) {
    const double q = rng.uniform();
    const double p1 = 0.001 + 0.998 * rng.uniform();
    const double p2 = 0.001 + 0.998 * rng.uniform();
    const double lhs = kl_bernoulli(q, 0.5 * (p1 + p2));
    const double rhs = 0.5 * (kl_bernoulli(q, p1) + kl_bernoulli(q, p2));
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("pinsker inequality on a dense grid") {
  for (int qi = 1; qi <= 99; ++qi) {
    for (int pi = 1; pi <= 99; ++pi) {
      const double q = qi / 100.0, p = pi / 100.0;
      CHECK(kl_bernoulli(q, p) >= 2.0 * (q - p) * (q - p) - 1e-15);
    }
  }
}

TEST_CASE("kl_inv_upper basics") {
  CHECK(kl_inv_upper(0.37, 0.0) == 0.37);
  CHECK(kl_inv_upper(0.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(kl_inv_upper(1.0, 5.0) == 1.0);
  CHECK(kl_inv_upper(0.3, kInf) == 1.0);
  CHECK_THROWS_AS(kl_inv_upper(0.3, -1e-9), std::invalid_argument);

  const double v = kl_inv_upper(0.2, 0.05);
  CHECK(v == doctest::Approx(0.34353570348609454).epsilon(1e-12));
  CHECK(v == doctest::Approx(scan_kl_inv_upper(0.2, 0.05)).epsilon(1e-8));
}

TEST_CASE("kl_inv_lower basics") {
  CHECK(kl_inv_lower(0.37, 0.0) == 0.37);
  CHECK(kl_inv_lower(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(kl_inv_lower(0.0, 3.0) == 0.0);
  CHECK_THROWS_AS(kl_inv_lower(0.3, -1e-9), std::invalid_argument);

  const double v = kl_inv_lower(0.5, 0.02);
  CHECK(v == doctest::Approx(0.40099171644796988).epsilon(1e-12));
  CHECK(v == doctest::Approx(scan_kl_inv_lower(0.5, 0.02)).epsilon(1e-8));
}

TEST_CASE("kl inversion round trip") {
  SplitRng rng(11, 0);
  for (int i = 0; i < 1000; ++i) {
    const double q = rng.uniform() * 0.98;
    const double b = 1e-4 + rng.uniform() * 3.0;
    const double p = kl_inv_upper(q, b);
    if (p < 1.0) {
      CHECK(std::fabs(kl_bernoulli(q, p) - b) <= 1e-9);
    }
  }
}

TEST_CASE("phi basics and range") {
  CHECK(phi(1.7, 0.0) == 0.0);
  CHECK(phi(0.01, 1.0) == 1.0);
  CHECK(phi(123.0, 1.0) == 1.0);
  CHECK(phi(0.5, 0.3) == doctest::Approx(0.25121896982826306).epsilon(1e-13));
  CHECK_THROWS_AS(phi(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(phi(-1.0, 0.5), std::invalid_argument);

  for (double a : {1e-8, 0.01, 0.5, 2.0, 40.0}) {
    for (int pi = 0; pi <= 100; ++pi) {
      const double p = pi / 100.0;
      const double v = phi(a, p);
      CHECK(v >= 0.0);
      CHECK(v <= p + 1e-15);
    }
  }
  // phi -> identity as a -> 0+.
  for (int pi = 0; pi <= 100; ++pi) {
    const double p = pi / 100.0;
    CHECK(std::fabs(phi(1e-8, p) - p) < 1e-6);
  }
}

TEST_CASE("phi_inv closed form and round trip") {
  CHECK(phi_inv(3.0, 0.0) == 0.0);
  CHECK(phi_inv(3.0, 1.0) == 1.0);
  CHECK(phi_inv(2.0, 0.4) == doctest::Approx(0.63686076834966743).epsilon(1e-13));
  CHECK(phi(2.0, phi_inv(2.0, 0.4)) == doctest::Approx(0.4).epsilon(1e-10));
  CHECK_THROWS_AS(phi_inv(2.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(phi_inv(2.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(phi_inv(0.0, 0.5), std::invalid_argument);

  SplitRng rng(13, 0);
  for (int i = 0; i < 500; ++i) {
    const double a = std::exp(rng.uniform() * 10.0 - 6.0);  // 2.5e-3 .. 55
    const double t = rng.uniform();
    const double p = phi_inv(a, t);
    CHECK(phi(a, p) == doctest::Approx(t).epsilon(1e-10));
  }
}

TEST_CASE("germain supremum over lambda approaches kl") {
  const std::pair<double, double> cases[] = {{0.1, 0.4}, {0.2, 0.35}, {0.02, 0.5}, {0.4, 0.8}};
  for (const auto& [q, p] : cases) {
    const double target = kl_bernoulli(q, p);
    double best = -kInf;
    for (int i = 0; i < 10000; ++i) {
      const double lam = std::pow(10.0, -4.0 + 7.0 * i / 9999.0);
      const double v = -std::log1p(p * std::expm1(-lam)) - lam * q;
      best = std::max(best, v);
      CHECK(v <= target + 1e-12);
    }
    CHECK(best == doctest::Approx(target).epsilon(1e-3));
    CHECK(best <= target);
  }
}

TEST_CASE("prob type validates") {
  CHECK_THROWS_AS(Prob(-0.001), std::invalid_argument);
  CHECK_THROWS_AS(Prob(1.001), std::invalid_argument);
  CHECK_THROWS_AS(Prob(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK(Prob(0.25).value() == 0.25);
  CHECK(kl_bernoulli(Prob(0.5), Prob(0.5)).value == 0.0);
  CHECK(kl_bernoulli(Prob(0.3), Prob(1.0)).infinite());
}
