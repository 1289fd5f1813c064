#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "pacbound/bounds.hpp"
#include "pacbound/rng.hpp"
#include "pacbound/verify.hpp"

using namespace pacbound;

TEST_CASE("mgf exact enumeration: forced value at a single sample") {
  // One Bernoulli sample, lambda = 1: both outcomes contribute exactly 1,
  // saturating the 2 sqrt(t) envelope at t = 1.
  for (const double mu : {0.1, 0.37, 0.5, 0.9}) {
    CHECK(mgf_unbalanced_exact(MgfSpec{{1}, mu, 1.0}) == 2.0);
  }
}

TEST_CASE("mgf exact enumeration: binomial kl envelope") {
  for (int t = 1; t <= 25; ++t) {
    const double envelope = 2.0 * std::sqrt(static_cast<double>(t));
    for (int mu_c = 1; mu_c <= 99; mu_c += 7) {
      const double v = mgf_unbalanced_exact(MgfSpec{{t}, mu_c / 100.0, double(t)});
      CHECK(v <= envelope * (1.0 + 1e-12));
      CHECK(v >= 1.0);
    }
  }
}

TEST_CASE("mgf exact enumeration: degenerate mu") {
  CHECK(mgf_unbalanced_exact(MgfSpec{{3, 2}, 0.0, 2.0}) == doctest::Approx(1.0));
  CHECK(mgf_unbalanced_exact(MgfSpec{{3, 2}, 1.0, 2.0}) == doctest::Approx(1.0));
}

TEST_CASE("mgf blow-up beyond the smallest task size") {
  std::vector<double> values;
  for (const double mu : {1e-2, 1e-4, 1e-6}) {
    values.push_back(mgf_unbalanced_exact(MgfSpec{{1, 2}, mu, 2.0}));
  }
  CHECK(values[0] < values[1]);
  CHECK(values[1] < values[2]);
  CHECK(values[2] > 1e3);
  // Pinned by the enumeration oracle.
  CHECK(values[0] == doctest::Approx(128.630050505).epsilon(1e-9));
  CHECK(values[1] == doctest::Approx(12735.6485649).epsilon(1e-9));
  CHECK(values[2] == doctest::Approx(1273438.77344).epsilon(1e-9));

  // At lambda = m_min the same sweep stays bounded.
  for (const double mu : {1e-2, 1e-4, 1e-6}) {
    CHECK(mgf_unbalanced_exact(MgfSpec{{1, 2}, mu, 1.0}) <= 4.0 * std::sqrt(2.0));
  }
}

TEST_CASE("mgf enumeration cap and validation") {
  MgfSpec big;
  big.task_sizes = {20, 20};
  big.mu = 0.3;
  big.multiplier = 1.0;
  CHECK_THROWS_AS(mgf_unbalanced_exact(big), std::invalid_argument);
  CHECK_THROWS_AS(mgf_unbalanced_exact(MgfSpec{{2}, 1.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(mgf_unbalanced_exact(MgfSpec{{2}, 0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("monte carlo mgf agrees with exact enumeration within 3 SE") {
  const MgfSpec spec{{3, 5}, 0.3, 2.0};
  const double exact = mgf_unbalanced_exact(spec);
  const McEstimate est = mgf_unbalanced_mc(spec, 200000, 99);
  CHECK(std::fabs(est.mean - exact) <= 3.0 * est.std_error);
}

TEST_CASE("catoni mgf expectation never exceeds one") {
  // Degenerate ends.
  CHECK(mgf_catoni_check({4, 6}, {0.0, 0.0}, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mgf_catoni_check({4, 6}, {1.0, 1.0}, 2.0) <= 1.0 + 1e-12);

  // Random small instances; the generalized Catoni lemma is an identity, so
  // the enumeration should sit at 1 up to rounding.
  SplitRng rng(71, 0);
  for (int i = 0; i < 100; ++i) {
    const int n = static_cast<int>(rng.uniform_int(1, 4));
    std::vector<std::int64_t> sizes(n);
    std::vector<double> mus(n);
    for (int k = 0; k < n; ++k) {
      sizes[k] = rng.uniform_int(1, 5);
      mus[k] = rng.uniform();
    }
    const double lambda = 0.2 + rng.uniform() * 4.0;
    const double v = mgf_catoni_check(sizes, mus, lambda);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v > 0.0);
  }
}

TEST_CASE("binomial upper confidence bound") {
  // Zero successes: closed form 1 - alpha^(1/T).
  const double u0 = binomial_upper_ci(0, 2000, 0.99);
  CHECK(u0 == doctest::Approx(1.0 - std::pow(0.01, 1.0 / 2000.0)).epsilon(1e-9));
  CHECK(binomial_upper_ci(2000, 2000, 0.99) == 1.0);
  // Monotone in successes.
  CHECK(binomial_upper_ci(10, 2000, 0.99) > binomial_upper_ci(5, 2000, 0.99));
  // The bound really covers: at p = upper, P(X <= v) == alpha.
  const double v = binomial_upper_ci(3, 100, 0.99);
  CHECK(v > 3.0 / 100.0);
  CHECK(v < 0.2);
}

TEST_CASE("grid oracle trivial cases") {
  // No constraints: the box corner.
  CHECK(grid_oracle({}, ObjectiveWeights::uniform(2), 1e-3) == 1.0);

  // Zero budget: only the empirical point is feasible (anchored grid).
  const RiskConstraint c = RiskConstraint::task_kl({250, 150}, {0.2, 0.3}, 0.0);
  const double v = grid_oracle({c}, ObjectiveWeights::uniform(2), 1e-3);
  CHECK(v == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(grid_oracle({c}, ObjectiveWeights::uniform(2), 0.5),
                  std::invalid_argument);
}

TEST_CASE("coverage: degenerate zero-risk generator never violates") {
  CoverageConfig cfg;
  cfg.family = BoundFamily::TaskKl;
  cfg.n_tasks = 3;
  cfg.m_lo = 10;
  cfg.m_hi = 50;
  cfg.fixed_risk = true;
  cfg.risk_param = 0.0;
  cfg.delta = 0.05;
  const CoverageReport rep = coverage_test(cfg, 200, 7);
  CHECK(rep.violations == 0);
  CHECK(rep.trials == 200);
}

TEST_CASE("coverage: task and sample families stay within delta at 99%") {
  for (const BoundFamily family :
       {BoundFamily::StandardRate, BoundFamily::TaskKl, BoundFamily::SampleKl,
        BoundFamily::SampleCatoni}) {
    CoverageConfig cfg;
    cfg.family = family;
    cfg.n_tasks = 4;
    cfg.m_lo = 20;
    cfg.m_hi = 100;
    cfg.fixed_risk = false;
    cfg.risk_param = 0.3;
    cfg.delta = 0.05;
    const CoverageReport rep = coverage_test(cfg, 400, 11);
    CHECK(rep.binomial_ci_upper <= 0.05);
  }
}

TEST_CASE("coverage: positive synthetic budget only loosens the bounds") {
  CoverageConfig cfg;
  cfg.family = BoundFamily::SampleKl;
  cfg.n_tasks = 4;
  cfg.m_lo = 20;
  cfg.m_hi = 100;
  cfg.fixed_risk = true;
  cfg.risk_param = 0.2;
  cfg.delta = 0.05;
  const CoverageReport base = coverage_test(cfg, 300, 13);
  cfg.kl_budget = 5.0;
  const CoverageReport looser = coverage_test(cfg, 300, 13);
  CHECK(looser.violations <= base.violations);
}

TEST_CASE("coverage: meta families with a synthetic environment") {
  for (const BoundFamily family : {BoundFamily::MetaTaskKl, BoundFamily::MetaSampleKl}) {
    CoverageConfig cfg;
    cfg.family = family;
    cfg.n_tasks = 5;
    cfg.delta = 0.05;
    cfg.env = {{30, 0.10}, {60, 0.25}, {120, 0.05}, {240, 0.15}};
    cfg.m_max = 240;
    const CoverageReport rep = coverage_test(cfg, 300, 17);
    CHECK(rep.binomial_ci_upper <= 0.05);
  }
}

TEST_CASE("coverage config validation") {
  CoverageConfig cfg;
  cfg.family = BoundFamily::MetaTaskKl;
  CHECK_THROWS_AS(coverage_test(cfg, 10, 1), std::invalid_argument);  // empty env
  cfg.family = BoundFamily::TaskKl;
  cfg.m_lo = 10;
  cfg.m_hi = 5;
  CHECK_THROWS_AS(coverage_test(cfg, 10, 1), std::invalid_argument);
}
