// The OpenMP kernels must reproduce their serial reference implementations
// bit for bit, for any worker count.

#include <omp.h>

#include <cmath>
#include <vector>

#include <doctest.h>

#include "pacbound/bounds.hpp"
#include "pacbound/verify.hpp"

using namespace pacbound;

TEST_CASE("mgf enumeration: parallel equals serial bitwise") {
  const MgfSpec specs[] = {
      {{1}, 0.37, 1.0},
      {{1, 2}, 1e-4, 2.0},
      {{5, 7, 9}, 0.21, 1.5},
      {{14, 15}, 0.66, 3.0},
  };
  for (const int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    for (const MgfSpec& spec : specs) {
      CHECK(mgf_unbalanced_exact(spec) == mgf_unbalanced_exact_serial(spec));
    }
  }
}

TEST_CASE("monte carlo mgf: parallel equals serial bitwise") {
  const MgfSpec spec{{40, 17}, 0.12, 5.0};
  const McEstimate ref = mgf_unbalanced_mc_serial(spec, 20000, 123);
  for (const int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const McEstimate est = mgf_unbalanced_mc(spec, 20000, 123);
    CHECK(est.mean == ref.mean);
    CHECK(est.std_error == ref.std_error);
  }
}

TEST_CASE("coverage: parallel equals serial for any worker count") {
  CoverageConfig cfg;
  cfg.family = BoundFamily::SampleKl;
  cfg.n_tasks = 4;
  cfg.m_lo = 20;
  cfg.m_hi = 80;
  cfg.risk_param = 0.3;
  cfg.delta = 0.05;
  const CoverageReport ref = coverage_test_serial(cfg, 500, 42);
  for (const int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const CoverageReport rep = coverage_test(cfg, 500, 42);
    CHECK(rep.violations == ref.violations);
    CHECK(rep.violation_rate == ref.violation_rate);
    CHECK(rep.binomial_ci_upper == ref.binomial_ci_upper);
  }
}

TEST_CASE("grid oracle: parallel equals serial bitwise") {
  const Ensemble e({TaskStat{250, Prob(0.2)}, TaskStat{150, Prob(0.25)}});
  const ComplexityBudget b = ComplexityBudget::scalar(5.0, 0.05);
  const RiskConstraint kl_c = build_task_kl_constraint(e, b);
  const RiskConstraint cat_c = build_task_catoni_constraint(e, b, {300.0, 400.0});
  const ObjectiveWeights w = ObjectiveWeights::uniform(2);

  const double ref_single = grid_oracle_serial({kl_c}, w, 1e-3);
  const double ref_joint = grid_oracle_serial({kl_c, cat_c}, w, 1e-3);
  for (const int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    CHECK(grid_oracle({kl_c}, w, 1e-3) == ref_single);
    CHECK(grid_oracle({kl_c, cat_c}, w, 1e-3) == ref_joint);
  }
}
