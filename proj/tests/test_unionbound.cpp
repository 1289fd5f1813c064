#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "pacbound/klmath.hpp"
#include "pacbound/rng.hpp"
#include "pacbound/unionbound.hpp"

using namespace pacbound;

namespace {

Ensemble scenario_c1() {
  return Ensemble({TaskStat{250, Prob(0.2)}, TaskStat{150, Prob(0.2)}});
}

ComplexityBudget budget_c1() { return ComplexityBudget::scalar(10.0, 0.05); }

Ensemble meta_ensemble() {
  std::vector<TaskStat> tasks;
  for (int i = 0; i < 20; ++i) {
    const auto m = static_cast<std::int64_t>(std::lround(50.0 + 450.0 * i / 19.0));
    tasks.push_back(TaskStat{m, Prob(0.1)});
  }
  return Ensemble(tasks);
}

MetaBudget meta_budget() {
  MetaBudget mb;
  mb.n_tasks = 20;
  mb.m_max = 500;
  mb.meta_kl = 2.0;
  mb.expected_inner_kl = 5.0;
  mb.delta = 0.05;
  return mb;
}

}  // namespace

TEST_CASE("fractions reduce and add exactly") {
  const Fraction a = Fraction::of(2, 26);
  CHECK(a.num == 1);
  CHECK(a.den == 13);
  Fraction sum{0, 1};
  for (int i = 0; i < 13; ++i) sum = sum + Fraction::of(1, 13);
  CHECK(sum == Fraction::of(1, 1));
  CHECK_THROWS_AS(Fraction::of(1, 0), std::invalid_argument);
}

TEST_CASE("lambda grid presets") {
  const LambdaGrid exp_grid = LambdaGrid::exponential(375.0);
  CHECK(exp_grid.values.size() == 11);
  CHECK(exp_grid.values.front() == doctest::Approx(3.75).epsilon(1e-12));
  CHECK(exp_grid.values.back() == doctest::Approx(37500.0).epsilon(1e-12));
  CHECK(std::is_sorted(exp_grid.values.begin(), exp_grid.values.end()));
  // Exponential spacing: constant ratio between neighbours.
  const double ratio = exp_grid.values[1] / exp_grid.values[0];
  for (std::size_t i = 2; i < exp_grid.values.size(); ++i) {
    CHECK(exp_grid.values[i] / exp_grid.values[i - 1] == doctest::Approx(ratio).epsilon(1e-10));
  }

  const LambdaGrid lin = LambdaGrid::linear_fraction(400.0);
  CHECK(lin.values.size() == 11);
  CHECK(lin.values.front() == doctest::Approx(200.0));
  CHECK(lin.values.back() == doctest::Approx(600.0));

  CHECK_THROWS_AS(LambdaGrid::custom({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LambdaGrid::custom({0.0}), std::invalid_argument);
}

TEST_CASE("suite delta accounting is exact") {
  const Ensemble e = scenario_c1();
  const ComplexityBudget b = budget_c1();
  const LambdaGrid grid = LambdaGrid::exponential(2.0 * e.harmonic_mean());
  const SuiteResult suite = run_bound_suite(e, b, RiskView::TaskCentric, grid, true, true);
  CHECK(suite.members.size() == 13);  // standard + kl + 11 lambdas
  Fraction total{0, 1};
  for (const SuiteMember& m : suite.members) total = total + m.delta_fraction;
  CHECK(total == Fraction::of(1, 1));
}

TEST_CASE("suite minimum never exceeds any member and joint participates") {
  const Ensemble e = scenario_c1();
  const ComplexityBudget b = budget_c1();
  const LambdaGrid grid = LambdaGrid::exponential(2.0 * e.harmonic_mean());
  const SuiteResult suite = run_bound_suite(e, b, RiskView::TaskCentric, grid, true, true);
  for (const SuiteMember& m : suite.members) {
    CHECK(suite.best.value <= m.result.value + 1e-15);
    CHECK(suite.pointwise_min <= m.result.value + 1e-15);
  }
  REQUIRE(suite.joint.has_value());
  CHECK(suite.best.value <= suite.joint->value + 1e-15);
  // The joint optimization of the intersection never loses to the pointwise
  // minimum over the same constraint members (standard-rate excluded).
  double member_min = 1.0;
  for (const SuiteMember& m : suite.members) {
    if (m.result.kind != BoundKind::StandardRateTask) {
      member_min = std::min(member_min, m.result.value);
    }
  }
  CHECK(suite.joint->value <= member_min + 1e-8);
}

TEST_CASE("sample-centric suite has no joint stage") {
  const Ensemble e = scenario_c1();
  const SuiteResult suite = run_bound_suite(e, budget_c1(), RiskView::SampleCentric,
                                            LambdaGrid::linear_fraction(400.0), true, true);
  CHECK(!suite.joint.has_value());
  CHECK(suite.members.size() == 13);
  for (const SuiteMember& m : suite.members) {
    CHECK(suite.best.value <= m.result.value + 1e-15);
  }
}

TEST_CASE("single-lambda suite without kl uses the full delta") {
  const Ensemble e = scenario_c1();
  const SuiteResult suite =
      run_bound_suite(e, budget_c1(), RiskView::TaskCentric,
                      LambdaGrid::custom({300.0}), false, false);
  CHECK(suite.members.size() == 1);
  CHECK(suite.members[0].delta_fraction == Fraction::of(1, 1));
  CHECK(suite.members[0].result.delta_consumed == doctest::Approx(0.05));
}

TEST_CASE("custom delta split rejects over-allocation") {
  const Ensemble e = scenario_c1();
  LambdaGrid grid = LambdaGrid::custom({100.0, 200.0});
  grid.delta_split = {Fraction::of(1, 2), Fraction::of(1, 2)};
  // Fine without other members.
  CHECK_NOTHROW(run_bound_suite(e, budget_c1(), RiskView::TaskCentric, grid, false, false));
  // Including kl on top of a fully allocated split must fail.
  CHECK_THROWS_AS(run_bound_suite(e, budget_c1(), RiskView::TaskCentric, grid, true, false),
                  std::invalid_argument);
  grid.delta_split = {Fraction::of(2, 3), Fraction::of(1, 2)};
  CHECK_THROWS_AS(run_bound_suite(e, budget_c1(), RiskView::TaskCentric, grid, false, false),
                  std::invalid_argument);
}

TEST_CASE("fast-rate suite beats the standard rate at small empirical risk") {
  std::vector<TaskStat> tasks;
  for (int i = 0; i < 8; ++i) {
    tasks.push_back(TaskStat{400 + 100 * i, Prob(0.02)});
  }
  const Ensemble e(tasks);
  const ComplexityBudget b = ComplexityBudget::scalar(5.0, 0.05);
  const LambdaGrid grid =
      LambdaGrid::exponential(static_cast<double>(e.size()) * e.harmonic_mean());
  const SuiteResult suite = run_bound_suite(e, b, RiskView::TaskCentric, grid, true, true);
  double standard = 1.0;
  for (const SuiteMember& m : suite.members) {
    if (m.result.kind == BoundKind::StandardRateTask) standard = m.result.value;
  }
  CHECK(suite.best.value < standard);
}

TEST_CASE("meta task kl pinned value and zero-budget collapse") {
  const Ensemble e = meta_ensemble();
  const BoundResult r = meta_task_kl(e, meta_budget());
  CHECK(r.value == doctest::Approx(0.61258054705439644).epsilon(1e-9));

  // Raw composition with all budgets zero collapses to the empirical mean.
  CHECK(meta_task_kl_raw(e, 0.0, 0.0) ==
        doctest::Approx(e.task_centric_empirical()).epsilon(1e-12));
}

TEST_CASE("meta sample kl pinned value and scaling") {
  const Ensemble e = meta_ensemble();
  const BoundResult r = meta_sample_kl(e, meta_budget());
  CHECK(r.value == doctest::Approx(0.47007067440861348).epsilon(1e-9));

  // Zero budgets: the raw outer stage sees the rescaled empirical risk.
  const double scaled = meta_sample_kl_raw(e, 500, 0.0, 0.0);
  const double expect = static_cast<double>(e.total_samples()) / (20.0 * 500.0) *
                        e.sample_centric_empirical();
  CHECK(scaled == doctest::Approx(expect).epsilon(1e-12));

  // All tasks at the max size: the scaling factor is one.
  std::vector<TaskStat> full(5, TaskStat{300, Prob(0.1)});
  const Ensemble ef(full);
  MetaBudget mb = meta_budget();
  mb.n_tasks = 5;
  mb.m_max = 300;
  CHECK(meta_sample_kl_raw(ef, 300, 0.0, 0.0) ==
        doctest::Approx(ef.sample_centric_empirical()).epsilon(1e-12));

  mb.m_max = 100;  // smaller than a task size
  CHECK_THROWS_AS(meta_sample_kl(ef, mb), std::invalid_argument);
}

TEST_CASE("meta catoni bounds: pinned values and degenerate cases") {
  const Ensemble e = meta_ensemble();
  const MetaBudget mb = meta_budget();
  const double scale = 20.0 * e.harmonic_mean();
  const std::vector<double> inner(20, scale);
  const BoundResult task = meta_task_catoni(e, mb, inner, 20.0);
  CHECK(task.value == doctest::Approx(0.58230895464856664).epsilon(1e-9));

  const BoundResult sample = meta_sample_catoni(
      e, mb, static_cast<double>(e.total_samples()), 20.0);
  CHECK(sample.value == doctest::Approx(0.48790868972809797).epsilon(1e-9));

  CHECK_THROWS_AS(meta_task_catoni(e, mb, inner, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(meta_sample_catoni(e, mb, 0.0, 20.0), std::invalid_argument);

  // n = 1: nested scalar inversions stay clamped in [0,1].
  const Ensemble single({TaskStat{50, Prob(0.2)}});
  MetaBudget mb1 = mb;
  mb1.n_tasks = 1;
  mb1.m_max = 50;
  const BoundResult nested = meta_task_catoni(single, mb1, {50.0}, 1.0);
  CHECK(nested.value >= 0.0);
  CHECK(nested.value <= 1.0);
}

TEST_CASE("meta kl bounds are monotone in the budget components") {
  const Ensemble e = meta_ensemble();
  const MetaBudget base = meta_budget();
  for (const bool sample : {false, true}) {
    const auto eval = [&](const MetaBudget& mb) {
      return sample ? meta_sample_kl(e, mb).value : meta_task_kl(e, mb).value;
    };
    MetaBudget more_meta = base;
    more_meta.meta_kl += 1.0;
    CHECK(eval(more_meta) >= eval(base));
    MetaBudget more_inner = base;
    more_inner.expected_inner_kl += 1.0;
    CHECK(eval(more_inner) >= eval(base));
  }
}

TEST_CASE("pinsker relaxation of the two meta stages dominates meta_task_kl") {
  SplitRng rng(61, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(2, 10));
    std::vector<TaskStat> tasks;
    for (int i = 0; i < n; ++i) {
      tasks.push_back(TaskStat{rng.uniform_int(10, 400), Prob(rng.uniform() * 0.4)});
    }
    const Ensemble e(tasks);
    MetaBudget mb;
    mb.n_tasks = n;
    mb.m_max = 400;
    mb.meta_kl = rng.uniform() * 3.0;
    mb.expected_inner_kl = rng.uniform() * 5.0;
    mb.delta = 0.05;

    double c1 = 0.0;
    for (std::int64_t m : e.sample_counts()) {
      c1 += std::log(2.0 * std::sqrt(static_cast<double>(m)));
    }
    const double nmh = static_cast<double>(n) * e.harmonic_mean();
    const double inner_pinsker =
        e.task_centric_empirical() + std::sqrt((mb.c_rho() + c1) / (2.0 * nmh));
    const double outer_budget =
        (mb.meta_kl + std::log(4.0 * std::sqrt(static_cast<double>(n)) / mb.delta)) / n;
    const double two_stage_pinsker =
        std::min(1.0, inner_pinsker + std::sqrt(outer_budget / 2.0));
    CHECK(two_stage_pinsker >= meta_task_kl(e, mb).value - 1e-12);
  }
}
