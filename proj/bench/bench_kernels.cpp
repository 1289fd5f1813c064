// Compares the OpenMP kernels against their serial reference implementations
// and reports wall times plus speedups.

#include <omp.h>

#include <cstdio>
#include <string>
#include <vector>

#include "pacbound/bounds.hpp"
#include "pacbound/verify.hpp"

using namespace pacbound;

namespace {

template <typename F>
double time_s(F&& f) {
  const double t0 = omp_get_wtime();
  f();
  return omp_get_wtime() - t0;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
  std::printf("%-22s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  identical %s\n", name,
              serial_s, parallel_s, serial_s / parallel_s, identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) omp_set_num_threads(std::stoi(argv[1]));
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    const MgfSpec spec{{15, 15}, 0.23, 4.0};
    double serial_v = 0.0, parallel_v = 0.0;
    double ts = time_s([&] {
      for (int i = 0; i < 2000; ++i) serial_v = mgf_unbalanced_exact_serial(spec);
    });
    double tp = time_s([&] {
      for (int i = 0; i < 2000; ++i) parallel_v = mgf_unbalanced_exact(spec);
    });
    report("mgf_enumeration", ts, tp, serial_v == parallel_v);
  }

  {
    const MgfSpec spec{{200, 170, 60}, 0.12, 50.0};
    McEstimate serial_e, parallel_e;
    double ts = time_s([&] { serial_e = mgf_unbalanced_mc_serial(spec, 400000, 7); });
    double tp = time_s([&] { parallel_e = mgf_unbalanced_mc(spec, 400000, 7); });
    report("mgf_monte_carlo", ts, tp,
           serial_e.mean == parallel_e.mean && serial_e.std_error == parallel_e.std_error);
  }

  {
    CoverageConfig cfg;
    cfg.family = BoundFamily::TaskKl;
    cfg.n_tasks = 5;
    cfg.m_lo = 20;
    cfg.m_hi = 200;
    cfg.risk_param = 0.3;
    cfg.delta = 0.05;
    CoverageReport serial_r, parallel_r;
    double ts = time_s([&] { serial_r = coverage_test_serial(cfg, 2000, 42); });
    double tp = time_s([&] { parallel_r = coverage_test(cfg, 2000, 42); });
    report("coverage_trials", ts, tp, serial_r.violations == parallel_r.violations);
  }

  {
    const Ensemble e({TaskStat{250, Prob(0.2)}, TaskStat{150, Prob(0.2)}});
    const ComplexityBudget b = ComplexityBudget::scalar(10.0, 0.05);
    const RiskConstraint kl_c = build_task_kl_constraint(e, b);
    const RiskConstraint cat_c = build_task_catoni_constraint(e, b, {300.0, 400.0});
    const ObjectiveWeights w = ObjectiveWeights::uniform(2);
    double serial_v = 0.0, parallel_v = 0.0;
    double ts = time_s([&] { serial_v = grid_oracle_serial({kl_c, cat_c}, w, 2e-4); });
    double tp = time_s([&] { parallel_v = grid_oracle({kl_c, cat_c}, w, 2e-4); });
    report("grid_oracle_2d", ts, tp, serial_v == parallel_v);
  }

  return 0;
}
