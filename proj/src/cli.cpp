#include "pacbound/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pacbound/instance.hpp"
#include "pacbound/klmath.hpp"
#include "pacbound/report.hpp"
#include "pacbound/rng.hpp"

namespace pacbound {

namespace {

using nlohmann::json;

void apply_workers(int workers) {
  if (workers > 0) omp_set_num_threads(workers);
}

struct BoundSelection {
  bool standard = false;
  bool kl = false;
  bool catoni = false;
};

BoundSelection parse_bounds(const std::vector<std::string>& names) {
  BoundSelection sel;
  for (const std::string& b : names) {
    if (b == "standard") {
      sel.standard = true;
    } else if (b == "kl") {
      sel.kl = true;
    } else if (b == "catoni") {
      sel.catoni = true;
    } else {
      throw std::invalid_argument("unknown bound selection: " + b +
                                  " (expected standard, kl, catoni)");
    }
  }
  if (!sel.standard && !sel.kl && !sel.catoni) {
    throw std::invalid_argument("bound selection is empty");
  }
  return sel;
}

LambdaGrid resolve_grid(const std::string& spec, RiskView view, const Ensemble& e) {
  const double scale = view == RiskView::TaskCentric
                           ? static_cast<double>(e.size()) * e.harmonic_mean()
                           : static_cast<double>(e.total_samples());
  if (spec == "exp") return LambdaGrid::exponential(scale);
  if (spec == "linear") return LambdaGrid::linear_fraction(scale);
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) {
      throw std::invalid_argument("invalid lambda grid entry: " + tok);
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw std::invalid_argument("lambda grid spec is empty: " + spec);
  }
  return LambdaGrid::custom(std::move(values));
}

json suite_to_json(const SuiteResult& suite, double total_delta) {
  json members = json::array();
  for (const SuiteMember& m : suite.members) {
    members.push_back(member_to_json(m, total_delta));
  }
  json j;
  j["bounds"] = std::move(members);
  j["joint"] = suite.joint ? bound_to_json(*suite.joint) : json(nullptr);
  j["pointwise_min"] = round_sig12(suite.pointwise_min);
  j["best"] = json{{"kind", to_string(suite.best.kind)},
                   {"value", round_sig12(suite.best.value)}};
  return j;
}

json meta_bounds_json(const Ensemble& e, const MetaBudget& mb, const MaurerOptions& maurer) {
  const double scale = static_cast<double>(e.size()) * e.harmonic_mean();
  const std::vector<double> inner_lambdas(e.size(), scale);
  const double outer_lambda = static_cast<double>(e.size());
  return json{
      {"task_kl", bound_to_json(meta_task_kl(e, mb, maurer))},
      {"sample_kl", bound_to_json(meta_sample_kl(e, mb, maurer))},
      {"task_catoni", bound_to_json(meta_task_catoni(e, mb, inner_lambdas, outer_lambda))},
      {"sample_catoni", bound_to_json(meta_sample_catoni(
                            e, mb, static_cast<double>(e.total_samples()), outer_lambda))},
  };
}

json compute_report_json(const InstanceFile& inst, const CommonOptions& common,
                         bool* solver_converged) {
  const Ensemble e = inst.ensemble();
  const ComplexityBudget b = inst.budget();
  const BoundSelection sel = parse_bounds(common.bounds);
  const MaurerOptions maurer{common.maurer_2m};
  const LambdaGrid grid = sel.catoni ? resolve_grid(common.lambda_grid, inst.view, e)
                                     : LambdaGrid::custom({});

  const SuiteResult suite = run_bound_suite(e, b, inst.view, grid, sel.kl, sel.standard, maurer);
  if (solver_converged != nullptr) *solver_converged = suite.solver_converged;

  json report;
  report["artifact"] = json{{"name", "pacbound"}, {"version", "0.1.0"}};
  report["instance"] = instance_summary(inst, e);
  json grid_json = json::array();
  for (double v : grid.values) grid_json.push_back(round_sig12(v));
  report["options"] = json{
      {"bounds", common.bounds},
      {"lambda_grid", std::move(grid_json)},
      {"maurer_denom", common.maurer_2m ? "2m" : "m"},
      {"seed", common.seed},
  };
  report["suite"] = suite_to_json(suite, b.delta());
  report["solver_converged"] = suite.solver_converged;

  if (e.size() == 1) {
    const std::int64_t m = e.sample_counts()[0];
    const double q = e.empirical_risks()[0];
    report["baselines"] =
        json{{"mcallester", bound_to_json(
                                single_task_mcallester(m, q, b.total_kl(), b.delta()))},
             {"maurer", bound_to_json(
                            single_task_maurer(m, q, b.total_kl(), b.delta(), maurer))}};
  }
  if (inst.meta) {
    report["meta_bounds"] = meta_bounds_json(e, *inst.meta_budget(), maurer);
  }
  return report;
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_text_file(path, content);
  }
}

}  // namespace

std::string compute_report_string(const ComputeOptions& opts, bool* solver_converged) {
  apply_workers(opts.common.workers);
  const InstanceFile inst = load_instance(opts.instance_path);
  return dump_report(compute_report_json(inst, opts.common, solver_converged));
}

int cmd_compute(const ComputeOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    bool converged = true;
    const std::string report = compute_report_string(opts, &converged);
    emit(report, opts.output_path, out);
    return converged ? kExitOk : kExitSolver;
  } catch (const SchemaError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
}

namespace {

struct SweepPoint {
  double value = 0.0;
  InstanceFile instance;
};

InstanceFile apply_sweep(const InstanceFile& base, const std::string& param, double value) {
  InstanceFile inst = base;
  if (param == "total_kl") {
    if (!(value >= 0.0)) throw std::invalid_argument("total_kl sweep values must be >= 0");
    inst.decomposed = false;
    inst.total_kl = value;
    inst.per_task_kl.clear();
  } else if (param == "empirical_risk_shift") {
    for (TaskStat& t : inst.tasks) {
      const double q = std::min(1.0, std::max(0.0, t.empirical_risk.value() + value));
      t.empirical_risk = Prob(q);
    }
  } else if (param.rfind("m_", 0) == 0) {
    const int k = std::stoi(param.substr(2));
    if (k < 1 || k > static_cast<int>(inst.tasks.size())) {
      throw std::invalid_argument("sweep parameter " + param + " is out of range");
    }
    const auto m = static_cast<std::int64_t>(value);
    if (m < 1 || static_cast<double>(m) != value) {
      throw std::invalid_argument("m_k sweep values must be positive integers");
    }
    inst.tasks[k - 1].sample_count = m;
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + param +
                                " (expected m_<k>, total_kl, empirical_risk_shift)");
  }
  return inst;
}

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  apply_workers(opts.common.workers);
  InstanceFile base;
  try {
    base = load_instance(opts.template_path);
    if (opts.values.empty()) {
      throw std::invalid_argument("sweep value list is empty");
    }
    parse_bounds(opts.common.bounds);

    const int npoints = static_cast<int>(opts.values.size());
    std::vector<SweepPoint> points(npoints);
    for (int i = 0; i < npoints; ++i) {
      points[i].value = opts.values[i];
      points[i].instance = apply_sweep(base, opts.param, opts.values[i]);
    }

    std::vector<json> point_reports(npoints);
    std::vector<char> converged(npoints, 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < npoints; ++i) {
      bool ok = true;
      point_reports[i] = compute_report_json(points[i].instance, opts.common, &ok);
      converged[i] = ok ? 1 : 0;
    }

    json report;
    report["artifact"] = json{{"name", "pacbound"}, {"version", "0.1.0"}};
    report["sweep"] = json{{"parameter", opts.param},
                           {"template", instance_summary(base, base.ensemble())}};
    json rows = json::array();
    std::string csv = "sweep_value,bound_kind,bound_value,empirical_risk\n";
    bool all_converged = true;

    for (int i = 0; i < npoints; ++i) {
      const json& pr = point_reports[i];
      const bool task_view = base.view == RiskView::TaskCentric;
      const double empirical =
          pr.at("instance")
              .at(task_view ? "task_centric_empirical" : "sample_centric_empirical")
              .get<double>();

      // Collapse the lambda grid to the best Catoni member for plotting.
      double best_catoni = 2.0, kl_value = -1.0, std_value = -1.0;
      for (const json& m : pr.at("suite").at("bounds")) {
        const std::string kind = m.at("kind").get<std::string>();
        const double v = m.at("value").get<double>();
        if (kind == "task_catoni" || kind == "sample_catoni") {
          best_catoni = std::min(best_catoni, v);
        } else if (kind == "task_kl" || kind == "sample_kl") {
          kl_value = v;
        } else if (kind == "standard_rate_task" || kind == "pinsker_sample") {
          std_value = v;
        }
      }
      const json& joint = pr.at("suite").at("joint");
      const double best = pr.at("suite").at("best").at("value").get<double>();

      json row;
      row["sweep_value"] = round_sig12(points[i].value);
      row["empirical_risk"] = round_sig12(empirical);
      json bounds;
      const auto add_row = [&](const std::string& kind, double v) {
        if (v < 0.0 || v > 1.5) return;
        bounds[kind] = round_sig12(v);
        csv += format_g12(points[i].value) + "," + kind + "," + format_g12(round_sig12(v)) +
               "," + format_g12(round_sig12(empirical)) + "\n";
      };
      add_row(task_view ? "standard_rate_task" : "pinsker_sample", std_value);
      add_row(task_view ? "task_kl" : "sample_kl", kl_value);
      add_row(task_view ? "task_catoni" : "sample_catoni", best_catoni);
      if (!joint.is_null()) add_row("joint_task", joint.at("value").get<double>());
      add_row("best", best);
      row["bounds"] = std::move(bounds);

      // Fast-vs-standard gap, the quantity the simplicity sweeps track.
      double fast = 2.0;
      if (kl_value >= 0.0) fast = std::min(fast, kl_value);
      if (best_catoni <= 1.0) fast = std::min(fast, best_catoni);
      if (!joint.is_null()) fast = std::min(fast, joint.at("value").get<double>());
      if (std_value >= 0.0 && fast <= 1.0) {
        row["gap_standard_minus_fast"] = round_sig12(std_value - fast);
      }
      rows.push_back(std::move(row));
      all_converged = all_converged && converged[i];
    }
    report["points"] = std::move(rows);
    report["solver_converged"] = all_converged;

    std::filesystem::create_directories(opts.out_dir);
    write_text_file(opts.out_dir + "/report.json", dump_report(report));
    write_text_file(opts.out_dir + "/sweep.csv", csv);
    out << "wrote " << opts.out_dir << "/report.json and " << opts.out_dir << "/sweep.csv\n";
    return all_converged ? kExitOk : kExitSolver;
  } catch (const std::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
}

json mgf_campaign(bool* ok) {
  *ok = true;
  json report;

  // Binomial kl MGF envelope: E[e^{t kl(Y/t|mu)}] <= 2 sqrt(t), with
  // equality exactly 2 at t = 1.
  {
    double worst_ratio = 0.0;
    bool holds = true;
    for (int t = 1; t <= 25; ++t) {
      const double envelope = 2.0 * std::sqrt(static_cast<double>(t));
      for (int mu_c = 1; mu_c <= 99; ++mu_c) {
        const MgfSpec spec{{t}, mu_c / 100.0, static_cast<double>(t)};
        const double value = mgf_unbalanced_exact(spec);
        worst_ratio = std::max(worst_ratio, value / envelope);
        holds = holds && value <= envelope * (1.0 + 1e-12);
      }
    }
    const double at_one = mgf_unbalanced_exact(MgfSpec{{1}, 0.37, 1.0});
    const bool equality = at_one == 2.0;
    holds = holds && equality;
    report["maurer_envelope"] = json{{"worst_ratio", round_sig12(worst_ratio)},
                                     {"equality_at_t1", equality},
                                     {"holds", holds}};
    *ok = *ok && holds;
  }

  // Generalized Catoni MGF: exact expectation <= 1 on random small instances.
  {
    bool holds = true;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      SplitRng rng(1234, static_cast<std::uint64_t>(i));
      const int n = static_cast<int>(rng.uniform_int(1, 4));
      std::vector<std::int64_t> sizes(n);
      std::vector<double> mus(n);
      std::int64_t left = 20 - n;
      for (int k = 0; k < n; ++k) {
        sizes[k] = 1 + rng.uniform_int(0, std::max<std::int64_t>(0, left / (n - k)));
        left -= sizes[k] - 1;
        mus[k] = rng.uniform();
      }
      const double lambda = 0.1 + rng.uniform() * 3.0 * n;
      const double value = mgf_catoni_check(sizes, mus, lambda);
      worst = std::max(worst, value);
      holds = holds && value <= 1.0 + 1e-12;
    }
    report["catoni_mgf"] = json{{"instances", 200},
                                {"worst_value", round_sig12(worst)},
                                {"holds", holds}};
    *ok = *ok && holds;
  }

  // Unbounded-MGF demonstration: n=2, m=(1,2). Above the smallest task size
  // the MGF blows up along mu -> 0; at lambda = m_min it stays bounded.
  {
    const std::vector<double> mus = {1e-2, 1e-4, 1e-6};
    std::vector<double> blowup, bounded;
    for (double mu : mus) {
      blowup.push_back(mgf_unbalanced_exact(MgfSpec{{1, 2}, mu, 2.0}));
      bounded.push_back(mgf_unbalanced_exact(MgfSpec{{1, 2}, mu, 1.0}));
    }
    const bool increasing = blowup[0] < blowup[1] && blowup[1] < blowup[2];
    const bool exceeds = blowup[2] > 1e3;
    const double envelope = 2.0 * std::sqrt(1.0) * 2.0 * std::sqrt(2.0);
    const bool stays_bounded = *std::max_element(bounded.begin(), bounded.end()) <= envelope;
    const bool holds = increasing && exceeds && stays_bounded;
    json values;
    for (std::size_t i = 0; i < mus.size(); ++i) {
      values.push_back(json{{"mu", mus[i]},
                            {"lambda2", round_sig12(blowup[i])},
                            {"lambda1", round_sig12(bounded[i])}});
    }
    report["mgf_blowup"] = json{{"values", std::move(values)},
                                {"increasing", increasing},
                                {"exceeds_1e3", exceeds},
                                {"bounded_at_lambda_mmin", stays_bounded},
                                {"holds", holds}};
    *ok = *ok && holds;
  }
  return report;
}

json coverage_campaign(const std::vector<BoundFamily>& families, std::int64_t trials,
                       double delta, std::uint64_t seed, bool* ok) {
  *ok = true;
  json report = json::array();
  for (BoundFamily family : families) {
    CoverageConfig cfg;
    cfg.family = family;
    cfg.delta = delta;
    cfg.n_tasks = 5;
    cfg.m_lo = 20;
    cfg.m_hi = 200;
    cfg.fixed_risk = false;
    cfg.risk_param = 0.3;
    if (family == BoundFamily::MetaTaskKl || family == BoundFamily::MetaSampleKl) {
      cfg.env = {{50, 0.10}, {100, 0.20}, {200, 0.05}, {400, 0.15}};
      cfg.m_max = 400;
    }
    const CoverageReport rep = coverage_test(cfg, trials, seed);
    const bool holds = rep.binomial_ci_upper <= delta;
    report.push_back(json{{"family", to_string(family)},
                          {"trials", rep.trials},
                          {"violations", rep.violations},
                          {"violation_rate", round_sig12(rep.violation_rate)},
                          {"ci99_upper", round_sig12(rep.binomial_ci_upper)},
                          {"delta", delta},
                          {"holds", holds}});
    *ok = *ok && holds;
  }
  return report;
}

json oracle_campaign(int instances_per_n, std::uint64_t seed, bool* ok) {
  *ok = true;
  json report = json::array();
  for (int n = 1; n <= 3; ++n) {
    const double step = n <= 2 ? 2e-4 : 2e-3;
    double worst_gap = 0.0;
    double worst_resid = 0.0;
    int failures = 0;
    for (int i = 0; i < instances_per_n; ++i) {
      SplitRng rng(seed, static_cast<std::uint64_t>(n) * 100000 + i);
      std::vector<TaskStat> stats(n);
      for (int k = 0; k < n; ++k) {
        stats[k].sample_count = rng.uniform_int(5, 300);
        stats[k].empirical_risk = Prob(rng.uniform() * 0.6);
      }
      const Ensemble e(std::move(stats));
      const ComplexityBudget b =
          ComplexityBudget::scalar(rng.uniform() * 5.0, 0.05);

      std::vector<RiskConstraint> cs;
      const int kind = i % 3;
      if (kind == 0 || kind == 2) {
        cs.push_back(build_task_kl_constraint(e, b));
      }
      if (kind == 1 || kind == 2) {
        const double c = 0.3 + rng.uniform() * 1.5;
        const std::vector<double> lambdas(n, c * n * e.harmonic_mean());
        cs.push_back(build_task_catoni_constraint(e, b, lambdas));
      }
      const ObjectiveWeights w = ObjectiveWeights::uniform(n);
      const SolveReport rep =
          cs.size() == 1 ? maximize_single_constraint(cs[0], w) : maximize_joint(cs, w);
      const double oracle = grid_oracle(cs, w, step);

      const double gap = std::fabs(rep.optimum - oracle);
      worst_gap = std::max(worst_gap, gap);
      double resid = 0.0;
      for (std::size_t k = 0; k < cs.size(); ++k) {
        resid = std::max(resid, cs[k].eval(rep.argmax) - cs[k].budget_rhs());
      }
      worst_resid = std::max(worst_resid, resid);
      if (gap > 1e-4 || resid > 1e-8) ++failures;
    }
    const bool holds = failures == 0;
    report.push_back(json{{"n", n},
                          {"instances", instances_per_n},
                          {"grid_step", step},
                          {"worst_gap", round_sig12(worst_gap)},
                          {"worst_residual", round_sig12(worst_resid)},
                          {"failures", failures},
                          {"holds", holds}});
    *ok = *ok && holds;
  }
  return report;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  apply_workers(opts.common.workers);
  try {
    std::int64_t trials = 2000;
    int instances_per_n = 50;
    double delta = 0.05;
    std::vector<BoundFamily> families = {
        BoundFamily::StandardRate,  BoundFamily::TaskKl,     BoundFamily::TaskCatoniGrid,
        BoundFamily::SampleKl,      BoundFamily::SampleCatoni,
        BoundFamily::MetaTaskKl,    BoundFamily::MetaSampleKl,
    };
    if (!opts.config_path.empty()) {
      std::ifstream in(opts.config_path);
      if (!in) throw std::invalid_argument("cannot open config: " + opts.config_path);
      json cfg;
      in >> cfg;
      if (cfg.contains("trials")) trials = cfg.at("trials").get<std::int64_t>();
      if (cfg.contains("instances_per_n")) {
        instances_per_n = cfg.at("instances_per_n").get<int>();
      }
      if (cfg.contains("delta")) delta = cfg.at("delta").get<double>();
      if (cfg.contains("families")) {
        families.clear();
        for (const auto& f : cfg.at("families")) {
          families.push_back(bound_family_from_string(f.get<std::string>()));
        }
      }
    }

    bool ok = true;
    json body;
    if (opts.suite == "mgf") {
      body = mgf_campaign(&ok);
    } else if (opts.suite == "coverage") {
      body = coverage_campaign(families, trials, delta, opts.common.seed, &ok);
    } else if (opts.suite == "oracle") {
      body = oracle_campaign(instances_per_n, opts.common.seed, &ok);
    } else {
      throw std::invalid_argument("unknown verify suite: " + opts.suite +
                                  " (expected coverage, mgf, oracle)");
    }

    json report;
    report["artifact"] = json{{"name", "pacbound"}, {"version", "0.1.0"}};
    report["suite"] = opts.suite;
    report["seed"] = opts.common.seed;
    report["passed"] = ok;
    report["results"] = std::move(body);
    emit(dump_report(report), opts.output_path, out);
    return ok ? kExitOk : kExitVerify;
  } catch (const std::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace pacbound
