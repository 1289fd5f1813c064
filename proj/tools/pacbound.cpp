// pacbound — certified PAC-Bayesian risk bounds for unbalanced multi-task
// and meta-learning instances.
//
//   pacbound compute <instance.json> [--bounds ...] [--lambda-grid ...]
//                    [--maurer-denom m|2m] [-o report.json]
//   pacbound sweep <template.json> --param <name> --values <csv> [-o out/]
//   pacbound verify <coverage|mgf|oracle> [--config c.json] [--seed N]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pacbound/cli.hpp"

namespace {

void add_common(CLI::App* cmd, pacbound::CommonOptions* common, std::string* maurer_denom,
                std::string* bounds_csv) {
  cmd->add_option("--seed", common->seed, "Seed for randomized campaigns")
      ->envname("PACBOUND_SEED");
  cmd->add_option("--workers", common->workers, "Worker thread count (0 = default)")
      ->envname("PACBOUND_WORKERS");
  cmd->add_option("--lambda-grid", common->lambda_grid,
                  "Catoni lambda grid: exp, linear, or comma-separated values")
      ->envname("PACBOUND_LAMBDA_GRID");
  cmd->add_option("--maurer-denom", *maurer_denom, "kl budget denominator: m (default) or 2m")
      ->check(CLI::IsMember({"m", "2m"}));
  cmd->add_option("--bounds", *bounds_csv,
                  "Comma-separated bound families: standard,kl,catoni");
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string tok;
  std::stringstream ss(csv);
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

void finish_common(pacbound::CommonOptions* common, const std::string& maurer_denom,
                   const std::string& bounds_csv) {
  common->maurer_2m = maurer_denom == "2m";
  if (!bounds_csv.empty()) common->bounds = split_csv(bounds_csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified PAC-Bayesian generalization bounds for unbalanced multi-task "
               "and meta-learning"};
  app.require_subcommand(1);

  pacbound::ComputeOptions compute;
  std::string compute_maurer = "m", compute_bounds;
  CLI::App* c = app.add_subcommand("compute", "evaluate the bound suite on one instance");
  c->add_option("instance", compute.instance_path, "instance JSON file")->required();
  c->add_option("-o,--output", compute.output_path, "report path (default: stdout)");
  add_common(c, &compute.common, &compute_maurer, &compute_bounds);

  pacbound::SweepOptions sweep;
  std::string sweep_maurer = "m", sweep_bounds, sweep_values;
  CLI::App* s = app.add_subcommand("sweep", "evaluate the suite across a parameter sweep");
  s->add_option("template", sweep.template_path, "template instance JSON file")->required();
  s->add_option("--param", sweep.param, "m_<k>, total_kl, or empirical_risk_shift")
      ->required();
  s->add_option("--values", sweep_values, "comma-separated sweep values")->required();
  s->add_option("-o,--output", sweep.out_dir, "output directory")->default_val("out");
  add_common(s, &sweep.common, &sweep_maurer, &sweep_bounds);

  pacbound::VerifyOptions verify;
  std::string verify_maurer = "m", verify_bounds;
  CLI::App* v = app.add_subcommand("verify", "run a self-verification campaign");
  v->add_option("suite", verify.suite, "coverage, mgf, or oracle")->required();
  v->add_option("--config", verify.config_path, "campaign config JSON");
  v->add_option("-o,--output", verify.output_path, "report path (default: stdout)");
  add_common(v, &verify.common, &verify_maurer, &verify_bounds);

  CLI11_PARSE(app, argc, argv);

  if (c->parsed()) {
    finish_common(&compute.common, compute_maurer, compute_bounds);
    return pacbound::cmd_compute(compute, std::cout, std::cerr);
  }
  if (s->parsed()) {
    finish_common(&sweep.common, sweep_maurer, sweep_bounds);
    for (const std::string& tok : split_csv(sweep_values)) {
      try {
        sweep.values.push_back(std::stod(tok));
      } catch (const std::exception&) {
        std::cerr << "input error: invalid sweep value: " << tok << "\n";
        return pacbound::kExitInput;
      }
    }
    return pacbound::cmd_sweep(sweep, std::cout, std::cerr);
  }
  finish_common(&verify.common, verify_maurer, verify_bounds);
  return pacbound::cmd_verify(verify, std::cout, std::cerr);
}
