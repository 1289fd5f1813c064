#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pacbound/verify.hpp"

#include <json.hpp>

namespace pacbound {

// Exit-code contract shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;   // report still written
inline constexpr int kExitVerify = 4;

struct CommonOptions {
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = library default
  bool maurer_2m = false;
  std::vector<std::string> bounds = {"standard", "kl", "catoni"};
  std::string lambda_grid = "exp";  // "exp", "linear", or comma-separated values
};

struct ComputeOptions {
  std::string instance_path;
  std::string output_path;  // empty = stdout
  CommonOptions common;
};

struct SweepOptions {
  std::string template_path;
  std::string param;  // "m_<k>", "total_kl", "empirical_risk_shift"
  std::vector<double> values;
  std::string out_dir;
  CommonOptions common;
};

struct VerifyOptions {
  std::string suite;  // "coverage", "mgf", "oracle"
  std::string config_path;  // optional
  std::string output_path;  // empty = stdout
  CommonOptions common;
};

int cmd_compute(const ComputeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

// Verification campaigns, also driven directly by the acceptance suite.
// Each returns its machine-readable report and sets ok=false when an
// assertion failed.
nlohmann::json mgf_campaign(bool* ok);
nlohmann::json coverage_campaign(const std::vector<BoundFamily>& families,
                                 std::int64_t trials, double delta, std::uint64_t seed,
                                 bool* ok);
nlohmann::json oracle_campaign(int instances_per_n, std::uint64_t seed, bool* ok);

// In-memory entry point used by cmd_compute and by tests that need the
// report bytes without touching the filesystem.
std::string compute_report_string(const ComputeOptions& opts, bool* solver_converged);

}  // namespace pacbound
