#include "pacbound/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace pacbound {

using nlohmann::json;

double round_sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

json diagnostics_to_json(const Diagnostics& d) {
  // Wall time stays out of the serialized report: reports must be
  // byte-identical across reruns of the same inputs.
  return json{
      {"solver_iterations", d.solver_iterations},
      {"constraint_residual", round_sig12(d.constraint_residual)},
      {"active_constraints", d.active_constraints},
  };
}

json bound_to_json(const BoundResult& r) {
  return json{
      {"kind", to_string(r.kind)},
      {"value", round_sig12(r.value)},
      {"delta_consumed", round_sig12(r.delta_consumed)},
      {"vacuous", r.vacuous},
      {"diagnostics", diagnostics_to_json(r.diag)},
  };
}

json member_to_json(const SuiteMember& m, double total_delta) {
  json j = bound_to_json(m.result);
  j["lambda"] = m.lambda > 0.0 ? json(round_sig12(m.lambda)) : json(nullptr);
  j["delta_share"] = json{{"num", m.delta_fraction.num},
                          {"den", m.delta_fraction.den},
                          {"value", round_sig12(total_delta * m.delta_fraction.value())}};
  return j;
}

json instance_summary(const InstanceFile& inst, const Ensemble& e) {
  json j{
      {"n", e.size()},
      {"total_samples", e.total_samples()},
      {"min_samples", e.min_samples()},
      {"harmonic_mean", round_sig12(e.harmonic_mean())},
      {"task_centric_empirical", round_sig12(e.task_centric_empirical())},
      {"sample_centric_empirical", round_sig12(e.sample_centric_empirical())},
      {"delta", round_sig12(inst.delta)},
      {"total_kl", round_sig12(inst.budget().total_kl())},
      {"view", inst.view == RiskView::TaskCentric ? "task" : "sample"},
      {"decomposed_budget", inst.decomposed},
  };
  if (inst.decomposed) {
    j["hyper_kl"] = round_sig12(inst.hyper_kl);
  }
  return j;
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace pacbound
