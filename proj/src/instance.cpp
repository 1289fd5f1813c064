#include "pacbound/instance.hpp"

#include <fstream>
#include <set>

namespace pacbound {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw SchemaError(path, "unknown field '" + key + "'");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) {
    throw SchemaError(path, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

std::int64_t integer_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<std::int64_t>();
}

}  // namespace

ComplexityBudget InstanceFile::budget() const {
  if (decomposed) return ComplexityBudget::decomposed(hyper_kl, per_task_kl, delta);
  return ComplexityBudget::scalar(total_kl, delta);
}

std::optional<MetaBudget> InstanceFile::meta_budget() const {
  if (!meta) return std::nullopt;
  MetaBudget mb;
  mb.n_tasks = static_cast<int>(tasks.size());
  mb.m_max = meta->m_max;
  mb.meta_kl = meta->meta_kl;
  mb.expected_inner_kl = meta->expected_inner_kl;
  mb.delta = delta;
  return mb;
}

InstanceFile parse_instance(const json& j) {
  if (!j.is_object()) throw SchemaError("$", "instance must be a JSON object");
  reject_unknown(j, {"tasks", "budget", "delta", "view", "meta"}, "$");

  InstanceFile inst;

  const json& tasks = require(j, "tasks", "$");
  if (!tasks.is_array() || tasks.empty()) {
    throw SchemaError("$.tasks", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string path = "$.tasks[" + std::to_string(i) + "]";
    const json& t = tasks[i];
    if (!t.is_object()) throw SchemaError(path, "expected an object");
    reject_unknown(t, {"m", "empirical_risk"}, path);
    TaskStat stat;
    stat.sample_count = integer_at(require(t, "m", path), path + ".m");
    if (stat.sample_count < 1) throw SchemaError(path + ".m", "must be >= 1");
    const double q = number_at(require(t, "empirical_risk", path), path + ".empirical_risk");
    if (!(q >= 0.0 && q <= 1.0)) {
      throw SchemaError(path + ".empirical_risk", "must lie in [0,1]");
    }
    stat.empirical_risk = Prob(q);
    inst.tasks.push_back(stat);
  }

  const json& budget = require(j, "budget", "$");
  if (!budget.is_object()) throw SchemaError("$.budget", "expected an object");
  if (budget.contains("total_kl")) {
    reject_unknown(budget, {"total_kl"}, "$.budget");
    inst.decomposed = false;
    inst.total_kl = number_at(budget.at("total_kl"), "$.budget.total_kl");
    if (!(inst.total_kl >= 0.0)) throw SchemaError("$.budget.total_kl", "must be >= 0");
  } else if (budget.contains("hyper_kl")) {
    reject_unknown(budget, {"hyper_kl", "per_task_kl"}, "$.budget");
    inst.decomposed = true;
    inst.hyper_kl = number_at(require(budget, "hyper_kl", "$.budget"), "$.budget.hyper_kl");
    if (!(inst.hyper_kl >= 0.0)) throw SchemaError("$.budget.hyper_kl", "must be >= 0");
    const json& per = require(budget, "per_task_kl", "$.budget");
    if (!per.is_array() || per.size() != inst.tasks.size()) {
      throw SchemaError("$.budget.per_task_kl",
                        "expected an array with one entry per task");
    }
    for (std::size_t i = 0; i < per.size(); ++i) {
      const std::string path = "$.budget.per_task_kl[" + std::to_string(i) + "]";
      const double v = number_at(per[i], path);
      if (!(v >= 0.0)) throw SchemaError(path, "must be >= 0");
      inst.per_task_kl.push_back(v);
    }
  } else {
    throw SchemaError("$.budget", "expected either 'total_kl' or a decomposition");
  }

  inst.delta = number_at(require(j, "delta", "$"), "$.delta");
  if (!(inst.delta > 0.0 && inst.delta < 1.0)) {
    throw SchemaError("$.delta", "must lie strictly in (0,1)");
  }

  const json& view = require(j, "view", "$");
  if (!view.is_string()) throw SchemaError("$.view", "expected a string");
  const std::string view_s = view.get<std::string>();
  if (view_s == "task") {
    inst.view = RiskView::TaskCentric;
  } else if (view_s == "sample") {
    inst.view = RiskView::SampleCentric;
  } else {
    throw SchemaError("$.view", "expected 'task' or 'sample'");
  }

  if (j.contains("meta")) {
    const json& meta = j.at("meta");
    if (!meta.is_object()) throw SchemaError("$.meta", "expected an object");
    reject_unknown(meta, {"m_max", "meta_kl", "expected_inner_kl"}, "$.meta");
    MetaSpec ms;
    ms.m_max = integer_at(require(meta, "m_max", "$.meta"), "$.meta.m_max");
    ms.meta_kl = number_at(require(meta, "meta_kl", "$.meta"), "$.meta.meta_kl");
    ms.expected_inner_kl = number_at(require(meta, "expected_inner_kl", "$.meta"),
                                     "$.meta.expected_inner_kl");
    if (ms.m_max < 1) throw SchemaError("$.meta.m_max", "must be >= 1");
    if (!(ms.meta_kl >= 0.0)) throw SchemaError("$.meta.meta_kl", "must be >= 0");
    if (!(ms.expected_inner_kl >= 0.0)) {
      throw SchemaError("$.meta.expected_inner_kl", "must be >= 0");
    }
    for (const TaskStat& t : inst.tasks) {
      if (t.sample_count > ms.m_max) {
        throw SchemaError("$.meta.m_max", "smaller than a task sample count");
      }
    }
    inst.meta = ms;
  }
  return inst;
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("$", "cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_instance(j);
}

}  // namespace pacbound
