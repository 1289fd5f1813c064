#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "pacbound/ensemble.hpp"
#include "pacbound/unionbound.hpp"

#include <json.hpp>

namespace pacbound {

/// Schema violation with the JSON path where it happened.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& message)
      : std::runtime_error("at " + path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct MetaSpec {
  std::int64_t m_max = 1;
  double meta_kl = 0.0;
  double expected_inner_kl = 0.0;
};

/// A problem instance as read from disk. Unknown fields are rejected with
/// the offending location.
struct InstanceFile {
  std::vector<TaskStat> tasks;
  bool decomposed = false;
  double total_kl = 0.0;
  double hyper_kl = 0.0;
  std::vector<double> per_task_kl;
  double delta = 0.05;
  RiskView view = RiskView::TaskCentric;
  std::optional<MetaSpec> meta;

  Ensemble ensemble() const { return Ensemble(tasks); }
  ComplexityBudget budget() const;
  std::optional<MetaBudget> meta_budget() const;
};

InstanceFile parse_instance(const nlohmann::json& j);
InstanceFile load_instance(const std::string& path);

}  // namespace pacbound
