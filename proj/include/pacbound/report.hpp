#pragma once

#include <string>

#include "pacbound/instance.hpp"
#include "pacbound/unionbound.hpp"

#include <json.hpp>

namespace pacbound {

/// Rounds to 12 significant digits; report values go through this so that
/// identical runs serialize byte-identically regardless of how they were
/// computed in parallel.
double round_sig12(double v);

nlohmann::json diagnostics_to_json(const Diagnostics& d);
nlohmann::json bound_to_json(const BoundResult& r);
nlohmann::json member_to_json(const SuiteMember& m, double total_delta);
nlohmann::json instance_summary(const InstanceFile& inst, const Ensemble& e);

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string dump_report(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace pacbound
