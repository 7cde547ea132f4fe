#pragma once

#include <string>

#include <json.hpp>

#include "bfsim/engine.hpp"
#include "bfsim/fabric.hpp"

namespace bfsim {

/// Serializes a run report (plus a caller-provided config echo) to the
/// report schema. sim times are computed from the report's ledger records
/// under the given cost model.
nlohmann::json report_to_json(const RunReport& report,
                              const nlohmann::json& config,
                              const ValidationReport& validation,
                              CostModelParams params);

/// CSV mirror of the per_level rows (header + one line per level).
std::string report_to_csv(const nlohmann::json& report_json);

/// Human-readable per-level frontier size table (vertex count plus raw
/// bitmap / sparse vector / wah sizes) with a totals row.
std::string frontier_table(const RunReport& report);

/// Removes the keys that legitimately differ between repetitions of the
/// same spec (wall-clock phase times, total wall time, TEPS). Two runs of
/// one spec must serialize identically after this.
void strip_volatile(nlohmann::json& report_json);

std::string dump_report(const nlohmann::json& report_json);

}  // namespace bfsim
