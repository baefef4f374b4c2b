#pragma once

#include <string>
#include <string_view>

#include "varest/moments.hpp"
#include "varest/simulation.hpp"

namespace varest {

/// Identifier carried in every JSON report; bumped on incompatible changes.
inline constexpr std::string_view kReportSchema = "varest.simulation-report/1";

/// Stable JSON rendering of a report (keys in fixed order, shortest
/// round-trip doubles, null for undefined quantities).
[[nodiscard]] std::string report_to_json(const SimulationReport& report);

/// One header line plus one row per estimator.
[[nodiscard]] std::string report_to_csv(const SimulationReport& report);

/// DeltaTable JSON: an object with the six keys d400, d040, d004, d220,
/// d202, d022, all required finite numbers. Unknown keys are rejected.
[[nodiscard]] DeltaTable parse_delta_table_json(std::string_view text);
[[nodiscard]] DeltaTable load_delta_table(const std::string& path);
[[nodiscard]] std::string delta_table_to_json(const DeltaTable& table);

}  // namespace varest
