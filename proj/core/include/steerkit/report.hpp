#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "steerkit/scenarios.hpp"

namespace steerkit {

inline constexpr std::string_view kToolVersion = "1.0.0";

using ParameterValue = std::variant<double, std::uint64_t, std::string>;

using Record = std::variant<SteeringValue, GenuineSteeringReport, ThresholdResult, EavesdropRecord, ShotEstimate,
                            CollectiveSteeringReport, MonogamyRecord, SecretSharingReport, SweepRecord>;

struct RunReport {
  std::string tool_version{kToolVersion};
  std::string scenario;
  std::map<std::string, ParameterValue> parameters;
  std::vector<Record> records;
  /// Only emitted when requested, so that repeated runs stay byte-identical.
  std::optional<double> wall_time_s;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// One JSON object per line: a {"kind":"run"} header, then one line per
/// record. Doubles are written in shortest round-trip form.
std::string to_json_lines(const RunReport& report);

/// Inverse of to_json_lines. Throws std::invalid_argument on malformed input.
RunReport parse_json_lines(std::string_view text);

/// Header row then flat rows. Columns, in order:
///   kind,criterion,group,target,parameter,parameter_value,value,bound,
///   verdict,value_2,value_3,method
/// Numbers use 17 significant digits. Groups are space-separated site lists;
/// monogamy rows use "A|C". Composite records expand into their parts.
std::string to_csv(const RunReport& report);

/// Reads a sweep description:
///   {"backend": "qubit", "scenario": "ghz", "parameter": "noise_p",
///    "grid": [0.5, 0.75, 1.0] | "0.5:1:0.25", "criterion": "two-obs",
///    "policy": "marginal-mean", "fixed": {"n": 3}, "seed": 1, "shots": 0}
/// Only "scenario", "parameter" and "grid" are required; "backend" defaults
/// to the scenario's. The result is validated.
SweepConfig parse_sweep_config(std::string_view text);

inline constexpr std::string_view kCsvHeader =
    "kind,criterion,group,target,parameter,parameter_value,value,bound,verdict,value_2,value_3,method";

} // namespace steerkit
