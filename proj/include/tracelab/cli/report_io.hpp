#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tracelab/check_report.hpp"

namespace tracelab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// 17 significant digits; non-finite values become "inf", "-inf" or "nan".
std::string format_double(double v);

nlohmann::json to_json(const CheckReport& report);

/// Pretty JSON with sorted keys and every float printed via format_double.
/// Non-finite floats are emitted as strings.
std::string canonical_dump(const nlohmann::json& doc);

/// {version, config, reports}.
nlohmann::json report_document(const nlohmann::json& config, const std::vector<CheckReport>& reports);

/// One row per residual: report,index,verdict,residual,value,tolerance.
std::string reports_to_csv(const std::vector<CheckReport>& reports);

/// Polyline plot of every series in the reports. Empty string when there
/// is nothing to draw.
std::string reports_to_svg(const std::vector<CheckReport>& reports, const std::string& title);

/// Writes to a sibling temporary file, then renames over path.
void write_file_atomically(const std::string& path, const std::string& content);

}  // namespace tracelab::cli
