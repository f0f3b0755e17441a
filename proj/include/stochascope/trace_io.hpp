#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "stochascope/sa_factor.hpp"
#include "stochascope/solvers.hpp"

namespace stochascope {

// Shortest exact decimal representation trick is not needed; %.17g
// round-trips every double and keeps command output byte-stable.
std::string format_double17(double v);

// CSV schemas are versioned; the schema string is the first comment line of
// every file.
inline constexpr const char* kTraceCsvSchema = "# stochascope-csv v1 trace";
inline constexpr const char* kSaCurveCsvSchema = "# stochascope-csv v1 sa-curve";

std::string trace_to_csv(const Trace& trace);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

nlohmann::ordered_json trace_to_json(const Trace& trace);

nlohmann::ordered_json solver_config_to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const nlohmann::ordered_json& j);

// One row per (K, scheme); fixed documented columns.
std::string sa_reports_to_csv(std::span<const SAReport> reports);
void write_sa_reports_csv(const std::filesystem::path& path, std::span<const SAReport> reports);

nlohmann::ordered_json sa_report_to_json(const SAReport& report);

void write_json_atomic(const std::filesystem::path& path, const nlohmann::ordered_json& j);
nlohmann::ordered_json read_json(const std::filesystem::path& path);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace stochascope
