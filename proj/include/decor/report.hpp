#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "decor/attack.hpp"
#include "decor/metrics.hpp"

namespace decor {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct RunRecord {
  AttackReport attack;
  OverheadRecord overhead;
};

/// SOURCE_DATE_EPOCH when set, else 0, so reports are reproducible.
long long report_timestamp();

std::string report_json(const std::vector<RunRecord>& runs);
std::string report_csv(const std::vector<RunRecord>& runs);
std::vector<RunRecord> parse_report_json(std::string_view text);

/// Writes both files; I/O failures name the path.
void emit_report(const std::vector<RunRecord>& runs, const std::filesystem::path& json_path,
                 const std::filesystem::path& csv_path);

}  // namespace decor
