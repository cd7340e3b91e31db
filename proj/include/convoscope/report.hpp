#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace convoscope {

// One report table; renders as CSV or JSON lines. Values are pre-formatted
// strings so both formats emit identical numbers.
struct ReportTable {
    std::string name; // file stem, e.g. "conversations"
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline constexpr const char* kReportVersionComment = "# convoscope-report v1";

enum class ReportFormat { Csv, JsonLines };

std::string render_csv(const ReportTable& table);
std::string render_json_lines(const ReportTable& table);

// Writes table.name + (".csv" | ".jsonl") into out_dir, returns the path.
std::filesystem::path write_table(const ReportTable& table, const std::filesystem::path& out_dir,
                                  ReportFormat format);

// Shortest round-trip decimal rendering; NaN renders as the empty string
// (null cell). Deterministic across runs and worker counts.
std::string format_double(double value);
std::string csv_escape(const std::string& field);

} // namespace convoscope
