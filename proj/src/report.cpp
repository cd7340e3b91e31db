#include "convoscope/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "convoscope/error.hpp"

namespace convoscope {

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "";
    }
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string escaped = "\"";
    for (char c : field) {
        if (c == '"') {
            escaped += "\"\"";
        } else {
            escaped.push_back(c);
        }
    }
    escaped.push_back('"');
    return escaped;
}

std::string render_csv(const ReportTable& table) {
    std::string out = kReportVersionComment;
    out.push_back('\n');
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) {
            out.push_back(',');
        }
        out += csv_escape(table.columns[i]);
    }
    out.push_back('\n');
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out.push_back(',');
            }
            out += csv_escape(row[i]);
        }
        out.push_back('\n');
    }
    return out;
}

std::string render_json_lines(const ReportTable& table) {
    std::string out;
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i) {
            if (row[i].empty()) {
                obj[table.columns[i]] = nullptr;
            } else {
                obj[table.columns[i]] = row[i];
            }
        }
        out += obj.dump();
        out.push_back('\n');
    }
    return out;
}

std::filesystem::path write_table(const ReportTable& table, const std::filesystem::path& out_dir,
                                  ReportFormat format) {
    std::filesystem::path path =
        out_dir / (table.name + (format == ReportFormat::Csv ? ".csv" : ".jsonl"));
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write report '" + path.string() + "'");
    }
    out << (format == ReportFormat::Csv ? render_csv(table) : render_json_lines(table));
    return path;
}

} // namespace convoscope
