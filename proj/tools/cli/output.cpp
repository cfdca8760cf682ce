#include <cstdio>
#include <ostream>

#include "cli.hpp"

namespace qtrap::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string csv_cell(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

nlohmann::ordered_json json_cell(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return *l;
    if (const auto* d = std::get_if<double>(&c)) return *d;
    return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table, const RunConfig& config, const double* wall_seconds) {
    nlohmann::ordered_json doc;
    doc["metadata"]["tool"] = "qtrap";
    doc["metadata"]["version"] = kVersion;
    doc["metadata"]["config"] = config.to_json();
    if (wall_seconds) doc["metadata"]["wall_time_s"] = *wall_seconds;
    doc["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& c : row) r.push_back(json_cell(c));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    if (!table.summary.empty()) doc["summary"] = table.summary;
    out << doc.dump(2) << '\n';
}

}  // namespace qtrap::cli
