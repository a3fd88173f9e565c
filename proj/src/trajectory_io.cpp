#include "polykoop/trajectory_io.hpp"

#include "polykoop/error.hpp"

#include <charconv>
#include <cstdio>

namespace polykoop {

std::string write_trajectory(const Trajectory& traj, const std::vector<std::string>& names) {
    if (traj.size() > 0 && names.size() != traj.dim()) {
        throw DimensionError("write_trajectory: " + std::to_string(names.size()) + " names for " + std::to_string(traj.dim()) + " channels");
    }
    std::string out = "t";
    for (const auto& n : names) { out += "," + n; }
    out += '\n';
    char buf[40];
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.time(k));
        out += buf;
        for (Eigen::Index i = 0; i < traj.samples[k].size(); ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", traj.samples[k][i]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto p = line.find(sep);
        out.push_back(line.substr(0, p));
        if (p == std::string_view::npos) { break; }
        line.remove_prefix(p + 1);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) { s.remove_prefix(1); }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) { s.remove_suffix(1); }
    return s;
}

double parse_number(std::string_view s, std::size_t line) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') { s.remove_prefix(1); }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error("csv line " + std::to_string(line) + ": malformed number '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

CsvTable read_csv_table(std::string_view text) {
    CsvTable table;
    bool header = true;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty()) { continue; }
        auto fields = split(line, ',');
        if (header) {
            for (std::size_t i = 1; i < fields.size(); ++i) { table.names.emplace_back(trim(fields[i])); }
            header = false;
            continue;
        }
        if (fields.size() != table.names.size() + 1) {
            throw Error("csv line " + std::to_string(line_no) + ": expected " + std::to_string(table.names.size() + 1) + " fields");
        }
        table.times.push_back(parse_number(fields[0], line_no));
        auto& row = table.rows.emplace_back();
        for (std::size_t i = 1; i < fields.size(); ++i) { row.push_back(parse_number(fields[i], line_no)); }
    }
    if (header) { throw Error("csv: missing header row"); }
    return table;
}

InputSignal input_from_table(const CsvTable& table) { return InputSignal::sampled(table.times, table.rows); }

} // namespace polykoop
