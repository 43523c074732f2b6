#include "hamred/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace hamred {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t row, bool allow_inf = false) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || std::isnan(v) || (!allow_inf && std::isinf(v)))
        throw ConfigError("row " + std::to_string(row) + ": invalid value '" + s + "'");
    return v;
}

void check_time(const Trajectory& tr) {
    for (std::size_t i = 1; i < tr.samples.size(); ++i)
        if (!(tr.samples[i].t > tr.samples[i - 1].t))
            throw ConfigError("sample times must increase (row " + std::to_string(i + 1) + ")");
}

}  // namespace

void write_trajectory_csv(const Trajectory& tr, std::ostream& out) {
    const auto diag = tr.diagnostic_names();
    out << "t";
    for (const auto& l : tr.labels) out << ',' << l;
    for (const auto& d : diag) out << ',' << d;
    out << '\n';
    for (const auto& s : tr.samples) {
        out << fmt17(s.t);
        for (Eigen::Index i = 0; i < s.z.size(); ++i) out << ',' << fmt17(s.z(i));
        for (const auto& d : diag) {
            const auto it = s.diagnostics.find(d);
            out << ',' << fmt17(it == s.diagnostics.end() ? 0.0 : it->second);
        }
        out << '\n';
    }
}

void write_trajectory_json(const Trajectory& tr, std::ostream& out) {
    nlohmann::ordered_json j;
    j["labels"] = tr.labels;
    j["diagnostics"] = tr.diagnostic_names();
    auto samples = nlohmann::ordered_json::array();
    for (const auto& s : tr.samples) {
        nlohmann::ordered_json row;
        row["t"] = s.t;
        row["z"] = std::vector<double>(s.z.data(), s.z.data() + s.z.size());
        nlohmann::ordered_json d = nlohmann::ordered_json::object();
        for (const auto& [k, v] : s.diagnostics) d[k] = v;
        row["diagnostics"] = d;
        samples.push_back(row);
    }
    j["samples"] = samples;
    auto events = nlohmann::ordered_json::array();
    for (const auto& e : tr.events) events.push_back({{"t", e.t}, {"from", e.from}, {"to", e.to}});
    j["events"] = events;
    out << j.dump(2) << '\n';
}

void write_trajectory(const Trajectory& tr, const std::string& path, const std::string& format) {
    if (format != "csv" && format != "json") throw ConfigError("unknown output format '" + format + "'");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    if (format == "csv") write_trajectory_csv(tr, out);
    else write_trajectory_json(tr, out);
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

Trajectory read_trajectory_csv(std::istream& in, int state_columns) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("trajectory file is empty");
    const auto header = split(line);
    if (header.empty() || header.front() != "t") throw ConfigError("header must start with 't'");
    const int cols = static_cast<int>(header.size());
    if (state_columns < 0 || 1 + state_columns > cols)
        throw ConfigError("header has fewer columns than the state dimension");
    Trajectory tr;
    tr.labels.assign(header.begin() + 1, header.begin() + 1 + state_columns);
    const std::vector<std::string> diag(header.begin() + 1 + state_columns, header.end());
    if (!std::is_sorted(diag.begin(), diag.end()))
        throw ConfigError("diagnostic columns must be in alphabetical order");
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (static_cast<int>(cells.size()) != cols)
            throw ConfigError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                              " columns, expected " + std::to_string(cols));
        Sample s;
        s.t = parse_number(cells[0], row);
        s.z = Vec(state_columns);
        for (int i = 0; i < state_columns; ++i) s.z(i) = parse_number(cells[1 + i], row);
        for (std::size_t d = 0; d < diag.size(); ++d)
            s.diagnostics[diag[d]] = parse_number(cells[1 + state_columns + d], row, true);
        tr.samples.push_back(std::move(s));
    }
    check_time(tr);
    return tr;
}

Trajectory read_trajectory_json(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed trajectory JSON: ") + e.what());
    }
    Trajectory tr;
    try {
        tr.labels = j.at("labels").get<std::vector<std::string>>();
        const auto diag = j.at("diagnostics").get<std::vector<std::string>>();
        for (const auto& row : j.at("samples")) {
            Sample s;
            s.t = row.at("t").get<double>();
            const auto z = row.at("z").get<std::vector<double>>();
            if (z.size() != tr.labels.size()) throw ConfigError("sample width does not match the labels");
            s.z = Eigen::Map<const Vec>(z.data(), static_cast<Eigen::Index>(z.size()));
            for (const auto& d : diag) {
                const auto& v = row.at("diagnostics").at(d);
                s.diagnostics[d] = v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
            }
            for (Eigen::Index i = 0; i < s.z.size(); ++i)
                if (!std::isfinite(s.z(i))) throw ConfigError("non-finite state value");
            tr.samples.push_back(std::move(s));
        }
        for (const auto& e : j.at("events"))
            tr.events.push_back({e.at("t").get<double>(), e.at("from").get<std::vector<int>>(),
                                 e.at("to").get<std::vector<int>>()});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("trajectory JSON does not match the schema: ") + e.what());
    }
    check_time(tr);
    return tr;
}

}  // namespace hamred
