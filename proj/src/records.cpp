#include "qpulse/records.hpp"

#include "qpulse/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace qpulse {

namespace {

constexpr const char* kHeader =
    "scan_id,model,n_mean,area,gamma,omega,theta,dt,infidelity,purity,entropy,survival";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double sort_key(double v) { return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v; }

bool record_less(const ScanRecord& a, const ScanRecord& b) {
    if (a.scan_id != b.scan_id) return a.scan_id < b.scan_id;
    if (a.model != b.model) return a.model < b.model;
    const double ka[6] = {sort_key(a.n_mean), sort_key(a.area),  sort_key(a.gamma),
                          sort_key(a.omega),  sort_key(a.theta), sort_key(a.dt)};
    const double kb[6] = {sort_key(b.n_mean), sort_key(b.area),  sort_key(b.gamma),
                          sort_key(b.omega),  sort_key(b.theta), sort_key(b.dt)};
    for (int i = 0; i < 6; ++i)
        if (ka[i] != kb[i]) return ka[i] < kb[i];
    return false;
}

nlohmann::ordered_json to_json_value(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

double from_json_value(const nlohmann::ordered_json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

} // namespace

RecordFormat parse_record_format(const std::string& name) {
    if (name == "csv") return RecordFormat::Csv;
    if (name == "json") return RecordFormat::Json;
    throw ConfigError("unknown record format '" + name + "' (expected csv or json)");
}

std::string format_records(std::vector<ScanRecord> records, RecordFormat format) {
    if (records.empty()) throw ConfigError("emit_records: record list is empty");
    std::stable_sort(records.begin(), records.end(), record_less);

    if (format == RecordFormat::Csv) {
        std::ostringstream out;
        out << kHeader << '\n';
        for (const ScanRecord& r : records) {
            out << r.scan_id << ',' << r.model << ',' << fmt17(r.n_mean) << ',' << fmt17(r.area)
                << ',' << fmt17(r.gamma) << ',' << fmt17(r.omega) << ',' << fmt17(r.theta) << ','
                << fmt17(r.dt) << ',' << fmt17(r.infidelity) << ',' << fmt17(r.purity) << ','
                << fmt17(r.entropy) << ',' << fmt17(r.survival) << '\n';
        }
        return out.str();
    }

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ScanRecord& r : records) {
        nlohmann::ordered_json obj;
        obj["schema_version"] = "1";
        obj["scan_id"] = r.scan_id;
        obj["model"] = r.model;
        obj["n_mean"] = to_json_value(r.n_mean);
        obj["area"] = to_json_value(r.area);
        obj["gamma"] = to_json_value(r.gamma);
        obj["omega"] = to_json_value(r.omega);
        obj["theta"] = to_json_value(r.theta);
        obj["dt"] = to_json_value(r.dt);
        obj["infidelity"] = to_json_value(r.infidelity);
        obj["purity"] = to_json_value(r.purity);
        obj["entropy"] = to_json_value(r.entropy);
        obj["survival"] = to_json_value(r.survival);
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

void emit_records(const std::vector<ScanRecord>& records, const std::string& path,
                  RecordFormat format) {
    const std::string body = format_records(records, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("emit_records: cannot open '" + path + "' for writing");
    out << body;
    out.flush();
    if (!out) throw IoError("emit_records: write to '" + path + "' failed");
}

std::vector<ScanRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_records_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("read_records_csv: empty file");
    if (line != kHeader) throw IoError("read_records_csv: unexpected header");

    std::vector<ScanRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 12) throw IoError("read_records_csv: malformed row");
        ScanRecord r;
        r.scan_id = cells[0];
        r.model = cells[1];
        double* fields[10] = {&r.n_mean, &r.area,       &r.gamma,  &r.omega,   &r.theta,
                              &r.dt,     &r.infidelity, &r.purity, &r.entropy, &r.survival};
        for (int i = 0; i < 10; ++i) *fields[i] = std::stod(cells[i + 2]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ScanRecord> read_records_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_records_json: cannot open '" + path + "'");
    nlohmann::ordered_json arr;
    in >> arr;
    if (!arr.is_array()) throw IoError("read_records_json: expected a top-level array");

    std::vector<ScanRecord> out;
    for (const auto& obj : arr) {
        ScanRecord r;
        r.scan_id = obj.at("scan_id").get<std::string>();
        r.model = obj.at("model").get<std::string>();
        r.n_mean = from_json_value(obj.at("n_mean"));
        r.area = from_json_value(obj.at("area"));
        r.gamma = from_json_value(obj.at("gamma"));
        r.omega = from_json_value(obj.at("omega"));
        r.theta = from_json_value(obj.at("theta"));
        r.dt = from_json_value(obj.at("dt"));
        r.infidelity = from_json_value(obj.at("infidelity"));
        r.purity = from_json_value(obj.at("purity"));
        r.entropy = from_json_value(obj.at("entropy"));
        r.survival = from_json_value(obj.at("survival"));
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace qpulse
