#pragma once

// Experiment records and their deterministic serialization.
//
// CSV: header row, fixed column order
//   scan_id,model,n_mean,area,gamma,omega,theta,dt,infidelity,purity,entropy,survival
// JSON: top-level array; every object carries schema_version "1".
// Floats are written with 17 significant digits; fields that do not apply
// hold NaN (CSV "nan", JSON null). Records are sorted by a total key before
// emission so parallel scan order never changes the output.

#include <string>
#include <vector>

namespace qpulse {

struct ScanRecord {
    std::string scan_id;
    std::string model; // "jc" | "bloch" | "collision"
    double n_mean = 0.0;
    double area = 0.0;
    double gamma = 0.0;
    double omega = 0.0;
    double theta = 0.0;
    double dt = 0.0;
    double infidelity = 0.0;
    double purity = 0.0;
    double entropy = 0.0;
    double survival = 0.0;
};

enum class RecordFormat { Csv, Json };

RecordFormat parse_record_format(const std::string& name);

/// Serialize sorted records; byte-identical for identical inputs.
std::string format_records(std::vector<ScanRecord> records, RecordFormat format);

/// Write to path. Throws ConfigError on an empty record list (no file is
/// created) and IoError on write failure.
void emit_records(const std::vector<ScanRecord>& records, const std::string& path,
                  RecordFormat format);

std::vector<ScanRecord> read_records_csv(const std::string& path);
std::vector<ScanRecord> read_records_json(const std::string& path);

} // namespace qpulse
