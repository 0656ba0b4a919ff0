#pragma once

// Command-line surface: one binary, subcommands
//   jc | bloch | collision | mollow-check | scan-n | scan-area | scan-gamma | nprime
// Values come from flags, then an optional JSON config file (--config),
// then documented defaults. All quantities are in natural units (gamma = 1
// convention); see the README.

#include "qpulse/records.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qpulse {

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> parameters; // effective key -> value
    std::string out_path;                          // empty: no record file
    RecordFormat format = RecordFormat::Csv;
};

/// Parse and validate an invocation (argv without the program name).
/// Precedence: command-line flag > config-file value > default. Unknown
/// keys are rejected with the offending key named; module invariants are
/// checked before any computation starts. Throws ConfigError or a
/// CLI::ParseError.
RunConfig parse_config(const std::vector<std::string>& args);

/// Parse, validate and execute. Prints the command's key summary statistic
/// on `out`, diagnostics on `err`. Exit codes: 0 success, 1 usage, 2
/// numeric/truncation, 3 I/O.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qpulse
