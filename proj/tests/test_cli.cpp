#include "qpulse/cli.hpp"

#include "qpulse/errors.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace qpulse;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << body;
}

} // namespace

TEST_CASE("parse_config: happy path fills the parameter map") {
    const RunConfig cfg =
        parse_config({"scan-n", "--theta", "1.5707963", "--n-grid", "25,50,100,200,400"});
    CHECK(cfg.command == "scan-n");
    CHECK(cfg.parameters.at("theta") == "1.5707963");
    CHECK(cfg.parameters.at("n-grid") == "25,50,100,200,400");
    CHECK(cfg.parameters.at("g") == "1");           // documented default
    CHECK(cfg.parameters.count("jobs") == 1);
    CHECK(cfg.out_path.empty());
}

TEST_CASE("parse_config: collision invariant gate fires before any computation") {
    CHECK_THROWS_AS(parse_config({"collision", "--beta", "10", "--gamma", "1", "--dt", "0.01"}),
                    ConfigError);
}

TEST_CASE("run_cli: missing required key names the offender, exit 1") {
    const CliRun r = invoke({"bloch"});
    CHECK(r.code == 1);
    CHECK(r.err.find("gamma") != std::string::npos);
}

TEST_CASE("run_cli: unknown keys are rejected, exit 1") {
    const CliRun r = invoke({"scan-n", "--not-a-key", "7"});
    CHECK(r.code == 1);
    CHECK(r.err.find("not-a-key") != std::string::npos);
}

TEST_CASE("run_cli: mollow-check prints the trace distance and exits 0") {
    const CliRun r = invoke({"mollow-check"});
    CHECK(r.code == 0);
    CHECK(r.out.find("trace distance") != std::string::npos);
}

TEST_CASE("run_cli: scan-n prints a slope near -1 and writes CSV") {
    const std::string path = "/tmp/qpulse_cli_scan_n.csv";
    std::remove(path.c_str());
    const CliRun r = invoke({"scan-n", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("slope = -1.0") != std::string::npos);
    const std::string body = slurp(path);
    CHECK(body.rfind("scan_id,model,n_mean", 0) == 0);
    std::remove(path.c_str());
}

TEST_CASE("run_cli: identical invocations write byte-identical files") {
    const std::string p1 = "/tmp/qpulse_cli_det_1.json";
    const std::string p2 = "/tmp/qpulse_cli_det_2.json";
    const std::vector<std::string> base{"scan-gamma", "--format", "json"};
    std::vector<std::string> a = base;
    a.insert(a.end(), {"--out", p1});
    std::vector<std::string> b = base;
    b.insert(b.end(), {"--out", p2});
    CHECK(invoke(a).code == 0);
    CHECK(invoke(b).code == 0);
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("run_cli: jobs does not change scan output") {
    const std::string p1 = "/tmp/qpulse_cli_jobs_1.csv";
    const std::string p2 = "/tmp/qpulse_cli_jobs_2.csv";
    CHECK(invoke({"scan-n", "--out", p1}).code == 0);
    CHECK(invoke({"scan-n", "--jobs", "4", "--out", p2}).code == 0);
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("run_cli: exit codes are stable across failure classes") {
    // usage
    CHECK(invoke({"collision", "--beta", "10", "--gamma", "1", "--dt", "0.01"}).code == 1);
    // numeric: a zero-area scan refuses the slope fit
    const CliRun numeric = invoke({"scan-n", "--theta", "0"});
    CHECK(numeric.code == 2);
    // I/O: unwritable output path
    const CliRun io = invoke({"scan-n", "--out", "/nonexistent-dir/records.csv"});
    CHECK(io.code == 3);
}

TEST_CASE("run_cli: version and help") {
    const CliRun v = invoke({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("qpulse 1.0.0") != std::string::npos);

    const CliRun h = invoke({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("scan-n") != std::string::npos);

    const CliRun hs = invoke({"scan-gamma", "--help"});
    CHECK(hs.code == 0);
    CHECK(hs.out.find("--gamma-grid") != std::string::npos);
    CHECK(hs.out.find("1/time") != std::string::npos); // units documented
}

TEST_CASE("run_cli: config file supplies values, flags take precedence") {
    const std::string cfg_path = "/tmp/qpulse_cli_config.json";
    write_file(cfg_path, R"({"theta": 3.0, "n-grid": [25, 50, 100, 200]})");

    const RunConfig from_file = parse_config({"scan-n", "--config", cfg_path});
    CHECK(from_file.parameters.at("theta") == "3");
    CHECK(from_file.parameters.at("n-grid") == "25,50,100,200");

    const RunConfig overridden =
        parse_config({"scan-n", "--config", cfg_path, "--theta", "1.5707963"});
    CHECK(overridden.parameters.at("theta") == "1.5707963");
    CHECK(overridden.parameters.at("n-grid") == "25,50,100,200");
    std::remove(cfg_path.c_str());
}

TEST_CASE("run_cli: unknown config-file keys are rejected by name") {
    const std::string cfg_path = "/tmp/qpulse_cli_config_bad.json";
    write_file(cfg_path, R"({"teta": 3.0})");
    const CliRun r = invoke({"scan-n", "--config", cfg_path});
    CHECK(r.code == 1);
    CHECK(r.err.find("teta") != std::string::npos);
    std::remove(cfg_path.c_str());
}

TEST_CASE("run_cli: jc trajectory writes one record per sample") {
    const std::string path = "/tmp/qpulse_cli_jc.csv";
    const CliRun r = invoke(
        {"jc", "--mean-n", "4", "--t-max", "2", "--samples", "51", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("final entropy") != std::string::npos);
    const std::string body = slurp(path);
    CHECK(std::count(body.begin(), body.end(), '\n') == 52); // header + 51 rows
    std::remove(path.c_str());
}

TEST_CASE("run_cli: collision trajectory reports survival") {
    const CliRun r = invoke({"collision", "--gamma", "1", "--omega-eff", "20", "--dt", "0.001",
                             "--steps", "1000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("final survival") != std::string::npos);
}

TEST_CASE("run_cli: rejects beta together with omega-eff") {
    const CliRun r = invoke(
        {"collision", "--gamma", "1", "--beta", "1", "--omega-eff", "5", "--dt", "0.001"});
    CHECK(r.code == 1);
}

TEST_CASE("run_cli: the built binary behaves like the library entry point") {
    const std::string exe = QPULSE_CLI_PATH;
    const int code = std::system((exe + " --version > /tmp/qpulse_ver.txt 2>/dev/null").c_str());
    REQUIRE(code != -1);
    CHECK(WEXITSTATUS(code) == 0);
    CHECK(slurp("/tmp/qpulse_ver.txt").find("qpulse 1.0.0") != std::string::npos);
    std::remove("/tmp/qpulse_ver.txt");

    const int bad = std::system((exe + " bloch > /dev/null 2>&1").c_str());
    REQUIRE(bad != -1);
    CHECK(WEXITSTATUS(bad) == 1);
}
