#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "topochain/scan.hpp"

using namespace topochain;

namespace {

struct RunResult {
    int rc = -1;
    std::string out;  // stdout and stderr interleaved
};

std::string cli_path() {
    if (const char* bin = std::getenv("TOPOCHAIN_CLI_PATH")) return bin;
    return TOPOCHAIN_CLI_PATH;  // baked in by the build
}

std::string config_dir() {
    if (const char* dir = std::getenv("TOPOCHAIN_CONFIG_DIR")) return dir;
    return TOPOCHAIN_CONFIG_DIR;
}

RunResult run_cli(const std::string& args) {
    const std::string cmd = "\"" + cli_path() + "\" " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) res.out += buf;
    const int status = pclose(pipe);
    res.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

// value printed after "key = ", verbatim, up to end of line
std::string printed_value(const std::string& out, const std::string& key) {
    const std::string tag = key + " = ";
    const size_t at = out.find(tag);
    REQUIRE_MESSAGE(at != std::string::npos, "missing '" << tag << "' in:\n" << out);
    const size_t end = out.find('\n', at);
    return out.substr(at + tag.size(), end - at - tag.size());
}

std::filesystem::path fresh_dir(const char* tag) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / (std::string("topochain_cli_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(cell);
    return fields;
}

}  // namespace

TEST_CASE("winding subcommand reports the integer invariant") {
    const RunResult topo = run_cli("winding --model ssh --alpha -0.5");
    CHECK(topo.rc == 0);
    CHECK(topo.out.find("nu = 1") != std::string::npos);

    const RunResult triv = run_cli("winding --model cl --alpha 0.5");
    CHECK(triv.rc == 0);
    CHECK(triv.out.find("nu = 0") != std::string::npos);

    const RunResult gapless = run_cli("winding --model ssh --alpha 0");
    CHECK(gapless.rc == 1);
    CHECK(gapless.out.find("gapless spectrum:") != std::string::npos);
}

TEST_CASE("zak subcommand ties band phases to the winding") {
    const RunResult res = run_cli("zak --model ssh --alpha -0.5");
    CHECK(res.rc == 0);
    CHECK(res.out.find("zak_minus = ") != std::string::npos);
    CHECK(res.out.find("zak_plus = ") != std::string::npos);
    CHECK(res.out.find("nu = 1") != std::string::npos);
    CHECK(res.out.find("winding_relation_deviation = ") != std::string::npos);
}

TEST_CASE("measure subcommand covers all three branches") {
    const RunResult topo = run_cli("measure --model ssh --alpha -0.5 --beta 5");
    CHECK(topo.rc == 0);
    CHECK(printed_value(topo.out, "gamma") == "3.14159265359");
    CHECK(printed_value(topo.out, "branch") == "FiniteTGapped");

    const RunResult triv = run_cli("measure --model cl --alpha 0.5 --beta 5");
    CHECK(triv.rc == 0);
    CHECK(printed_value(triv.out, "gamma") == "0");

    const RunResult hot = run_cli("measure --model ssh --alpha -0.5 --beta 0");
    CHECK(hot.rc == 0);
    CHECK(printed_value(hot.out, "gamma") == "0");
    CHECK(printed_value(hot.out, "branch") == "InfiniteT");

    const RunResult undef = run_cli("measure --model ssh --alpha 0 --beta 1");
    CHECK(undef.rc == 0);
    CHECK(undef.out.find("gamma = undefined (gapless, beta > 0)") != std::string::npos);
    CHECK(printed_value(undef.out, "branch") == "GaplessIllDefined");
}

TEST_CASE("merit subcommand matches a one-point scan, disorder included") {
    const std::string point =
        "--model ssh --alpha -0.5 --beta 5 --nk 128 --L 40 --W 0.1 --trials 3 --seed 7";
    const RunResult merit = run_cli("merit " + point);
    CHECK(merit.rc == 0);
    const std::string avg = printed_value(merit.out, "lambda_avg");
    const std::string mn = printed_value(merit.out, "lambda_min");

    const std::filesystem::path dir = fresh_dir("merit");
    const std::filesystem::path cfg = dir / "point.cfg";
    {
        std::ofstream out(cfg);
        out << "model = ssh\nalpha_min = -0.5\nalpha_max = -0.5\nalpha_count = 1\n"
            << "beta_min = 5\nbeta_max = 5\nbeta_count = 1\ninclude_zero = false\n"
            << "mu = 0.1\nN_k = 128\nL = 40\nW = 0.1\ntrials = 3\nseed = 7\n";
    }
    const std::filesystem::path csv = dir / "point.csv";
    const RunResult scan = run_cli("scan --config \"" + cfg.string() +
                                   "\" --out-csv \"" + csv.string() + "\"");
    CHECK(scan.rc == 0);
    std::istringstream rows(slurp(csv));
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    const std::vector<std::string> fields = split_csv_row(row);
    REQUIRE(fields.size() == 8);
    CHECK(fields[5] == avg);
    CHECK(fields[6] == mn);
    std::filesystem::remove_all(dir);
}

TEST_CASE("disorder subcommand is reproducible") {
    const std::string args =
        "disorder --model cl --alpha -0.5 --beta 5 --L 40 --W 0.2 --trials 4 --seed 42";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("trials = 4") != std::string::npos);
    for (const char* key : {"mean_avg", "std_avg", "min_avg", "mean_min", "std_min", "min_min"})
        CHECK(a.out.find(std::string(key) + " = ") != std::string::npos);
}

TEST_CASE("scan subcommand writes its artifacts deterministically") {
    const std::filesystem::path dir = fresh_dir("scan");
    const std::filesystem::path cfg = dir / "grid.cfg";
    {
        std::ofstream out(cfg);
        out << "model = ssh\nalpha_min = -0.5\nalpha_max = 0.5\nalpha_count = 3\n"
            << "beta_min = 1\nbeta_max = 2\nbeta_count = 2\ninclude_zero = true\n"
            << "N_k = 64\nL = 24\n"
            << "out_csv = " << (dir / "g.csv").string() << "\n"
            << "out_svg = " << (dir / "g.svg").string() << "\n"
            << "out_json = " << (dir / "g.json").string() << "\n";
    }
    const RunResult first = run_cli("scan --config \"" + cfg.string() + "\"");
    CHECK(first.rc == 0);
    CHECK(first.out.find("rows = 9") != std::string::npos);
    CHECK(first.out.find("wrote csv: ") != std::string::npos);
    CHECK(first.out.find("wrote svg: ") != std::string::npos);
    CHECK(first.out.find("wrote json: ") != std::string::npos);
    REQUIRE(std::filesystem::exists(dir / "g.csv"));
    REQUIRE(std::filesystem::exists(dir / "g.svg"));
    REQUIRE(std::filesystem::exists(dir / "g.json"));

    const std::string csv_first = slurp(dir / "g.csv");
    const RunResult second = run_cli("scan --config \"" + cfg.string() + "\"");
    CHECK(second.rc == 0);
    CHECK(slurp(dir / "g.csv") == csv_first);
    std::filesystem::remove_all(dir);
}

TEST_CASE("scan subcommand rejects bad configs with exit code 2") {
    const RunResult missing = run_cli("scan --config /nonexistent_topochain.cfg");
    CHECK(missing.rc == 2);
    CHECK(missing.out.find("config error:") != std::string::npos);

    const std::filesystem::path dir = fresh_dir("badcfg");
    const std::filesystem::path cfg = dir / "bad.cfg";
    {
        std::ofstream out(cfg);
        out << "surprise_key = 1\n";
    }
    const RunResult unknown = run_cli("scan --config \"" + cfg.string() + "\"");
    CHECK(unknown.rc == 2);
    CHECK(unknown.out.find("config error:") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("usage errors exit with code 2, domain errors with code 1") {
    CHECK(run_cli("bogus_subcommand").rc == 2);
    CHECK(run_cli("winding --model ssh").rc == 2);        // missing --alpha
    CHECK(run_cli("winding --model ssh --alpha 0.5 --bogus-flag 1").rc == 2);
    CHECK(run_cli("winding --model xyz --alpha 0.5").rc == 2);
    CHECK(run_cli("disorder --model ssh --alpha 0.5 --beta 1").rc == 2);  // missing --W

    const RunResult domain = run_cli("merit --model ssh --alpha 77 --beta 1");
    CHECK(domain.rc == 1);
    CHECK(domain.out.find("invalid parameter:") != std::string::npos);
}

TEST_CASE("version and selftest run clean") {
    const RunResult version = run_cli("--version");
    CHECK(version.rc == 0);
    CHECK_FALSE(version.out.empty());

    const RunResult selftest = run_cli("selftest");
    CHECK(selftest.rc == 0);
    CHECK(selftest.out.find("selftest: 6/6 passed") != std::string::npos);
    CHECK(selftest.out.find("[fail]") == std::string::npos);
}

TEST_CASE("shipped sweep configs parse to the published grids") {
    const std::string dir = config_dir();
    const ScanConfig fig1 = parse_scan_config(dir + "/fig1_ssh.cfg");
    CHECK(fig1.model == ModelKind::SSH);
    CHECK(fig1.alpha_count == 81);
    CHECK(fig1.beta_count == 50);
    CHECK(fig1.include_zero);
    CHECK(fig1.L == 100);
    CHECK(fig1.N_k == 512);
    CHECK(fig1.mu == 0.1);
    CHECK_FALSE(fig1.svg_use_min);
    CHECK_FALSE(fig1.csv_path.empty());
    CHECK_NOTHROW(fig1.validate());

    const ScanConfig fig2 = parse_scan_config(dir + "/fig2_cl.cfg");
    CHECK(fig2.model == ModelKind::CL);
    CHECK_NOTHROW(fig2.validate());

    const ScanConfig fig3 = parse_scan_config(dir + "/fig3_ssh_min.cfg");
    CHECK(fig3.model == ModelKind::SSH);
    CHECK(fig3.svg_use_min);

    const ScanConfig fig4 = parse_scan_config(dir + "/fig4_cl_min.cfg");
    CHECK(fig4.model == ModelKind::CL);
    CHECK(fig4.svg_use_min);
    CHECK_NOTHROW(fig4.validate());
}
