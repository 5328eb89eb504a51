// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "accprec/analytic.hpp"
#include "accprec/csv.hpp"
#include "accprec/montecarlo.hpp"
#include "accprec/softfloat.hpp"

namespace {

const std::string kBin = ACCPREC_BIN_PATH;
const std::string kDataDir = ACCPREC_DATA_DIR;

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env.empty() ? "" : env + " ";
    cmd += kBin + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

// Value of a "key=value" line in the output; empty when absent.
std::string value_of(const std::string& output, const std::string& key) {
    std::istringstream in(output);
    std::string line;
    auto cut = [&line](std::size_t start) {
        auto end = line.find(' ', start);
        return line.substr(start, end == std::string::npos ? std::string::npos
                                                           : end - start);
    };
    while (std::getline(in, line)) {
        if (line.rfind(key + "=", 0) == 0) return cut(key.size() + 1);
        // keys can also appear mid-line in grouped prints
        auto pos = line.find(" " + key + "=");
        if (pos != std::string::npos) return cut(pos + key.size() + 2);
    }
    return "";
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

}  // namespace

TEST_CASE("version, help, and parse failures") {
    CHECK(run_cli("--version").exit_code == 0);
    CliResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("vrr") != std::string::npos);
    CHECK(help.output.find("predict") != std::string::npos);

    CHECK(run_cli("").exit_code == 2);              // missing subcommand
    CHECK(run_cli("vrr --bogus 1").exit_code == 2); // unknown flag
    CHECK(run_cli("frobnicate").exit_code == 2);    // unknown subcommand
    // --n and --grid-n are mutually exclusive
    CHECK(run_cli("vrr --macc 8 --n 16 --grid-n 2^1..2^4").exit_code == 2);
    // well-formed flags, invalid values
    CHECK(run_cli("vrr --macc 8 --n nonsense").exit_code == 3);
    CHECK(run_cli("vrr --macc 99 --n 100").exit_code == 3);
    CHECK(run_cli("predict --n 100 --nzr 0").exit_code == 3);
    CHECK(run_cli("vrr --macc 8").exit_code == 3);  // needs --n or --grid-n
}

TEST_CASE("vrr point evaluation prints the breakdown") {
    CliResult res = run_cli("vrr --macc 12 --mp 5 --n 2^16");
    REQUIRE(res.exit_code == 0);
    const auto want = accprec::analytic::vrr(12, 5, 1u << 16);
    CHECK(accprec::csv::parse_double(value_of(res.output, "vrr")) == want.vrr);
    CHECK(accprec::csv::parse_double(value_of(res.output, "alpha")) ==
          want.alpha);
    CHECK(value_of(res.output, "head_skip") ==
          accprec::csv::format_u64(want.head_skip));
    CHECK(!value_of(res.output, "v_exponent").empty());
    CHECK(!value_of(res.output, "k1").empty());
}

TEST_CASE("vrr chunked point evaluation reports the effective mantissa") {
    CliResult res = run_cli("vrr --macc 9 --mp 5 --n 2^16 --chunk 64");
    REQUIRE(res.exit_code == 0);
    CHECK(value_of(res.output, "m_eff") == "9");
    CHECK(value_of(res.output, "n1") == "64");
    CHECK(value_of(res.output, "n2") == "1024");
    CHECK(accprec::csv::parse_double(value_of(res.output, "vrr")) ==
          accprec::analytic::vrr_chunked(9, 5, 64, 1024));
}

TEST_CASE("vrr full-swamp-only variant") {
    CliResult res = run_cli("vrr --macc 5 --n 100 --full-swamp-only");
    REQUIRE(res.exit_code == 0);
    CHECK(accprec::csv::parse_double(
              value_of(res.output, "vrr_full_swamping")) ==
          accprec::analytic::vrr_full_swamping(5, 100));
    CHECK(run_cli("vrr --macc 5 --n 100 --full-swamp-only --chunk 8")
              .exit_code == 3);
}

TEST_CASE("vrr grid goes to stdout or csv with a manifest") {
    CliResult res = run_cli("vrr --macc 8 --mp 5 --grid-n 2^4..2^8");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("vrr_analytic") != std::string::npos);

    const std::string csv_path = "/tmp/accprec_cli_grid.csv";
    std::remove(csv_path.c_str());
    std::remove((csv_path + ".manifest.json").c_str());
    CliResult wrote =
        run_cli("vrr --macc 8 --mp 5 --grid-n 16,64,256 --csv " + csv_path);
    REQUIRE(wrote.exit_code == 0);
    CHECK(wrote.output.find("wrote " + csv_path) != std::string::npos);
    auto table = accprec::csv::read_file(csv_path);
    REQUIRE(table.header ==
            std::vector<std::string>{"n", "m_p", "m_acc", "chunk", "nzr",
                                     "vrr_analytic"});
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0][0] == "16");
    const int vcol = table.column("vrr_analytic");
    REQUIRE(vcol >= 0);
    CHECK(accprec::csv::parse_double(
              table.rows[2][static_cast<std::size_t>(vcol)]) ==
          accprec::analytic::vrr(8, 5, 256).vrr);

    const std::string manifest_path = csv_path + ".manifest.json";
    REQUIRE(file_exists(manifest_path));
    auto manifest = read_text(manifest_path);
    CHECK(manifest.find("\"vrr\"") != std::string::npos);
    CHECK(manifest.find("vrr_analytic") != std::string::npos);

    // reruns replace the file with identical bytes
    auto first = read_text(csv_path);
    CliResult again =
        run_cli("vrr --macc 8 --mp 5 --grid-n 16,64,256 --csv " + csv_path);
    REQUIRE(again.exit_code == 0);
    CHECK(read_text(csv_path) == first);
    std::remove(csv_path.c_str());
    std::remove(manifest_path.c_str());
}

TEST_CASE("predict prints the minimum mantissa and signals unsatisfiable") {
    CliResult res = run_cli("predict --mp 5 --n 802816");
    REQUIRE(res.exit_code == 0);
    CHECK(value_of(res.output, "satisfiable") == "true");
    CHECK(value_of(res.output, "min_m_acc") == "14");

    CliResult chunked = run_cli("predict --mp 5 --n 802816 --chunk 64");
    REQUIRE(chunked.exit_code == 0);
    CHECK(value_of(chunked.output, "min_m_acc") == "13");

    CliResult unsat = run_cli("predict --mp 5 --n 2^20 --cutoff 0.5");
    CHECK(unsat.exit_code == 4);
    CHECK(value_of(unsat.output, "satisfiable") == "false");
    CHECK(value_of(unsat.output, "min_m_acc") == "-1");
}

TEST_CASE("sweep-chunk emits the baseline row first") {
    const std::string csv_path = "/tmp/accprec_cli_sweep.csv";
    std::remove(csv_path.c_str());
    CliResult res = run_cli("sweep-chunk --macc 8 --mp 5 --n 2^14 --csv " +
                            csv_path);
    REQUIRE(res.exit_code == 0);
    auto table = accprec::csv::read_file(csv_path);
    REQUIRE(table.rows.size() == 8);  // baseline + 7 default sizes
    CHECK(table.rows[0][3] == "0");
    CHECK(table.rows[1][3] == "16");
    const int vcol = table.column("vrr_analytic");
    CHECK(accprec::csv::parse_double(
              table.rows[0][static_cast<std::size_t>(vcol)]) ==
          accprec::analytic::vrr(8, 5, 1u << 14).vrr);
    std::remove(csv_path.c_str());
    std::remove((csv_path + ".manifest.json").c_str());
}

TEST_CASE("validate measures against the analytic value") {
    const std::string csv_path = "/tmp/accprec_cli_validate.csv";
    std::remove(csv_path.c_str());
    CliResult res = run_cli(
        "validate --macc 6 --n 1024 --trials 40 --mode truncate --csv " +
        csv_path);
    REQUIRE(res.exit_code == 0);
    auto table = accprec::csv::read_file(csv_path);
    REQUIRE(table.rows.size() == 1);

    accprec::analytic::AccumulationSpec spec;
    spec.n = 1024;
    spec.m_p = 5;
    spec.m_acc = 6;
    accprec::montecarlo::ProductModel model;
    auto want = accprec::montecarlo::measure_vrr(
        spec, model, 40, accprec::montecarlo::kDefaultSeed,
        accprec::softfloat::RoundingMode::TruncateTowardZero);
    const auto& row = table.rows[0];
    CHECK(accprec::csv::parse_double(
              row[static_cast<std::size_t>(table.column("vrr_empirical"))]) ==
          want.estimate);
    CHECK(accprec::csv::parse_double(
              row[static_cast<std::size_t>(table.column("vrr_analytic"))]) ==
          accprec::analytic::vrr(6, 5, 1024).vrr);
    CHECK(row[static_cast<std::size_t>(table.column("mode"))] == "truncate");

    // asking for a chunked measurement adds a second row
    CliResult both = run_cli(
        "validate --macc 6 --n 1024 --trials 40 --mode truncate --chunk 64 "
        "--csv " +
        csv_path);
    REQUIRE(both.exit_code == 0);
    auto two = accprec::csv::read_file(csv_path);
    REQUIRE(two.rows.size() == 2);
    CHECK(two.rows[0][3] == "0");
    CHECK(two.rows[1][3] == "64");
    std::remove(csv_path.c_str());
    std::remove((csv_path + ".manifest.json").c_str());

    CHECK(run_cli("validate --n 1024").exit_code == 3);  // needs --macc
    CHECK(run_cli("validate --macc 6 --n 1024 --mode sideways").exit_code ==
          3);
    CHECK(run_cli("validate --macc 6 --n 1024 --dist cauchy").exit_code == 3);
}

TEST_CASE("validate reruns are byte-identical including threaded runs") {
    const std::string a = "/tmp/accprec_cli_det_a.csv";
    const std::string b = "/tmp/accprec_cli_det_b.csv";
    std::remove(a.c_str());
    std::remove(b.c_str());
    const std::string args =
        "validate --macc 6 --n 2048 --trials 60 --mode truncate --seed 7";
    REQUIRE(run_cli(args + " --threads 1 --csv " + a).exit_code == 0);
    REQUIRE(run_cli(args + " --threads 3 --csv " + b).exit_code == 0);
    auto bytes = read_text(a);
    CHECK(bytes == read_text(b));
    REQUIRE(run_cli(args + " --csv " + b, "ACCPREC_THREADS=4").exit_code == 0);
    CHECK(bytes == read_text(b));
    REQUIRE(run_cli(args + " --csv " + b, "ACCPREC_KERNEL=scalar").exit_code ==
            0);
    CHECK(bytes == read_text(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
    std::remove((a + ".manifest.json").c_str());
    std::remove((b + ".manifest.json").c_str());
}

TEST_CASE("validate knee scan reports both knees") {
    CliResult res = run_cli(
        "validate --knee --n 256 --trials 24 --mode truncate --threshold "
        "0.9");
    REQUIRE(res.exit_code == 0);
    CHECK(!value_of(res.output, "empirical_knee").empty());
    CHECK(value_of(res.output, "analytic_prediction") ==
          std::to_string(
              accprec::analytic::predict_min_mantissa(5, 256).min_m_acc));
}

TEST_CASE("net prints and exports the topology table") {
    const std::string topo = kDataDir + "/resnet32_cifar10.json";
    CliResult res = run_cli("net --topology " + topo);
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("network resnet32-cifar10") != std::string::npos);
    CHECK(res.output.find("ResBlock 3") != std::string::npos);
    CHECK(res.output.find("GRAD") != std::string::npos);
    CHECK(res.output.find("fixed") != std::string::npos);  // excluded fc

    CliResult csv_out = run_cli("net --topology " + topo + " --format csv");
    REQUIRE(csv_out.exit_code == 0);
    CHECK(csv_out.output.rfind("network,row_kind,layer,block,gemm,", 0) == 0);

    const std::string csv_path = "/tmp/accprec_cli_net.csv";
    std::remove(csv_path.c_str());
    REQUIRE(run_cli("net --topology " + topo + " --csv " + csv_path)
                .exit_code == 0);
    auto table = accprec::csv::read_file(csv_path);
    // 7 layers: 21 gemm rows minus the first layer's bwd, plus block rows
    std::size_t layer_rows = 0, block_rows = 0;
    for (const auto& row : table.rows) {
        if (row[1] == "layer") ++layer_rows;
        if (row[1] == "block") ++block_rows;
    }
    CHECK(layer_rows == 20);
    CHECK(block_rows == 11);
    std::remove(csv_path.c_str());
    std::remove((csv_path + ".manifest.json").c_str());

    CHECK(run_cli("net --topology /tmp/missing_topology.json").exit_code ==
          3);
    CHECK(run_cli("net --topology " + topo + " --pp 1").exit_code == 3);
    CHECK(run_cli("net --topology " + topo + " --format bogus").exit_code ==
          3);
    CliResult perturbed = run_cli("net --topology " + topo + " --pp -2");
    REQUIRE(perturbed.exit_code == 0);
    CHECK(perturbed.output.find("pp=-2") != std::string::npos);
}
