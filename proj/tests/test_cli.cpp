#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "kvf/kvf.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

// Run the CLI binary with the given argument string and capture its output.
// Goldens compare stdout alone; diagnostics tests merge stderr in.
RunResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string("\"") + KVF_CLI_PATH + "\" " + args;
    cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string data_file(const std::string& name) { return std::string(KVF_DATA_DIR) + "/" + name; }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// value of a "key = value" report line
std::string report_value(const std::string& output, const std::string& key) {
    const std::string needle = key + " = ";
    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind(needle, 0) == 0) return line.substr(needle.size());
    FAIL("report line '" << key << "' not found in:\n" << output);
    return {};
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "kvf_cli_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_temp(const std::string& name, const std::string& contents) {
    const fs::path path = temp_dir() / name;
    std::ofstream out(path);
    out << contents;
    return path;
}

void check_golden(const std::string& golden_name, const std::string& args) {
    const RunResult run = run_cli(args);
    CAPTURE(golden_name, args);
    REQUIRE(run.exit_code == 0);
    const std::string expected = read_file(fs::path(KVF_GOLDEN_DIR) / golden_name);
    REQUIRE(run.output == expected);
}

} // namespace

TEST_CASE("cli output matches the golden transcripts byte for byte", "[cli]") {
    check_golden("canonicalize_sphere3.txt", "canonicalize " + data_file("sphere3.json"));
    check_golden("canonicalize_translation_r3.txt", "canonicalize " + data_file("translation_r3.json"));
    check_golden("classify_ellipsoid_12.txt", "classify " + data_file("ellipsoid_12.json") + " --length 1.0");
    check_golden("geometry_ellipsoid_12.txt",
                 "geometry " + data_file("ellipsoid_12.json") + " --length 1.0 --point 1,0,0,0");
    check_golden("sample_ellipsoid_12.txt",
                 "sample " + data_file("ellipsoid_12.json") + " --length 1.0 -n 5 --seed 42");
    check_golden("verify_sphere3.txt", "verify " + data_file("sphere3.json") + " --length 1.0");
}

TEST_CASE("canonicalize reports the frame of hand-written specs", "[cli]") {
    SECTION("single rotation block") {
        const fs::path spec = write_temp("rot2.json",
            R"({"dimension": 2, "skew": [[0.0, -2.0], [2.0, 0.0]], "translation": [0.0, 0.0]})");
        const RunResult run = run_cli("canonicalize " + spec.string());
        REQUIRE(run.exit_code == 0);
        CHECK(report_value(run.output, "frequencies") == "[2]");
        CHECK(report_value(run.output, "kernel_dim") == "0");
        CHECK(report_value(run.output, "kernel_speed") == "0");
    }

    SECTION("pure translation") {
        const fs::path spec = write_temp("trans3.json",
            R"({"dimension": 3, "skew": [[0,0,0],[0,0,0],[0,0,0]], "translation": [0.0, 0.0, 1.0]})");
        const RunResult run = run_cli("canonicalize " + spec.string());
        REQUIRE(run.exit_code == 0);
        CHECK(report_value(run.output, "frequencies") == "[]");
        CHECK(report_value(run.output, "kernel_dim") == "3");
        CHECK(report_value(run.output, "kernel_speed") == "1");
    }
}

TEST_CASE("sampling is deterministic in the seed", "[cli]") {
    const std::string base = "sample " + data_file("ellipsoid_12.json") + " --length 1.0 -n 20";
    const RunResult first = run_cli(base + " --seed 7");
    const RunResult second = run_cli(base + " --seed 7");
    const RunResult other = run_cli(base + " --seed 8");
    REQUIRE(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output != other.output);
}

TEST_CASE("verify exits 0 on the bundled fields", "[cli]") {
    CHECK(run_cli("verify " + data_file("sphere3.json") + " --length 1.0").exit_code == 0);
    CHECK(run_cli("verify " + data_file("ellipsoid_12.json") + " --length 1.0").exit_code == 0);

    const RunResult affine = run_cli("verify " + data_file("translation_r3.json") + " --length 1.0");
    CHECK(affine.exit_code == 0);
    CHECK(report_value(affine.output, "variant") == "Affine");
}

TEST_CASE("cli rejects corrupt input with exit code 2", "[cli]") {
    const std::string test_dir = KVF_TEST_DATA_DIR;

    const RunResult non_skew = run_cli("canonicalize " + test_dir + "/non_skew.json", true);
    CHECK(non_skew.exit_code == 2);
    CHECK(non_skew.output.find("skew") != std::string::npos);

    CHECK(run_cli("classify " + test_dir + "/malformed.json --length 1.0", true).exit_code == 2);
    CHECK(run_cli("classify " + data_file("sphere3.json"), true).exit_code == 2); // missing --length
    CHECK(run_cli("canonicalize " + temp_dir().string() + "/does_not_exist.json", true).exit_code == 2);
    CHECK(run_cli("frobnicate", true).exit_code == 2);

    // empty locus: the translation field has speed 1 everywhere, never 1/2
    const RunResult empty = run_cli("sample " + data_file("translation_r3.json") + " --length 0.5", true);
    CHECK(empty.exit_code == 2);
}

TEST_CASE("fit recovers the field behind sampled data", "[cli]") {
    const fs::path dir = temp_dir();
    const fs::path points_csv = dir / "ellipsoid_points.csv";
    const fs::path fit_csv = dir / "ellipsoid_fit.csv";
    const fs::path fitted_spec = dir / "fitted.json";

    const RunResult sampled = run_cli("sample " + data_file("ellipsoid_12.json") +
                                      " --length 1.0 -n 40 --seed 5 --out " + points_csv.string());
    REQUIRE(sampled.exit_code == 0);

    // pair every sampled point with the exact field value at that point
    const kvf::EuclideanKillingField field = kvf::load_field_spec(data_file("ellipsoid_12.json"));
    std::ifstream in(points_csv);
    REQUIRE(in.good());
    std::ofstream out(fit_csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        kvf::Vec p;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) p.push_back(std::stod(cell));
        REQUIRE(p.size() == 4);
        const kvf::Vec xi = kvf::evaluate(field, p);
        char buf[64];
        out << line;
        for (double x : xi) {
            std::snprintf(buf, sizeof buf, ",%.17g", x);
            out << buf;
        }
        out << '\n';
        ++rows;
    }
    REQUIRE(rows == 40);
    out.close();

    const RunResult fit = run_cli("fit --samples " + fit_csv.string() +
                                  " --length 1.0 --out " + fitted_spec.string());
    REQUIRE(fit.exit_code == 0);
    CHECK(report_value(fit.output, "sample_count") == "40");
    CHECK(report_value(fit.output, "ambient_dim") == "4");
    CHECK(std::stod(report_value(fit.output, "residual_rms")) < 1e-10);
    CHECK(report_value(fit.output, "locus_consistency") == "true");
    CHECK(report_value(fit.output, "variant") == "EllipsoidCylinder");

    const kvf::EuclideanKillingField recovered = kvf::load_field_spec(fitted_spec.string());
    CHECK(kvf::frobenius_norm(recovered.skew() - field.skew()) < 1e-8);
    CHECK(kvf::norm(kvf::sub(recovered.translation(), field.translation())) < 1e-8);

    SECTION("a malformed samples file is an input error") {
        const fs::path bad = write_temp("bad.csv", "1,2,3\n");
        CHECK(run_cli("fit --samples " + bad.string(), true).exit_code == 2);
    }
}
