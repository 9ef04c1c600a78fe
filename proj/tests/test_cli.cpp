#include "varmax/rational.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(VARMAX_CLI_PATH) + " " + args +
                      (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0)
        result.output.append(buffer, got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string fixture(const std::string& name) {
    return std::string(VARMAX_FIXTURE_DIR) + "/" + name;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("bound command") {
    auto r = run_cli("bound --n 5 --mean 0.1 --min 0 --max 1");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "sharp max variance: 1/25 (0.04)"));
    CHECK(contains(r.output, "bhatia-davis bound: 9/100 (0.09)"));
    CHECK(contains(r.output, "fractional part a: 1/2 (0.5)"));
    CHECK(contains(r.output, "count at max k: 0"));

    auto zero = run_cli("bound --n 3 --mean 0 --min 0 --max 1");
    CHECK(zero.exit_code == 0);
    CHECK(contains(zero.output, "sharp max variance: 0/1 (0)"));

    auto scaled = run_cli("bound --n 5 --mean 2.8 --min 2 --max 10");
    CHECK(scaled.exit_code == 0);
    CHECK(contains(scaled.output, "sharp max variance: 64/25 (2.56)"));

    auto json = run_cli("bound --n 5 --mean 0.1 --min 0 --max 1 --sample --json");
    CHECK(json.exit_code == 0);
    auto j = nlohmann::json::parse(json.output);
    CHECK(j["sharp_max_variance"]["rational"] == "1/25");
    CHECK(j["bhatia_davis"]["decimal"] == "0.09");
    CHECK(j["sharp_max_variance_sample"]["rational"] == "1/20");
}

TEST_CASE("witness command") {
    auto r = run_cli("witness --n 5 --mean 0.1 --min 0 --max 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("0 0 0 0 0.5\n", 0) == 0);
    CHECK(contains(r.output, "mean: 1/10 (0.1)"));
    CHECK(contains(r.output, "population variance: 1/25 (0.04)"));

    auto full = run_cli("witness --n 2 --mean 1 --min 0 --max 1");
    CHECK(full.output.rfind("1 1\n", 0) == 0);

    auto scaled = run_cli("witness --n 5 --mean 2.8 --min 2 --max 10");
    CHECK(scaled.output.rfind("2 2 2 2 6\n", 0) == 0);

    auto infeasible = run_cli("witness --n 5 --mean 2 --min 0 --max 1");
    CHECK(infeasible.exit_code == 4);

    auto json = run_cli("witness --n 5 --mean 0.1 --min 0 --max 1 --json");
    auto j = nlohmann::json::parse(json.output);
    CHECK(j["witness"] == nlohmann::json({"0", "0", "0", "0", "0.5"}));
    CHECK(j["population_variance"]["rational"] == "1/25");
    CHECK(j["count_at_max"] == 0);
    CHECK(j["interior_value"]["decimal"] == "0.5");
}

TEST_CASE("check command") {
    auto infeasible = run_cli("check --n 5 --mean 0.10 --sd 0.23 --min 0 --max 1");
    CHECK(infeasible.exit_code == 1);
    CHECK(contains(infeasible.output, "status: infeasible"));
    CHECK(contains(infeasible.output, "441/10000 (0.0441)"));

    auto feasible = run_cli(
        "check --n 5 --mean 0.1 --exact-mean --sd 0.2 --exact-sd --min 0 --max 1");
    CHECK(feasible.exit_code == 0);
    CHECK(contains(feasible.output, "status: feasible"));
    CHECK(contains(feasible.output, "witness: 0 0 0 0 0.5"));

    auto constant = run_cli("check --n 10 --sd 0 --mean 0.5 --min 0 --max 1");
    CHECK(constant.exit_code == 0);
    CHECK(contains(constant.output, "status: feasible"));

    auto json = run_cli(
        "check --n 5 --mean 0.10 --sd 0.23 --min 0 --max 1 --json");
    auto j = nlohmann::json::parse(json.output);
    CHECK(j["status"] == "infeasible");
    CHECK(j["max_attainable_variance"]["rational"] == "441/10000");

    auto sample = run_cli(
        "check --n 5 --mean 0.1 --exact-mean --sd 0.224 --exact-sd --min 0 --max 1 "
        "--convention sample");
    CHECK(sample.exit_code == 1);

    auto invalid = run_cli(
        "check --n 1 --mean 0.5 --sd 0.1 --min 0 --max 1 --convention sample");
    CHECK(invalid.exit_code == 4);

    auto attained = run_cli(
        "check --n 3 --mean 0.5 --exact-mean --sd 0.41 --min 0 --max 1 "
        "--mode attained");
    CHECK(attained.exit_code == 0);
    CHECK(contains(attained.output, "status: feasible"));
}

TEST_CASE("exit codes: usage and parse errors") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("bound --n 5 --mean 0.1 --min 0").exit_code == 2);
    CHECK(run_cli("bound --n 5 --mean 0.1 --min 0 --max 1 --bogus").exit_code == 2);
    CHECK(run_cli("bound --n 5 --mean abc --min 0 --max 1").exit_code == 3);
    CHECK(run_cli("check --n 5 --mean 0.1 --sd x --min 0 --max 1").exit_code == 3);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("curve command") {
    auto r = run_cli("curve --mean 0.5 --min 0 --max 1 --n-from 2 --n-to 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output ==
          "n,sharp_bound,bhatia_davis,envelope_lo,gap\n"
          "2,0.25,0.25,0.125,0\n"
          "3,0.166666666667,0.25,0.166666666667,0.0833333333333\n");

    CHECK(run_cli("curve --mean 0.5 --min 0 --max 1 --n-from 3 --n-to 2").exit_code ==
          2);

    auto zero = run_cli("curve --mean 0 --min 0 --max 1 --n-from 1 --n-to 4");
    CHECK(zero.exit_code == 0);
    CHECK(contains(zero.output, "1,0,0,"));

    std::string out_path = "/tmp/varmax_curve_out.csv";
    auto to_file = run_cli("curve --mean 0.5 --min 0 --max 1 --n-from 2 --n-to 3 "
                           "--out " + out_path);
    CHECK(to_file.exit_code == 0);
    std::ifstream in(out_path);
    std::string contents((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    CHECK(contents == r.output);
    std::remove(out_path.c_str());
}

TEST_CASE("verify command") {
    auto r = run_cli("verify --n-max 20 --den-max 8");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "verified 880 instances: all match exactly"));

    auto trivial = run_cli("verify --n-max 1 --den-max 1");
    CHECK(trivial.exit_code == 0);

    auto seeded = run_cli("verify --n-max 5 --den-max 4 --seed 42");
    CHECK(seeded.exit_code == 0);
    CHECK(contains(seeded.output, "hill-climb spot checks: 25/25 within 1e-06"));
}

TEST_CASE("audit command") {
    std::string path = fixture("audit_mixed.csv");
    auto serial = run_cli("audit " + path + " --jobs 1");
    CHECK(serial.exit_code == 1);  // one infeasible row
    CHECK(contains(serial.output, "plausible,feasible"));
    CHECK(contains(serial.output, "overdispersed,infeasible,441/10000"));
    CHECK(contains(serial.output, "broken,invalid_input"));
    CHECK(contains(serial.output, "# rows=3 feasible=1 infeasible=1 invalid=1"));

    auto parallel = run_cli("audit " + path + " --jobs 4");
    CHECK(parallel.exit_code == 1);
    CHECK(parallel.output == serial.output);  // byte-identical

    auto no_fail = run_cli("audit " + path + " --no-fail");
    CHECK(no_fail.exit_code == 0);

    auto jsonl = run_cli("audit " + path + " --format json");
    CHECK(jsonl.exit_code == 1);
    std::istringstream lines(jsonl.output);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        auto j = nlohmann::json::parse(line);  // every line is valid JSON
        if (j.contains("id")) ++rows;
    }
    CHECK(rows == 3);

    CHECK(run_cli("audit /nonexistent/file.csv").exit_code == 3);

    std::string bad_path = "/tmp/varmax_bad_header.csv";
    std::ofstream(bad_path) << "id,n,mean\nx,5,0.5\n";
    CHECK(run_cli("audit " + bad_path).exit_code == 3);
    std::remove(bad_path.c_str());
}

TEST_CASE("audit --out writes the stream to a file") {
    std::string path = fixture("audit_mixed.csv");
    std::string out_path = "/tmp/varmax_audit_out.csv";
    auto r = run_cli("audit " + path + " --out " + out_path);
    CHECK(r.exit_code == 1);
    CHECK(contains(r.output, "rows=3"));
    std::ifstream in(out_path);
    std::string contents((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    CHECK(contains(contents, "overdispersed,infeasible"));
    std::remove(out_path.c_str());
}
