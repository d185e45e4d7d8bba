#include "spinflip/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace spinflip;
using nlohmann::json;

namespace
{

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("spinflip_test_" + name);
}

} // namespace

TEST_CASE("eigenstate: rest frame spin up")
{
    const Result r = run({"eigenstate", "--beta", "0", "--alpha-deg", "0", "--zeta", "+1", "--format", "json"});
    REQUIRE(r.code == cli::kPass);
    const json j = json::parse(r.out);
    CHECK(j["spinor"][0][0].get<double>() == 1.0);
    for (int i = 1; i < 4; ++i) CHECK(j["spinor"][i][0].get<double>() == 0.0);
    CHECK(j["residual"].get<double>() < 1e-12);
    CHECK(j["pass"].get<bool>());
}

TEST_CASE("eigenstate: table output for a moving state")
{
    const Result r = run({"eigenstate", "--beta", "0.6", "--alpha-deg", "45", "--zeta", "-1"});
    CHECK(r.code == cli::kPass);
    CHECK(r.out.find("<-z|Pi_y|z>") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("configuration errors exit with code 2")
{
    const Result r = run({"eigenstate", "--beta", "1.0", "--alpha-deg", "0", "--zeta", "1"});
    CHECK(r.code == cli::kConfigError);
    CHECK(r.err.find("beta must be < 1") != std::string::npos);

    CHECK(run({"precess", "--beta", "0.5", "--zeta", "2"}).code == cli::kConfigError);
    CHECK(run({"precess", "--beta", "0.5", "--orientation", "w"}).code == cli::kConfigError);
    CHECK(run({"precess", "--beta", "0.5", "--samples-per-period", "8"}).code == cli::kConfigError);
    CHECK(run({"precess", "--beta", "0.5", "--bogus"}).code == cli::kConfigError);
    CHECK(run({"precess"}).code == cli::kConfigError);
    CHECK(run({}).code == cli::kConfigError);
    CHECK(run({"sweep", "--sweep", "gamma=0:1:3"}).code == cli::kConfigError);
    CHECK(run({"precess", "--beta", "0.5", "--physical"}).code == cli::kConfigError);
}

TEST_CASE("precess: rest-frame Larmor precession")
{
    const Result r = run({"precess", "--beta", "0", "--orientation", "y", "--periods", "1", "--samples-per-period", "360"});
    REQUIRE(r.code == cli::kPass);
    std::string header;
    const auto rows = parse_csv(r.out, &header);
    CHECK(header == "t,pi_x,pi_y,pi_z,beta_pi,invariant");
    REQUIRE(rows.size() == 361);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 6);
        REQUIRE(std::abs(row[2] - std::cos(row[0])) < 1e-10);
        REQUIRE(std::abs(row[5] - 1.0) < 1e-10);
    }
}

TEST_CASE("precess: z orientation columns are constant")
{
    const Result r = run({"precess", "--beta", "0.7", "--alpha-deg", "30", "--orientation", "z", "--zeta", "-1", "--periods", "2", "--samples-per-period", "50"});
    REQUIRE(r.code == cli::kPass);
    const auto rows = parse_csv(r.out);
    for (const auto& row : rows)
        for (int c = 1; c <= 4; ++c) REQUIRE(std::abs(row[c] - rows[0][c]) < 1e-12);
}

TEST_CASE("precess: momentum orientation starts with beta_pi = epsilon beta")
{
    for (const char* eps : {"1", "-1"}) {
        const Result r = run({"precess", "--beta", "0.85", "--alpha-deg", "63", "--orientation", "momentum", "--epsilon", eps, "--periods", "1", "--samples-per-period", "16"});
        REQUIRE(r.code == cli::kPass);
        const auto rows = parse_csv(r.out);
        CHECK(rows[0][4] == doctest::Approx(std::stoi(eps) * 0.85).epsilon(1e-12));
    }
}

TEST_CASE("precess: JSON layout and physical time units")
{
    const Result r = run({"precess", "--beta", "0.3", "--periods", "1", "--samples-per-period", "16", "--format", "json"});
    REQUIRE(r.code == cli::kPass);
    const json j = json::parse(r.out);
    CHECK(j["schema"] == "spinflip.history/1");
    CHECK(j["t"].size() == 17);
    CHECK(j["invariant"].size() == 17);

    const Result p = run({"precess", "--beta", "0", "--periods", "1", "--samples-per-period", "16", "--physical", "--mu", "1e-26", "--field", "1"});
    REQUIRE(p.code == cli::kPass);
    const auto rows = parse_csv(p.out);
    // one Larmor period in seconds: 2 pi hbar / (2 mu H)
    CHECK(rows.back()[0] == doctest::Approx(2 * std::numbers::pi * 1.054571817e-34 / 2e-26).epsilon(1e-12));
}

TEST_CASE("bmt: prefixed trajectory columns")
{
    const Result r = run({"bmt", "--beta", "0.6", "--alpha-deg", "45", "--periods", "2", "--samples-per-period", "100"});
    REQUIRE(r.code == cli::kPass);
    std::string header;
    const auto rows = parse_csv(r.out, &header);
    CHECK(header == "t,bmt_s_x,bmt_s_y,bmt_s_z,bmt_pi_x,bmt_pi_y,bmt_pi_z,bmt_beta_pi,bmt_invariant");
    REQUIRE(rows.size() == 201);
    for (const auto& row : rows) {
        REQUIRE(std::abs(std::sqrt(row[1] * row[1] + row[2] * row[2] + row[3] * row[3]) - 1.0) < 1e-9);
        REQUIRE(std::abs(row[8] - 1.0) < 1e-9);
    }
}

TEST_CASE("compare: flagship run passes, fault injection fails")
{
    const Result ok = run({"compare", "--beta", "0.6", "--alpha-deg", "45", "--orientation", "y", "--periods", "10"});
    REQUIRE(ok.code == cli::kPass);
    const json j = json::parse(ok.out);
    CHECK(j["pass"].get<bool>());
    CHECK(j["schema"] == "spinflip.compare/1");

    const Result z = run({"compare", "--beta", "0.4", "--alpha-deg", "70", "--orientation", "z"});
    REQUIRE(z.code == cli::kPass);
    CHECK(json::parse(z.out)["no_oscillation"].get<bool>());

    const Result bad = run({"compare", "--beta", "0.6", "--alpha-deg", "45", "--omega-scale", "1.01"});
    CHECK(bad.code == cli::kPhysicsFail);
    CHECK(json::parse(bad.out)["frequency_rel_error"].get<double>() == doctest::Approx(0.01).epsilon(1e-3));

    const Result table = run({"compare", "--beta", "0.6", "--orientation", "custom", "--theta-deg", "30", "--phi-deg", "200", "--format", "table"});
    CHECK(table.code == cli::kPass);
    CHECK(table.out.find("PASS") != std::string::npos);
}

TEST_CASE("sweep: 200-point grid, deterministic across thread counts")
{
    const Result one = run({"sweep", "--sweep", "beta=0:0.95:20,alpha=0:90:10", "--periods", "10", "--samples-per-period", "200", "--orientation", "x"});
    REQUIRE(one.code == cli::kPass);
    std::istringstream lines(one.out);
    std::string header, line;
    std::getline(lines, header);
    CHECK(header.rfind("index,beta,alpha_deg,", 0) == 0);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        REQUIRE(line.substr(line.size() - 2) == ",1");
    }
    CHECK(rows == 200);

    const Result four = run({"compare", "--sweep", "beta=0:0.95:20,alpha=0:90:10", "--periods", "10", "--samples-per-period", "200", "--orientation", "x", "--threads", "4"});
    CHECK(four.code == cli::kPass);
    CHECK(four.out == one.out);
}

TEST_CASE("output is byte-identical across runs")
{
    const std::vector<std::string> args{"compare", "--beta", "0.93", "--alpha-deg", "12", "--orientation", "momentum", "--epsilon", "-1"};
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("config file: flags override file values, file overrides defaults")
{
    const auto path = temp_file("config.txt");
    {
        std::ofstream f(path);
        f << "# run config\nbeta = 0.5\nalpha-deg=30\norientation = z\nperiods=1\nsamples-per-period = 16\n";
    }
    const Result from_file = run({"precess", "--config", path.string()});
    REQUIRE(from_file.code == cli::kPass);
    const auto rows = parse_csv(from_file.out);
    CHECK(rows.size() == 17);
    CHECK(std::abs(rows[0][2]) < 1e-15); // z orientation: pi_y = 0

    const Result overridden = run({"precess", "--config", path.string(), "--orientation", "y"});
    REQUIRE(overridden.code == cli::kPass);
    CHECK(parse_csv(overridden.out)[0][2] == doctest::Approx(1.0 / std::sqrt(0.75)));

    {
        std::ofstream f(path);
        f << "beta\n";
    }
    CHECK(run({"precess", "--config", path.string()}).code == cli::kConfigError);
    CHECK(run({"precess", "--config", "/nonexistent/spinflip.cfg"}).code == cli::kConfigError);
    std::filesystem::remove(path);
}

TEST_CASE("output file and I/O failure")
{
    const auto path = temp_file("out.csv");
    const Result r = run({"precess", "--beta", "0.2", "--periods", "1", "--samples-per-period", "16", "-o", path.string()});
    CHECK(r.code == cli::kPass);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "t,pi_x,pi_y,pi_z,beta_pi,invariant");
    std::filesystem::remove(path);

    CHECK(run({"precess", "--beta", "0.2", "-o", "/nonexistent/dir/out.csv"}).code == cli::kIoError);
}

TEST_CASE("scales")
{
    const Result r = run({"scales", "--gamma", "10", "--omega0", "2", "--format", "json"});
    REQUIRE(r.code == cli::kPass);
    const json j = json::parse(r.out);
    CHECK(j["omega_max"].get<double>() == 2000.0);
    CHECK(j["time_ratio"].get<double>() * 1e4 == doctest::Approx(2 * std::numbers::pi));
    CHECK(j["rho"].get<double>() == 0.5);

    const Result csv = run({"scales", "--beta", "0.6"});
    CHECK(csv.out.rfind("gamma,omega0,omega_max,rho,time_ratio\n1.25,", 0) == 0);
}

TEST_CASE("large coupling emits a warning")
{
    const Result r = run({"precess", "--beta", "0.2", "--S", "0.05", "--periods", "1", "--samples-per-period", "16"});
    CHECK(r.code == cli::kPass);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("parse_sweep")
{
    const auto axes = cli::parse_sweep("beta=0:0.95:20, alpha=0:90:10");
    REQUIRE(axes.size() == 2);
    CHECK(axes[0].values().size() == 20);
    CHECK(axes[0].values().back() == 0.95);
    CHECK(axes[1].values()[1] == 10.0);
    CHECK_THROWS_AS(cli::parse_sweep("beta=0:1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_sweep("beta=0:x:3"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_sweep("beta=0:1:3,beta=0:1:3"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_sweep(""), InvalidArgument);
}
