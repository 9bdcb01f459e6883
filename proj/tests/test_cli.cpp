#include <catch_amalgamated.hpp>

#include <asep/params.hpp>
#include <cli.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

using namespace asep::cli;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "asep");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("asep_cli_test_" + name);
}

} // namespace

TEST_CASE("list and range parsing", "[cli]")
{
    CHECK(parse_list("-2,-1,0") == std::vector<long>{-2, -1, 0});
    CHECK(parse_list(" 3 ") == std::vector<long>{3});
    CHECK_THROWS_AS(parse_list("1,x"), asep::invalid_argument);
    CHECK_THROWS_AS(parse_list(""), asep::invalid_argument);
    CHECK(parse_range("-5:5") == std::pair<long, long>{-5, 5});
    CHECK(parse_range("-5:-3") == std::pair<long, long>{-5, -3});
    CHECK_THROWS_AS(parse_range("5"), asep::invalid_argument);
    CHECK_THROWS_AS(parse_range("2:1"), asep::invalid_argument);
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-2) == "-2");
}

TEST_CASE("symmetric single particle reproduces the Bessel weights", "[cli]")
{
    const auto r = invoke({"dist", "--p", "0.5", "--t", "1", "--y", "0", "--x-range=-5:5"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"x", "probability", "quad_error", "imag_residual"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const long x = std::stol(rows[i][0]);
        CHECK(std::abs(std::stod(rows[i][1]) - oracle_ref::symmetric_walk(1.0, x)) < 1e-13);
    }
}

TEST_CASE("time zero gives a single row", "[cli]")
{
    const auto r = invoke({"dist", "--p", "0.7", "--t", "0", "--y=-2,-1,0"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "0");
    CHECK(std::stod(rows[1][1]) == 1.0);
}

TEST_CASE("usage errors exit with code 2", "[cli]")
{
    CHECK(invoke({"dist", "--p", "0.7", "--y=0,-1"}).code == 2);
    CHECK(invoke({"dist", "--p", "1.5", "--y=0"}).code == 2);
    CHECK(invoke({"dist", "--p", "0.7", "--t", "-1", "--y=0"}).code == 2);
    CHECK(invoke({"dist", "--p", "0.7"}).code == 2);
    CHECK(invoke({"simulate", "--p", "0.7", "--y=0"}).code == 2);
    CHECK(invoke({"oracle", "--p", "0.7", "--y=0,1,2,3"}).code == 2);
    CHECK(invoke({"dist", "--y=0", "--method", "simpson"}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"dist", "--y=0", "--format", "xml"}).code == 2);
    CHECK(invoke({"dist", "--help"}).code == 0);
}

TEST_CASE("numerical alarms exit with code 1", "[cli]")
{
    CHECK(invoke({"dist", "--p", "0.7", "--y=0", "--t", "6", "--x-range=0:1"}).code == 1);
    CHECK(invoke({"dist", "--p", "0.7", "--y=0", "--method", "trapezoid", "--radius", "0.9", "--x-range=0:0"}).code == 1);
}

TEST_CASE("JSON output round-trips bitwise", "[cli]")
{
    RunConfig c;
    c.subcommand = "dist";
    c.p = 0.7;
    c.t = 1.0;
    c.y = {-1, 0};
    c.x_range = std::pair<long, long>{-3, 3};
    const auto result = cmd_dist(c);
    const auto text = to_json(c, result.table).dump(2);
    const auto back = table_from_json(nlohmann::json::parse(text));
    CHECK(same_cells(result.table, back));
    CHECK(nlohmann::json::parse(text).contains("config"));
    CHECK(nlohmann::json::parse(text).contains("diagnostics"));

    const auto r = invoke({"dist", "--p", "0.7", "--y=-1,0", "--x-range=-3:3", "--format", "json"});
    REQUIRE(r.code == 0);
    CHECK(same_cells(result.table, table_from_json(nlohmann::json::parse(r.out))));
}

TEST_CASE("simulate output is byte-identical for a fixed seed", "[cli]")
{
    const std::vector<std::string> args = {"simulate", "--p", "0.7", "--t", "1", "--y=-1,0", "--replicas", "5000", "--seed", "17"};
    const auto a = invoke(args), b = invoke(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(csv_rows(a.out)[0] == std::vector<std::string>{"x", "estimate", "stderr", "replicas"});
    auto other = args;
    other.back() = "18";
    CHECK(invoke(other).out != a.out);
}

TEST_CASE("compare joins the three sources and enforces thresholds", "[cli]")
{
    const std::vector<std::string> base = {"compare", "--p", "0.7", "--t", "0.5", "--y=-1,0",
                                           "--replicas", "20000", "--seed", "3", "--x-range=-3:3"};
    const auto r = invoke(base);
    CHECK(r.code == 0);
    const auto rows = csv_rows(r.out);
    CHECK(rows[0] == std::vector<std::string>{"x", "formula", "oracle", "mc", "delta_oracle", "z_mc"});
    CHECK(rows.size() == 8);
    auto strict = base;
    strict.insert(strict.end(), {"--max-delta", "0", "--max-z", "0"});
    CHECK(invoke(strict).code == 1);
}

TEST_CASE("config file supplies defaults and flags win", "[cli]")
{
    const auto path = temp_file("config.txt");
    {
        std::ofstream f(path);
        f << "# defaults\np = 0.5\nt=1\nx-range = -2:2\n";
    }
    const auto r = invoke({"dist", "--config", path.string(), "--y=0"});
    REQUIRE(r.code == 0);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(std::abs(std::stod(rows[3][1]) - oracle_ref::symmetric_walk(1.0, 0)) < 1e-13);

    const auto w = invoke({"dist", "--config", path.string(), "--y=0", "--p", "0.7"});
    REQUIRE(w.code == 0);
    rows = csv_rows(w.out);
    CHECK(std::abs(std::stod(rows[3][1]) - oracle_ref::biased_walk(0.7, 1.0, 0)) < 1e-13);
    std::filesystem::remove(path);
    CHECK(invoke({"dist", "--config", "/nonexistent/asep.cfg", "--y=0"}).code == 2);
}

TEST_CASE("output file and transition subcommand", "[cli]")
{
    const auto path = temp_file("transition.csv");
    const auto r = invoke({"transition", "--p", "0.7", "--t", "0.5", "--y=-1,0", "--x=-1,0", "--output", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto rows = csv_rows(ss.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"n", "probability", "quad_error", "imag_residual"});
    std::filesystem::remove(path);
    CHECK(invoke({"transition", "--p", "0.7", "--y=-1,0", "--x=0"}).code == 2);
}

TEST_CASE("verify reports every check as passing", "[cli]")
{
    const auto r = invoke({"verify", "--p", "0.7", "--t", "0.5", "--trials", "10", "--n-max", "5"});
    INFO(r.out << r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("braid_consistency") != std::string::npos);
}
