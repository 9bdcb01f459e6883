#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace asep::cli {

enum exit_code : int { ok = 0, numerical_alarm = 1, usage = 2 };

struct RunConfig {
    std::string subcommand;
    double p = 0.5;
    double t = 1.0;
    std::vector<long> y{0};
    std::optional<std::pair<long, long>> x_range;
    std::string method = "laurent";
    std::string precision = "extended";
    std::optional<double> radius;
    std::optional<int> nodes;
    std::uint64_t replicas = 100000;
    std::optional<std::uint64_t> seed;
    double epsilon = 1e-12;
    std::string format = "csv";
    std::string output;
    std::vector<long> x;          // transition target
    int n = 0;                    // transition slot, 0 for every slot
    double max_delta = 1e-7;      // compare
    double max_z = 4.0;           // compare
    int n_max = 6;                // verify
    int trials = 50;              // verify
    bool single_species = false;
};

using Cell = std::variant<long long, double, std::string>;

struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json diagnostics = nlohmann::json::object();
};

std::vector<long> parse_list(const std::string& text);
std::pair<long, long> parse_range(const std::string& text);
std::string format_number(double v);

std::string to_csv(const OutputTable& table);
nlohmann::json to_json(const RunConfig& config, const OutputTable& table);
nlohmann::json config_json(const RunConfig& config);
OutputTable table_from_json(const nlohmann::json& doc);
bool same_cells(const OutputTable& a, const OutputTable& b);

// Result of one subcommand: the table to write and the exit code it implies.
struct CommandResult {
    OutputTable table;
    int code = ok;
};

CommandResult cmd_dist(const RunConfig& c);
CommandResult cmd_transition(const RunConfig& c);
CommandResult cmd_simulate(const RunConfig& c);
CommandResult cmd_oracle(const RunConfig& c);
CommandResult cmd_compare(const RunConfig& c);
CommandResult cmd_verify(const RunConfig& c);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace asep::cli
