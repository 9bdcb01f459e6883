#include "cli.hpp"

#include <asep/asep.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

namespace asep::cli {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long parse_long(const std::string& text)
{
    const auto s = trim(text);
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        throw invalid_argument("not an integer: '" + text + "'");
    }
    if (used != s.size())
        throw invalid_argument("not an integer: '" + text + "'");
    return v;
}

EvalOptions eval_options(const RunConfig& c, int N)
{
    EvalOptions opts;
    if (c.method == "laurent")
        opts.method = Method::laurent;
    else if (c.method == "trapezoid")
        opts.method = Method::trapezoid;
    else
        throw invalid_argument("unknown method '" + c.method + "' (laurent or trapezoid)");
    if (c.precision == "extended")
        opts.precision = Precision::extended;
    else if (c.precision == "standard")
        opts.precision = Precision::standard;
    else
        throw invalid_argument("unknown precision '" + c.precision + "' (extended or standard)");
    if (c.radius || c.nodes) {
        const ModelParams m(c.p);
        opts.contour = Contour{c.radius.value_or(m.p() / 2.0), c.nodes.value_or(default_nodes(N))};
    }
    return opts;
}

void require_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t))
        throw invalid_argument("t must be a finite nonnegative number");
}

Window output_window(const RunConfig& c, const ModelParams& m, const InitialConfig& Y)
{
    if (c.x_range)
        return {c.x_range->first, c.x_range->second};
    return second_class_window(m, Y, c.t, c.epsilon);
}

nlohmann::json warnings_json(const std::vector<std::string>& w)
{
    auto arr = nlohmann::json::array();
    for (const auto& s : w)
        arr.push_back(s);
    return arr;
}

DistributionTable formula_table(const RunConfig& c, const ModelParams& m, const InitialConfig& Y, Window w)
{
    const auto opts = eval_options(c, Y.size());
    return c.single_species ? rightmost_single_species_table(m, Y, c.t, w.lo, w.hi, opts)
                            : second_class_table(m, Y, c.t, w.lo, w.hi, opts);
}

DistributionTable oracle_table(const RunConfig& c, const ModelParams& m, const InitialConfig& Y, double& leaked)
{
    if (Y.size() > 3)
        throw unsupported_size("the exact oracle is limited to N <= 3");
    const auto r = evolve(m, Y, c.t, c.epsilon);
    leaked = r.leaked_mass;
    return c.single_species ? rightmost_marginal(r) : second_class_marginal(r);
}

double table_value(const DistributionTable& t, long x)
{
    return t.window.contains(x) ? t.at(x).probability : 0.0;
}

SimulationMode sim_mode(const RunConfig& c)
{
    return c.single_species ? SimulationMode::single_species : SimulationMode::two_species;
}

std::uint64_t require_seed(const RunConfig& c)
{
    if (!c.seed)
        throw invalid_argument("--seed is required for " + c.subcommand);
    return *c.seed;
}

} // namespace

std::vector<long> parse_list(const std::string& text)
{
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_long(item));
    if (out.empty())
        throw invalid_argument("empty position list");
    return out;
}

std::pair<long, long> parse_range(const std::string& text)
{
    const auto colon = text.find(':', 1);
    if (colon == std::string::npos)
        throw invalid_argument("x range must look like a:b");
    const long a = parse_long(text.substr(0, colon)), b = parse_long(text.substr(colon + 1));
    if (b < a)
        throw invalid_argument("x range a:b needs a <= b");
    return {a, b};
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const OutputTable& table)
{
    std::string s;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        s += (i ? "," : "") + table.columns[i];
    s += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                s += ',';
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>)
                        s += format_number(v);
                    else if constexpr (std::is_same_v<V, long long>)
                        s += std::to_string(v);
                    else
                        s += v;
                },
                row[i]);
        }
        s += '\n';
    }
    return s;
}

nlohmann::json config_json(const RunConfig& c)
{
    nlohmann::json j;
    j["subcommand"] = c.subcommand;
    j["p"] = c.p;
    j["t"] = c.t;
    j["y"] = c.y;
    if (c.x_range)
        j["x_range"] = {c.x_range->first, c.x_range->second};
    j["method"] = c.method;
    j["precision"] = c.precision;
    if (c.radius)
        j["radius"] = *c.radius;
    if (c.nodes)
        j["nodes"] = *c.nodes;
    j["replicas"] = c.replicas;
    if (c.seed)
        j["seed"] = *c.seed;
    j["epsilon"] = c.epsilon;
    if (!c.x.empty())
        j["x"] = c.x;
    if (c.n)
        j["n"] = c.n;
    j["single_species"] = c.single_species;
    return j;
}

nlohmann::json to_json(const RunConfig& config, const OutputTable& table)
{
    nlohmann::json doc;
    doc["config"] = config_json(config);
    doc["columns"] = table.columns;
    auto rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::json::array();
        for (const auto& cell : row)
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        if (std::isfinite(v))
                            r.push_back(v);
                        else
                            r.push_back(nullptr);
                    } else {
                        r.push_back(v);
                    }
                },
                cell);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    doc["diagnostics"] = table.diagnostics;
    return doc;
}

OutputTable table_from_json(const nlohmann::json& doc)
{
    OutputTable t;
    t.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& r : doc.at("rows")) {
        std::vector<Cell> row;
        for (const auto& v : r) {
            if (v.is_null())
                row.emplace_back(nan_value);
            else if (v.is_number_integer())
                row.emplace_back(v.get<long long>());
            else if (v.is_number())
                row.emplace_back(v.get<double>());
            else
                row.emplace_back(v.get<std::string>());
        }
        t.rows.push_back(std::move(row));
    }
    t.diagnostics = doc.value("diagnostics", nlohmann::json::object());
    return t;
}

bool same_cells(const OutputTable& a, const OutputTable& b)
{
    if (a.columns != b.columns || a.rows.size() != b.rows.size())
        return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].size() != b.rows[i].size())
            return false;
        for (std::size_t j = 0; j < a.rows[i].size(); ++j) {
            const auto &u = a.rows[i][j], &v = b.rows[i][j];
            if (u.index() != v.index())
                return false;
            if (const auto* du = std::get_if<double>(&u)) {
                const double dv = std::get<double>(v);
                if (!(std::isnan(*du) && std::isnan(dv)) && *du != dv)
                    return false;
            } else if (u != v) {
                return false;
            }
        }
    }
    return true;
}

CommandResult cmd_dist(const RunConfig& c)
{
    require_time(c.t);
    const ModelParams m(c.p);
    const InitialConfig Y(c.y);
    const auto table = formula_table(c, m, Y, output_window(c, m, Y));
    CommandResult r;
    r.table.columns = {"x", "probability", "quad_error", "imag_residual"};
    for (const auto& row : table.rows)
        r.table.rows.push_back({static_cast<long long>(row.x), row.probability, row.error, row.imag_residual});
    r.table.diagnostics["total"] = table.total();
    r.table.diagnostics["max_quad_error"] = table.max_error();
    r.table.diagnostics["max_imag_residual"] = table.max_imag_residual();
    r.table.diagnostics["warnings"] = warnings_json(table.warnings);
    if (!table.warnings.empty() || !table.satisfies_invariants())
        r.code = numerical_alarm;
    return r;
}

CommandResult cmd_transition(const RunConfig& c)
{
    require_time(c.t);
    const ModelParams m(c.p);
    const InitialConfig Y(c.y);
    if (c.x.empty())
        throw invalid_argument("transition needs --x");
    const TargetConfig X(c.x);
    if (X.size() != Y.size())
        throw invalid_argument("--x and --y must have the same length");
    if (c.n < 0 || c.n > Y.size())
        throw invalid_argument("--n must satisfy 1 <= n <= N");
    const TransitionEvaluator eval(m, Y, c.t, X[0], X[X.size() - 1], AmplitudeKind::two_species,
                                   eval_options(c, Y.size()));
    CommandResult r;
    r.table.columns = {"n", "probability", "quad_error", "imag_residual"};
    double total = 0.0;
    for (int n = 1; n <= Y.size(); ++n) {
        if (c.n && n != c.n)
            continue;
        const auto v = eval(X, n);
        total += v.value.real();
        r.table.rows.push_back({static_cast<long long>(n), v.value.real(), v.error_estimate, v.value.imag()});
    }
    r.table.diagnostics["total"] = total;
    return r;
}

CommandResult cmd_simulate(const RunConfig& c)
{
    require_time(c.t);
    const ModelParams m(c.p);
    const InitialConfig Y(c.y);
    const auto seed = require_seed(c);
    if (c.replicas < 1)
        throw invalid_argument("--replicas must be at least 1");
    const auto est = estimate_pmf(m, Y, c.t, c.replicas, seed, sim_mode(c));
    CommandResult r;
    r.table.columns = {"x", "estimate", "stderr", "replicas"};
    const auto R = static_cast<long long>(c.replicas);
    if (c.x_range) {
        const double n = static_cast<double>(c.replicas);
        for (long x = c.x_range->first; x <= c.x_range->second; ++x) {
            const double mean = est.mean_at(x);
            r.table.rows.push_back({static_cast<long long>(x), mean, std::sqrt(mean * (1.0 - mean) / n), R});
        }
    } else {
        for (const auto& row : est.rows)
            r.table.rows.push_back({static_cast<long long>(row.x), row.mean, row.std_error, R});
    }
    r.table.diagnostics["seed"] = seed;
    r.table.diagnostics["max_stderr"] = est.max_stderr();
    return r;
}

CommandResult cmd_oracle(const RunConfig& c)
{
    require_time(c.t);
    const ModelParams m(c.p);
    const InitialConfig Y(c.y);
    double leaked = 0.0;
    const auto table = oracle_table(c, m, Y, leaked);
    const Window w = c.x_range ? Window{c.x_range->first, c.x_range->second} : table.window;
    CommandResult r;
    r.table.columns = {"x", "probability", "quad_error", "imag_residual"};
    for (long x = w.lo; x <= w.hi; ++x)
        r.table.rows.push_back({static_cast<long long>(x), table_value(table, x), 0.0, 0.0});
    r.table.diagnostics["total"] = table.total();
    r.table.diagnostics["leaked_mass"] = leaked;
    r.table.diagnostics["window"] = {table.window.lo, table.window.hi};
    return r;
}

CommandResult cmd_compare(const RunConfig& c)
{
    require_time(c.t);
    const ModelParams m(c.p);
    const InitialConfig Y(c.y);
    const auto seed = require_seed(c);
    if (c.replicas < 1)
        throw invalid_argument("--replicas must be at least 1");
    const Window w = output_window(c, m, Y);
    const auto formula = formula_table(c, m, Y, w);
    std::optional<DistributionTable> oracle;
    double leaked = 0.0;
    if (Y.size() <= 3)
        oracle = oracle_table(c, m, Y, leaked);
    const auto est = estimate_pmf(m, Y, c.t, c.replicas, seed, sim_mode(c));

    CommandResult r;
    r.table.columns = {"x", "formula", "oracle", "mc", "delta_oracle", "z_mc"};
    double max_delta = 0.0, max_z = 0.0;
    bool exceeded = false;
    for (const auto& row : formula.rows) {
        const double o = oracle ? table_value(*oracle, row.x) : nan_value;
        const double mc = est.mean_at(row.x);
        const double delta = oracle ? row.probability - o : nan_value;
        const double z = z_score(mc, row.probability, c.replicas);
        if (oracle) {
            max_delta = std::max(max_delta, std::abs(delta));
            exceeded = exceeded || std::abs(delta) > c.max_delta;
        }
        max_z = std::max(max_z, std::abs(z));
        exceeded = exceeded || std::abs(z) > c.max_z;
        r.table.rows.push_back({static_cast<long long>(row.x), row.probability, o, mc, delta, z});
    }
    const auto chi = chi_square_test(est, formula);
    auto& d = r.table.diagnostics;
    d["seed"] = seed;
    d["max_abs_delta_oracle"] = oracle ? nlohmann::json(max_delta) : nlohmann::json(nullptr);
    d["max_abs_z"] = max_z;
    d["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
    d["oracle_leaked_mass"] = leaked;
    d["warnings"] = warnings_json(formula.warnings);
    if (exceeded || !formula.warnings.empty())
        r.code = numerical_alarm;
    return r;
}

namespace {

struct VerifyRow {
    std::string name;
    double max_error = 0.0;
    long long evaluations = 0;
    bool passed = true;
};

double relative_gap(cplx a, cplx b)
{
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::vector<VerifyRow> structural_checks(const ModelParams& m, int trials, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const double radius = default_contour(m).radius;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const auto point = [&](int N) {
        std::vector<cplx> xi(static_cast<std::size_t>(N));
        for (auto& z : xi)
            z = std::polar(radius, angle(rng));
        return xi;
    };

    VerifyRow table1{"amplitude_table_n3"}, table2{"split_table_n3"}, braid{"braid_consistency"},
        vanish{"vanishing_rule"};
    for (int trial = 0; trial < trials; ++trial) {
        const auto xi = point(3);
        for (const auto& sigma : all_permutations(3)) {
            const auto col = sector_state(m, reduced_word(sigma), xi);
            for (int n = 1; n <= 3; ++n) {
                const cplx a = col[static_cast<std::size_t>(n - 1)];
                table1.max_error = std::max(table1.max_error, relative_gap(a, tabulated_amplitude_N3(m, sigma, xi, n)));
                ++table1.evaluations;
                const cplx split = component_amplitude_N3(m, sigma, xi, n, Sign::plus) +
                                   component_amplitude_N3(m, sigma, xi, n, Sign::minus);
                table2.max_error = std::max(table2.max_error, relative_gap(a, split));
                ++table2.evaluations;
            }
        }
        for (int N = 2; N <= 4; ++N) {
            const auto z = point(N);
            for (const auto& sigma : all_permutations(N)) {
                const auto words = all_reduced_words(sigma);
                const auto ref = sector_state(m, words.front(), z);
                for (std::size_t k = 1; k < words.size(); ++k) {
                    const auto col = sector_state(m, words[k], z);
                    for (std::size_t i = 0; i < col.size(); ++i)
                        braid.max_error = std::max(braid.max_error, relative_gap(col[i], ref[i]));
                    ++braid.evaluations;
                }
                for (int n = 1; n <= N; ++n) {
                    if (inverse_at(sigma, N) > n && ref[static_cast<std::size_t>(n - 1)] != 0.0)
                        vanish.max_error = std::max(vanish.max_error, std::abs(ref[static_cast<std::size_t>(n - 1)]));
                    ++vanish.evaluations;
                }
            }
        }
    }
    table1.passed = table1.max_error <= 1e-12;
    table2.passed = table2.max_error <= 1e-12;
    braid.passed = braid.max_error <= 1e-12;
    vanish.passed = vanish.max_error == 0.0;
    return {table1, table2, braid, vanish};
}

std::vector<VerifyRow> split_checks(const ModelParams& m, double t)
{
    const InitialConfig Y({-2, -1, 0});
    EvalOptions opts;
    opts.precision = Precision::standard;
    const SplitIdentity split(m, Y, t, default_configuration_tail, opts);
    VerifyRow per_n{"split_identity_per_slot"}, sum{"split_identity_sum"};
    for (long x = Y.rightmost() - 2; x <= Y.rightmost() + 2; ++x) {
        double rhs_sum = 0.0;
        for (int n = 1; n <= 3; ++n) {
            const auto r = split.check(x, n);
            per_n.max_error = std::max(per_n.max_error, std::abs(r.difference));
            ++per_n.evaluations;
            rhs_sum += r.rhs;
        }
        const double full = second_class_pmf(m, Y, t, x).value.real();
        sum.max_error = std::max(sum.max_error, std::abs(rhs_sum - full));
        ++sum.evaluations;
    }
    per_n.passed = per_n.max_error <= 1e-6;
    sum.passed = sum.max_error <= 1e-9;
    return {per_n, sum};
}

} // namespace

CommandResult cmd_verify(const RunConfig& c)
{
    require_time(c.t);
    const ModelParams m(c.p);
    if (c.trials < 1)
        throw invalid_argument("--trials must be at least 1");
    const std::uint64_t seed = c.seed.value_or(1);
    const auto report = verify_identities(m, c.n_max, c.trials, seed);
    std::vector<VerifyRow> rows;
    for (const auto& chk : report.checks)
        rows.push_back({chk.name, chk.max_rel_error, chk.evaluations, chk.passed});
    for (auto& r : structural_checks(m, c.trials, seed))
        rows.push_back(std::move(r));
    for (auto& r : split_checks(m, c.t))
        rows.push_back(std::move(r));

    CommandResult out;
    out.table.columns = {"check", "max_error", "evaluations", "status"};
    int failed = 0;
    for (const auto& r : rows) {
        out.table.rows.push_back({r.name, r.max_error, r.evaluations, std::string(r.passed ? "PASS" : "FAIL")});
        failed += r.passed ? 0 : 1;
    }
    out.table.diagnostics["failed"] = failed;
    out.table.diagnostics["identity_tolerance"] = report.tolerance;
    out.code = failed ? numerical_alarm : ok;
    return out;
}

namespace {

// key=value lines from --config become flags placed before the command-line ones, so flags win.
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty() || args.size() < 2)
        return args;
    std::ifstream in(path);
    if (!in)
        throw invalid_argument("cannot read config file " + path);
    std::vector<std::string> flags;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_argument("config line is not key=value: " + line);
        auto key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0)
            key = key.substr(2);
        flags.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    args.insert(args.begin() + 2, flags.begin(), flags.end());
    return args;
}

void write_output(const RunConfig& c, const OutputTable& table, std::ostream& out)
{
    std::string text;
    if (c.format == "json")
        text = to_json(c, table).dump(2) + "\n";
    else
        text = to_csv(table);
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f)
        throw invalid_argument("cannot open output file " + c.output);
    f << text;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    CLI::App app{"Position law of a second-class particle in the two-species ASEP", "asep"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string y_text, range_text, x_text, config_path;
    const auto common = [&](CLI::App* s) {
        s->add_option("--p", c.p, "right-jump probability, in (0,1)");
        s->add_option("--t", c.t, "time, >= 0");
        s->add_option("--y", y_text, "initial positions, increasing, e.g. --y=-2,-1,0")->required();
        s->add_option("--config", config_path, "key=value file with defaults for the flags");
        s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--output", c.output, "output file (default stdout)");
    };
    const auto numeric = [&](CLI::App* s) {
        s->add_option("--method", c.method, "laurent or trapezoid");
        s->add_option("--precision", c.precision, "extended or standard");
        s->add_option("--radius", c.radius, "contour radius for the trapezoid method");
        s->add_option("--nodes", c.nodes, "contour nodes per variable for the trapezoid method");
    };
    const auto windowed = [&](CLI::App* s) {
        s->add_option("--x-range", range_text, "sites a:b to report, e.g. --x-range=-5:5");
        s->add_option("--epsilon", c.epsilon, "tail mass allowed outside the default window");
        s->add_flag("--single-species", c.single_species, "law of the rightmost particle, every particle first-class");
    };

    auto* dist = app.add_subcommand("dist", "distribution of the second-class particle");
    common(dist);
    numeric(dist);
    windowed(dist);

    auto* transition = app.add_subcommand("transition", "transition probabilities P_Y(X, nu_n; t)");
    common(transition);
    numeric(transition);
    transition->add_option("--x", x_text, "target positions, increasing")->required();
    transition->add_option("--n", c.n, "slot of the second-class particle (default: all)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate");
    common(simulate);
    windowed(simulate);
    simulate->add_option("--replicas", c.replicas, "number of independent runs");
    simulate->add_option("--seed", c.seed, "random seed")->required();

    auto* oracle = app.add_subcommand("oracle", "exact finite-window master equation (N <= 3)");
    common(oracle);
    windowed(oracle);

    auto* compare = app.add_subcommand("compare", "formula against oracle and Monte Carlo");
    common(compare);
    numeric(compare);
    windowed(compare);
    compare->add_option("--replicas", c.replicas, "number of Monte Carlo runs");
    compare->add_option("--seed", c.seed, "random seed")->required();
    compare->add_option("--max-delta", c.max_delta, "largest tolerated |formula - oracle|");
    compare->add_option("--max-z", c.max_z, "largest tolerated |z| of the Monte Carlo estimate");

    auto* verify = app.add_subcommand("verify", "identity and structure checks");
    verify->add_option("--p", c.p, "right-jump probability, in (0,1)");
    verify->add_option("--t", c.t, "time used by the split identity check");
    verify->add_option("--config", config_path, "key=value file with defaults for the flags");
    verify->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    verify->add_option("--output", c.output, "output file (default stdout)");
    verify->add_option("--n-max", c.n_max, "largest n in the identity checks (2..6)");
    verify->add_option("--trials", c.trials, "random points per check");
    verify->add_option("--seed", c.seed, "random seed for the sample points");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args.insert(args.begin(), argc > 0 ? argv[0] : "asep");
        args = expand_config(std::move(args));
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }

    CommandResult result;
    try {
        c.subcommand = app.get_subcommands().front()->get_name();
        if (!y_text.empty())
            c.y = parse_list(y_text);
        if (!range_text.empty())
            c.x_range = parse_range(range_text);
        if (!x_text.empty())
            c.x = parse_list(x_text);
        if (c.subcommand == "dist")
            result = cmd_dist(c);
        else if (c.subcommand == "transition")
            result = cmd_transition(c);
        else if (c.subcommand == "simulate")
            result = cmd_simulate(c);
        else if (c.subcommand == "oracle")
            result = cmd_oracle(c);
        else if (c.subcommand == "compare")
            result = cmd_compare(c);
        else
            result = cmd_verify(c);
        write_output(c, result.table, out);
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        err << "numerical alarm: " << e.what() << "\n";
        return numerical_alarm;
    }
    if (result.code == numerical_alarm) {
        if (const auto it = result.table.diagnostics.find("warnings"); it != result.table.diagnostics.end())
            for (const auto& w : *it)
                err << "warning: " << w.get<std::string>() << "\n";
        err << "numerical alarm raised\n";
    }
    return result.code;
}

} // namespace asep::cli
