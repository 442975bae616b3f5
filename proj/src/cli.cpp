#include "povliq/cli.hpp"

#include "povliq/block_pricing.hpp"
#include "povliq/error.hpp"
#include "povliq/mc_validator.hpp"
#include "povliq/pov_engine.hpp"
#include "povliq/reference_table.hpp"
#include "povliq/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

namespace povliq::cli {

namespace {

using json = nlohmann::ordered_json;

enum class OutputMode { Human, Structured };

const char* method_name(RateMethod m) {
    return m == RateMethod::ClosedForm ? "closed_form" : "numeric";
}

const char* side_name(Side s) {
    return s == Side::Sell ? "sell" : "buy";
}

std::string scenario_label(const Scenario& s) {
    return s.name.empty() ? std::string("(unnamed)") : s.name;
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

void print_json(std::ostream& out, const json& j) {
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

int cmd_rate(const Scenario& scenario, OutputMode mode, std::ostream& out) {
    const auto problem = scenario.problem();
    const auto sol = optimal_rate(problem);

    if (mode == OutputMode::Structured) {
        print_json(out, {{"command", "rate"},
                         {"scenario", scenario.name},
                         {"q0", problem.q0},
                         {"rho_star", sol.rho_star},
                         {"method", method_name(sol.method)},
                         {"horizon_days", sol.horizon_t},
                         {"objective_value", sol.objective_value},
                         {"exceeds_full_participation", sol.exceeds_full_participation}});
        return kSuccess;
    }
    fmt::print(out, "scenario:        {}\n", scenario_label(scenario));
    fmt::print(out, "order size:      {:.0f} shares\n", problem.q0);
    fmt::print(out, "optimal rate:    {:.1f}%\n", sol.rho_star * 100.0);
    fmt::print(out, "method:          {}\n", method_name(sol.method));
    fmt::print(out, "horizon:         {:.4f} days\n", sol.horizon_t);
    fmt::print(out, "objective:       {:.2f}\n", sol.objective_value);
    if (sol.exceeds_full_participation) {
        fmt::print(out, "warning: optimal rate exceeds 100% of market volume\n");
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------

PremiumReport zero_report(const Scenario& scenario) {
    PremiumReport r;
    r.side = scenario.side;
    r.is_premium = scenario.profile.empty() ? std::optional<double>(0.0) : std::nullopt;
    r.bps.is_premium = r.is_premium;
    return r;
}

int cmd_price(const Scenario& scenario, OutputMode mode, std::ostream& out) {
    const bool empty_order = scenario.q0() == 0.0;
    const PremiumReport r = empty_order ? zero_report(scenario) : pov_premium(scenario.problem());

    if (mode == OutputMode::Structured) {
        print_json(out, {{"command", "price"},
                         {"scenario", scenario.name},
                         {"side", side_name(r.side)},
                         {"q0", scenario.q0()},
                         {"notional", r.notional},
                         {"rho_star", r.rho_star},
                         {"method", method_name(r.method)},
                         {"block_price", r.block_price},
                         {"premium",
                          {{"total", r.premium_total},
                           {"permanent", r.permanent_component},
                           {"instantaneous", r.instantaneous_component},
                           {"risk", r.risk_component},
                           {"is", optional_number(r.is_premium)}}},
                         {"premium_bps",
                          {{"total", r.bps.premium_total},
                           {"permanent", r.bps.permanent},
                           {"instantaneous", r.bps.instantaneous},
                           {"risk", r.bps.risk},
                           {"is", optional_number(r.bps.is_premium)}}}});
        return kSuccess;
    }

    fmt::print(out, "scenario:      {}\n", scenario_label(scenario));
    fmt::print(out, "side:          {}\n", side_name(r.side));
    fmt::print(out, "order size:    {:.0f} shares (notional {:.2f})\n", scenario.q0(), r.notional);
    fmt::print(out, "optimal rate:  {:.1f}% ({})\n", r.rho_star * 100.0, method_name(r.method));
    fmt::print(out, "\n{:<22}{:>10}{:>16}\n", "component", "bps", "currency");
    const auto line = [&](const char* label, double bps, double amount) {
        fmt::print(out, "{:<22}{:>10.1f}{:>16.2f}\n", label, bps, amount);
    };
    line("permanent impact", r.bps.permanent, r.permanent_component);
    line("instantaneous impact", r.bps.instantaneous, r.instantaneous_component);
    line("risk", r.bps.risk, r.risk_component);
    line("POV premium", r.bps.premium_total, r.premium_total);
    if (r.is_premium) {
        line("IS premium", *r.bps.is_premium, *r.is_premium);
    } else {
        fmt::print(out, "{:<22}{:>10}{:>16}\n", "IS premium", "n/a", "n/a");
    }
    fmt::print(out, "\nblock price:   {:.2f}\n", r.block_price);
    return kSuccess;
}

// ---------------------------------------------------------------------------

int cmd_compare(const Scenario& scenario, OutputMode mode, std::ostream& out) {
    const auto problem = scenario.problem();
    if (!problem.volume_curve.is_flat()) {
        throw Error(ErrorCode::RequiresFlatCurve, "volume.profile",
                    "the IS premium and the ratio bound are closed forms for a flat volume "
                    "curve; set 'volume.profile: flat' to compare strategies");
    }
    const auto cmp = compare_strategies(problem);
    const double floor = premium_ratio_floor();

    if (mode == OutputMode::Structured) {
        print_json(out, {{"command", "compare"},
                         {"scenario", scenario.name},
                         {"pov_premium", cmp.pov_premium},
                         {"is_premium", cmp.is_premium},
                         {"pov_premium_bps", to_bps(cmp.pov_premium, cmp.notional)},
                         {"is_premium_bps", to_bps(cmp.is_premium, cmp.notional)},
                         {"ratio", cmp.ratio},
                         {"bound", cmp.bound},
                         {"global_bound", floor},
                         {"savings_bps", cmp.savings_bps}});
        return kSuccess;
    }
    fmt::print(out, "scenario:          {}\n", scenario_label(scenario));
    fmt::print(out, "POV premium:       {:.1f} bps ({:.2f})\n", to_bps(cmp.pov_premium, cmp.notional),
               cmp.pov_premium);
    fmt::print(out, "IS premium:        {:.1f} bps ({:.2f})\n", to_bps(cmp.is_premium, cmp.notional),
               cmp.is_premium);
    fmt::print(out, "IS / POV ratio:    {:.4f}\n", cmp.ratio);
    fmt::print(out, "bound g(phi):      {:.4f}  (phi = {})\n", cmp.bound, problem.impact.phi);
    fmt::print(out, "global bound:      {:.4f}\n", floor);
    fmt::print(out, "IS savings:        {:.1f} bps\n", cmp.savings_bps);
    return kSuccess;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::int64_t paths = 200000;
    std::int64_t steps = 500;
    std::uint64_t seed = 42;
    double rho = 0.0; // 0: use the optimal rate
    double confidence = 0.99;
    unsigned threads = 0;
    std::string csv;
};

int cmd_simulate(const Scenario& scenario, const SimulateOptions& opt, OutputMode mode,
                 std::ostream& out) {
    const auto problem = scenario.problem();
    SimConfig config;
    config.n_paths = opt.paths;
    config.n_steps = opt.steps;
    config.seed = opt.seed;
    config.threads = opt.threads;
    config.rho = opt.rho > 0.0 ? opt.rho : optimal_rate(problem).rho_star;

    if (config.n_paths < 1000) {
        // Fail before spending time on a run the test would reject.
        throw Error(ErrorCode::TooFewPaths, "paths", "distribution test needs >= 1000 paths");
    }
    const auto res = simulate(problem, config);
    const auto test = distribution_test(res, opt.confidence);

    if (!opt.csv.empty()) {
        std::ofstream csv(opt.csv);
        if (!csv) {
            throw Error(ErrorCode::InvalidArgument, "csv", "cannot write " + opt.csv);
        }
        write_paths_csv(res, csv);
    }

    if (mode == OutputMode::Structured) {
        print_json(out, {{"command", "simulate"},
                         {"scenario", scenario.name},
                         {"rho", config.rho},
                         {"paths", res.n_paths},
                         {"steps", res.n_steps},
                         {"seed", config.seed},
                         {"analytic_mean", res.analytic.mean},
                         {"analytic_variance", res.analytic.variance},
                         {"horizon_days", res.analytic.horizon_t},
                         {"sample_mean", res.sample_mean},
                         {"sample_variance", res.sample_variance},
                         {"std_error_mean", res.std_error_mean},
                         {"z_score_mean", res.z_score_mean},
                         {"variance_ratio", res.variance_ratio},
                         {"skewness", res.skewness},
                         {"excess_kurtosis", res.excess_kurtosis},
                         {"log_neg_utility", res.log_neg_utility},
                         {"log_neg_utility_analytic", res.log_neg_utility_analytic},
                         {"log_neg_utility_std_error", res.log_neg_utility_std_error},
                         {"test",
                          {{"confidence", test.confidence},
                           {"z_critical", test.z_critical},
                           {"variance_ratio_interval", {test.variance_ratio_lo, test.variance_ratio_hi}},
                           {"skewness_bound", test.skewness_bound},
                           {"kurtosis_bound", test.kurtosis_bound},
                           {"mean_pass", test.mean_pass},
                           {"variance_pass", test.variance_pass},
                           {"skewness_pass", test.skewness_pass},
                           {"kurtosis_pass", test.kurtosis_pass}}},
                         {"result", test.pass ? "PASS" : "FAIL"}});
    } else {
        const auto mark = [](bool ok) { return ok ? "ok" : "FAIL"; };
        fmt::print(out, "scenario:        {}\n", scenario_label(scenario));
        fmt::print(out, "rate:            {:.2f}%  horizon {:.4f} days\n", config.rho * 100.0,
                   res.analytic.horizon_t);
        fmt::print(out, "paths / steps:   {} / {}  (seed {})\n", res.n_paths, res.n_steps, config.seed);
        fmt::print(out, "mean:            sample {:.2f}  analytic {:.2f}  z = {:.3f}  [{}]\n",
                   res.sample_mean, res.analytic.mean, res.z_score_mean, mark(test.mean_pass));
        fmt::print(out, "variance ratio:  {:.5f}  interval [{:.5f}, {:.5f}]  [{}]\n", res.variance_ratio,
                   test.variance_ratio_lo, test.variance_ratio_hi, mark(test.variance_pass));
        fmt::print(out, "skewness:        {:.5f}  bound {:.5f}  [{}]\n", res.skewness,
                   test.skewness_bound, mark(test.skewness_pass));
        fmt::print(out, "excess kurtosis: {:.5f}  bound {:.5f}  [{}]\n", res.excess_kurtosis,
                   test.kurtosis_bound, mark(test.kurtosis_pass));
        fmt::print(out, "ln(-utility):    sample {:.6f}  analytic {:.6f}  se {:.2e}\n",
                   res.log_neg_utility, res.log_neg_utility_analytic, res.log_neg_utility_std_error);
        fmt::print(out, "result:          {}\n", test.pass ? "PASS" : "FAIL");
    }
    return test.pass ? kSuccess : kStatisticalFail;
}

// ---------------------------------------------------------------------------

struct SweepOptions {
    std::string param;
    double from = 0.0;
    double to = 0.0;
    int points = 20;
    std::string scale = "log";
};

const std::map<std::string, std::function<void(Scenario&, double)>>& sweep_setters() {
    static const std::map<std::string, std::function<void(Scenario&, double)>> setters = {
        {"gamma", [](Scenario& s, double v) { s.gamma = v; }},
        {"annualized_vol", [](Scenario& s, double v) { s.market.annualized_vol = v; }},
        {"q0", [](Scenario& s, double v) {
             s.q0_shares = v;
             s.q0_adv_fraction.reset();
         }},
        {"eta", [](Scenario& s, double v) { s.impact.eta = v; }},
        {"phi", [](Scenario& s, double v) { s.impact.phi = v; }},
        {"psi", [](Scenario& s, double v) { s.impact.psi = v; }},
        {"k", [](Scenario& s, double v) { s.impact.k_perm = v; }},
        {"adv", [](Scenario& s, double v) { s.market.adv = v; }},
    };
    return setters;
}

std::vector<double> sweep_grid(const SweepOptions& opt) {
    if (opt.points < 2 || !(opt.from < opt.to)) {
        throw Error(ErrorCode::EmptyRange, "range",
                    "need --from < --to and --points >= 2");
    }
    std::vector<double> grid(static_cast<std::size_t>(opt.points));
    const double last = static_cast<double>(opt.points - 1);
    if (opt.scale == "log") {
        if (!(opt.from > 0.0)) {
            throw Error(ErrorCode::EmptyRange, "from", "log scale needs --from > 0");
        }
        const double a = std::log(opt.from);
        const double b = std::log(opt.to);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / last);
        }
    } else if (opt.scale == "linear") {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid[i] = opt.from + (opt.to - opt.from) * static_cast<double>(i) / last;
        }
    } else {
        throw Error(ErrorCode::InvalidArgument, "scale", "expected 'log' or 'linear'");
    }
    grid.front() = opt.from;
    grid.back() = opt.to;
    return grid;
}

int cmd_sweep(Scenario scenario, const SweepOptions& opt, std::ostream& out) {
    const auto& setters = sweep_setters();
    const auto setter = setters.find(opt.param);
    if (setter == setters.end()) {
        std::string known;
        for (const auto& [name, _] : setters) {
            known += (known.empty() ? "" : ", ") + name;
        }
        throw Error(ErrorCode::UnknownParameter, opt.param, "sweepable parameters: " + known);
    }
    const auto grid = sweep_grid(opt);

    // Hold the block size fixed in shares while liquidity varies.
    if (opt.param == "adv" && scenario.q0_adv_fraction) {
        scenario.q0_shares = scenario.q0();
        scenario.q0_adv_fraction.reset();
    }

    fmt::print(out, "{},rho_star,l_pov,l_is,ratio\n", opt.param);
    for (const double value : grid) {
        Scenario s = scenario;
        setter->second(s, value);
        const auto report = pov_premium(s.problem());
        if (report.is_premium) {
            fmt::print(out, "{},{},{},{},{}\n", value, report.rho_star, report.premium_total,
                       *report.is_premium, *report.is_premium / report.premium_total);
        } else {
            fmt::print(out, "{},{},{},,\n", value, report.rho_star, report.premium_total);
        }
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------

int cmd_reproduce_table(OutputMode mode, std::ostream& out) {
    const auto table = reproduce_reference_table();

    if (mode == OutputMode::Structured) {
        json rows = json::array();
        for (const auto& row : table.rows) {
            json cells = json::array();
            for (const auto& c : row.cells) {
                cells.push_back({{"label", c.label},
                                 {"computed", c.computed},
                                 {"expected", c.expected},
                                 {"deviation", c.deviation()},
                                 {"tolerance", c.tolerance},
                                 {"ok", c.ok()}});
            }
            rows.push_back({{"stock", row.reference.stock},
                            {"adv_fraction", row.reference.adv_fraction},
                            {"cells", cells}});
        }
        print_json(out, {{"command", "reproduce-table"},
                         {"rows", rows},
                         {"cells_checked", table.cells_checked},
                         {"cells_failed", table.cells_failed},
                         {"result", table.pass() ? "PASS" : "FAIL"}});
        return table.pass() ? kSuccess : kTableMismatch;
    }

    fmt::print(out, "{:<22}", "");
    for (const auto& row : table.rows) {
        fmt::print(out, "{:>9}", row.reference.stock);
    }
    fmt::print(out, "\n{:<22}", "q0 (share of ADV)");
    for (const auto& row : table.rows) {
        fmt::print(out, "{:>8.0f}%", row.reference.adv_fraction * 100.0);
    }
    fmt::print(out, "\n");
    for (std::size_t c = 0; c < 6; ++c) {
        fmt::print(out, "{:<22}", table.rows.front().cells[c].label);
        for (const auto& row : table.rows) {
            fmt::print(out, "{:>9.1f}", row.cells[c].computed);
        }
        fmt::print(out, "\n");
    }

    fmt::print(out, "\ncheck against reference values (rate tol {} pp, premia tol {} bps)\n",
               kRateTolerancePct, kBpsTolerance);
    for (const auto& row : table.rows) {
        for (const auto& c : row.cells) {
            fmt::print(out, "  {:<7}{:>4.0f}%  {:<22}{:>9.3f} vs {:>6.1f}  diff {:+.3f}  {}\n",
                       row.reference.stock, row.reference.adv_fraction * 100.0, c.label, c.computed,
                       c.expected, c.deviation(), c.ok() ? "ok" : "MISMATCH");
        }
    }
    fmt::print(out, "\n{}/{} cells within tolerance: {}\n", table.cells_checked - table.cells_failed,
               table.cells_checked, table.pass() ? "PASS" : "FAIL");
    return table.pass() ? kSuccess : kTableMismatch;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal POV participation rates and block-trade risk-liquidity premia"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string output = "human";
    const std::map<std::string, OutputMode> modes = {{"human", OutputMode::Human},
                                                     {"structured", OutputMode::Structured}};

    const auto add_common = [&](CLI::App* sub, bool needs_scenario) {
        auto* opt = sub->add_option("--scenario", scenario_path, "Scenario file (YAML or JSON)");
        if (needs_scenario) {
            opt->required();
        }
        sub->add_option("--output", output, "human or structured")
            ->check(CLI::IsMember({"human", "structured"}));
    };

    auto* rate = app.add_subcommand("rate", "Optimal participation rate");
    add_common(rate, true);
    auto* price = app.add_subcommand("price", "Block price and premium decomposition");
    add_common(price, true);
    auto* compare = app.add_subcommand("compare", "POV versus IS premium");
    add_common(compare, true);

    SimulateOptions sim_opt;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo check of the terminal cash law");
    add_common(sim, true);
    sim->add_option("--paths", sim_opt.paths, "Number of paths");
    sim->add_option("--steps", sim_opt.steps, "Time steps per path");
    sim->add_option("--seed", sim_opt.seed, "RNG seed");
    sim->add_option("--rho", sim_opt.rho, "Participation rate (default: optimal)");
    sim->add_option("--confidence", sim_opt.confidence, "Test confidence level");
    sim->add_option("--threads", sim_opt.threads, "Worker threads (0: all cores)");
    sim->add_option("--csv", sim_opt.csv, "Write path_id,x_terminal to this file");

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "Comparative statics as CSV");
    add_common(sweep, true);
    sweep->add_option("--param", sweep_opt.param, "gamma, annualized_vol, q0, eta, phi or adv")
        ->required();
    sweep->add_option("--from", sweep_opt.from, "First grid value")->required();
    sweep->add_option("--to", sweep_opt.to, "Last grid value")->required();
    sweep->add_option("--points", sweep_opt.points, "Grid size");
    sweep->add_option("--scale", sweep_opt.scale, "log or linear");

    auto* table = app.add_subcommand("reproduce-table", "Recompute the reference table and diff it");
    add_common(table, false);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInvalidInput;
    }

    const OutputMode mode = modes.at(output);
    try {
        if (table->parsed()) {
            return cmd_reproduce_table(mode, out);
        }
        const Scenario scenario = load_scenario(scenario_path);
        if (rate->parsed()) {
            return cmd_rate(scenario, mode, out);
        }
        if (price->parsed()) {
            return cmd_price(scenario, mode, out);
        }
        if (compare->parsed()) {
            return cmd_compare(scenario, mode, out);
        }
        if (sim->parsed()) {
            return cmd_simulate(scenario, sim_opt, mode, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(scenario, sweep_opt, out);
        }
    } catch (const Error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kInvalidInput;
    }
    return kInvalidInput;
}

} // namespace povliq::cli
