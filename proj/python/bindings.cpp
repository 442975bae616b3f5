#include "povliq/block_pricing.hpp"
#include "povliq/error.hpp"
#include "povliq/mc_validator.hpp"
#include "povliq/model.hpp"
#include "povliq/pov_engine.hpp"
#include "povliq/reference_table.hpp"
#include "povliq/scenario.hpp"
#include "povliq/volume_curve.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace povliq;
using namespace pybind11::literals;

namespace {

// Accepts [(duration, rate), ...] from Python.
VolumeCurve piecewise_from(const std::vector<std::pair<double, double>>& profile) {
    std::vector<ProfilePiece> pieces;
    for (const auto& [d, r] : profile) {
        pieces.push_back({d, r});
    }
    return VolumeCurve::piecewise(pieces);
}

} // namespace

PYBIND11_MODULE(_povliq, m) {
    m.doc() = "Optimal percentage-of-volume liquidation, block pricing and Monte Carlo validation.";

    static py::exception<Error> error_type(m, "PovliqError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object exc = py::handle(error_type)(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            exc.attr("field") = e.field();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::enum_<Side>(m, "Side").value("SELL", Side::Sell).value("BUY", Side::Buy);
    py::enum_<RateMethod>(m, "RateMethod")
        .value("CLOSED_FORM", RateMethod::ClosedForm)
        .value("NUMERIC", RateMethod::Numeric);

    py::class_<VolumeCurve>(m, "VolumeCurve")
        .def_static("flat", &VolumeCurve::flat, "volume_per_day"_a)
        .def_static("piecewise", &piecewise_from, "day_profile"_a,
                    "Daily profile of (duration, rate) pieces, repeated every day.")
        .def_property_readonly("is_flat", &VolumeCurve::is_flat)
        .def_property_readonly("daily_volume", &VolumeCurve::daily_volume)
        .def_property_readonly("lower_bound", &VolumeCurve::lower_bound)
        .def_property_readonly("upper_bound", &VolumeCurve::upper_bound)
        .def_property_readonly("pieces",
                               [](const VolumeCurve& c) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& p : c.pieces()) {
                                       out.emplace_back(p.duration, p.rate);
                                   }
                                   return out;
                               })
        .def("rate_at", &VolumeCurve::rate_at, "t"_a)
        .def("cum_volume", &VolumeCurve::cum_volume, "t"_a)
        .def("completion_time", &VolumeCurve::completion_time, "rho"_a, "q0"_a)
        .def("risk_integral", &VolumeCurve::risk_integral, "rho"_a, "q0"_a);

    py::class_<MarketSpec>(m, "MarketSpec")
        .def(py::init([](double price, double adv, double annualized_vol, double days) {
                 return MarketSpec{price, adv, annualized_vol, days};
             }),
             "price"_a, "adv"_a, "annualized_vol"_a, "trading_days_per_year"_a = 252.0)
        .def_readwrite("price", &MarketSpec::price_s0)
        .def_readwrite("adv", &MarketSpec::adv)
        .def_readwrite("annualized_vol", &MarketSpec::annualized_vol)
        .def_readwrite("trading_days_per_year", &MarketSpec::trading_days_per_year);

    py::class_<ImpactParams>(m, "ImpactParams")
        .def(py::init([](double eta, double phi, double psi, double k) { return ImpactParams{eta, phi, psi, k}; }),
             "eta"_a, "phi"_a, "psi"_a = 0.0, "k"_a = 0.0)
        .def_readwrite("eta", &ImpactParams::eta)
        .def_readwrite("phi", &ImpactParams::phi)
        .def_readwrite("psi", &ImpactParams::psi)
        .def_readwrite("k", &ImpactParams::k_perm);

    py::class_<LiquidationProblem>(m, "LiquidationProblem")
        .def_readwrite("q0", &LiquidationProblem::q0)
        .def_readwrite("gamma", &LiquidationProblem::gamma)
        .def_readwrite("sigma", &LiquidationProblem::sigma_model)
        .def_readwrite("price", &LiquidationProblem::price_s0)
        .def_readwrite("volume_curve", &LiquidationProblem::volume_curve)
        .def_readwrite("impact", &LiquidationProblem::impact)
        .def_readwrite("side", &LiquidationProblem::side)
        .def_property_readonly("notional", &LiquidationProblem::notional);

    m.def("daily_arithmetic_vol", &daily_arithmetic_vol, "market"_a);
    m.def("build_problem", &build_problem, "market"_a, "impact"_a, "q0"_a, "gamma"_a, "curve"_a,
          "side"_a = Side::Sell);

    py::class_<CashDistribution>(m, "CashDistribution")
        .def_readonly("mean", &CashDistribution::mean)
        .def_readonly("variance", &CashDistribution::variance)
        .def_readonly("horizon", &CashDistribution::horizon_t)
        .def_readonly("rho", &CashDistribution::rho)
        .def_property_readonly("stddev", &CashDistribution::stddev);

    py::class_<RateSolution>(m, "RateSolution")
        .def_readonly("rho_star", &RateSolution::rho_star)
        .def_readonly("objective_value", &RateSolution::objective_value)
        .def_readonly("method", &RateSolution::method)
        .def_readonly("horizon", &RateSolution::horizon_t)
        .def_readonly("exceeds_full_participation", &RateSolution::exceeds_full_participation);

    m.def("objective", &objective, "problem"_a, "rho"_a);
    m.def("terminal_cash_distribution", &terminal_cash_distribution, "problem"_a, "rho"_a);
    m.def("expected_utility", &expected_utility, "problem"_a, "rho"_a);
    m.def("certainty_equivalent", &certainty_equivalent, "problem"_a, "rho"_a);
    m.def("optimal_rate_closed_form", &optimal_rate_closed_form, "problem"_a);
    m.def(
        "optimal_rate_numeric",
        [](const LiquidationProblem& p, double lo, double hi, double rel_tol) {
            return optimal_rate_numeric(p, {lo, hi}, rel_tol);
        },
        "problem"_a, "lo"_a = RateBracket{}.lo, "hi"_a = RateBracket{}.hi, "rel_tol"_a = 1e-10);
    m.def("optimal_rate", &optimal_rate, "problem"_a);

    py::class_<PremiumBps>(m, "PremiumBps")
        .def_readonly("premium_total", &PremiumBps::premium_total)
        .def_readonly("permanent", &PremiumBps::permanent)
        .def_readonly("instantaneous", &PremiumBps::instantaneous)
        .def_readonly("risk", &PremiumBps::risk)
        .def_readonly("is_premium", &PremiumBps::is_premium);

    py::class_<PremiumReport>(m, "PremiumReport")
        .def_readonly("block_price", &PremiumReport::block_price)
        .def_readonly("premium_total", &PremiumReport::premium_total)
        .def_readonly("permanent", &PremiumReport::permanent_component)
        .def_readonly("instantaneous", &PremiumReport::instantaneous_component)
        .def_readonly("risk", &PremiumReport::risk_component)
        .def_readonly("is_premium", &PremiumReport::is_premium)
        .def_readonly("rho_star", &PremiumReport::rho_star)
        .def_readonly("method", &PremiumReport::method)
        .def_readonly("notional", &PremiumReport::notional)
        .def_readonly("side", &PremiumReport::side)
        .def_readonly("bps", &PremiumReport::bps);

    py::class_<StrategyComparison>(m, "StrategyComparison")
        .def_readonly("pov_premium", &StrategyComparison::pov_premium)
        .def_readonly("is_premium", &StrategyComparison::is_premium)
        .def_readonly("ratio", &StrategyComparison::ratio)
        .def_readonly("bound", &StrategyComparison::bound)
        .def_readonly("savings_bps", &StrategyComparison::savings_bps)
        .def_readonly("notional", &StrategyComparison::notional);

    m.def("pov_premium", &pov_premium, "problem"_a);
    m.def("block_price", &block_price, "problem"_a);
    m.def("is_premium", &is_premium, "problem"_a);
    m.def("premium_ratio_bound", &premium_ratio_bound, "phi"_a);
    m.def("phi_star", &phi_star);
    m.def("premium_ratio_floor", &premium_ratio_floor);
    m.def("compare_strategies", &compare_strategies, "problem"_a);
    m.def("to_bps", &to_bps, "amount"_a, "notional"_a);

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("n_paths", &SimResult::n_paths)
        .def_readonly("n_steps", &SimResult::n_steps)
        .def_readonly("sample_mean", &SimResult::sample_mean)
        .def_readonly("sample_variance", &SimResult::sample_variance)
        .def_readonly("std_error_mean", &SimResult::std_error_mean)
        .def_readonly("skewness", &SimResult::skewness)
        .def_readonly("excess_kurtosis", &SimResult::excess_kurtosis)
        .def_readonly("analytic", &SimResult::analytic)
        .def_readonly("z_score_mean", &SimResult::z_score_mean)
        .def_readonly("variance_ratio", &SimResult::variance_ratio)
        .def_readonly("utility_estimate", &SimResult::utility_estimate)
        .def_readonly("log_neg_utility", &SimResult::log_neg_utility)
        .def_readonly("log_neg_utility_std_error", &SimResult::log_neg_utility_std_error)
        .def_readonly("log_neg_utility_analytic", &SimResult::log_neg_utility_analytic)
        .def_readonly("executed_volume", &SimResult::executed_volume)
        .def_readonly("residual_inventory", &SimResult::residual_inventory)
        .def_property_readonly("x_terminal", [](const SimResult& r) {
            return py::array_t<double>(static_cast<py::ssize_t>(r.x_terminal.size()), r.x_terminal.data());
        });

    m.def(
        "simulate",
        [](const LiquidationProblem& p, double rho, std::int64_t n_paths, std::int64_t n_steps, std::uint64_t seed,
           bool zero_noise, unsigned threads) {
            SimConfig c;
            c.rho = rho;
            c.n_paths = n_paths;
            c.n_steps = n_steps;
            c.seed = seed;
            c.zero_noise = zero_noise;
            c.threads = threads;
            py::gil_scoped_release release;
            return simulate(p, c);
        },
        "problem"_a, "rho"_a, "n_paths"_a = 100000, "n_steps"_a = 500, "seed"_a = 42, "zero_noise"_a = false,
        "threads"_a = 0);

    py::class_<DistributionTestReport>(m, "DistributionTestReport")
        .def_readonly("passed", &DistributionTestReport::pass)
        .def_readonly("mean_pass", &DistributionTestReport::mean_pass)
        .def_readonly("variance_pass", &DistributionTestReport::variance_pass)
        .def_readonly("skewness_pass", &DistributionTestReport::skewness_pass)
        .def_readonly("kurtosis_pass", &DistributionTestReport::kurtosis_pass)
        .def_readonly("confidence", &DistributionTestReport::confidence)
        .def_readonly("z_critical", &DistributionTestReport::z_critical)
        .def_readonly("variance_ratio_lo", &DistributionTestReport::variance_ratio_lo)
        .def_readonly("variance_ratio_hi", &DistributionTestReport::variance_ratio_hi)
        .def_readonly("skewness_bound", &DistributionTestReport::skewness_bound)
        .def_readonly("kurtosis_bound", &DistributionTestReport::kurtosis_bound)
        .def("__bool__", [](const DistributionTestReport& r) { return r.pass; });
    m.def("distribution_test", &distribution_test, "result"_a, "confidence"_a = 0.99);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("market", &Scenario::market)
        .def_readonly("impact", &Scenario::impact)
        .def_readonly("gamma", &Scenario::gamma)
        .def_readonly("side", &Scenario::side)
        .def_property_readonly("q0", &Scenario::q0)
        .def("volume_curve", &Scenario::volume_curve)
        .def("problem", &Scenario::problem);
    m.def("load_scenario", &load_scenario, "path"_a);
    m.def(
        "parse_scenario", [](const std::string& text) { return parse_scenario(text); }, "text"_a);

    m.def("reproduce_reference_table", [] {
        const auto table = reproduce_reference_table();
        py::list rows;
        for (const auto& row : table.rows) {
            py::list cells;
            for (const auto& c : row.cells) {
                cells.append(py::dict("label"_a = c.label, "computed"_a = c.computed, "expected"_a = c.expected,
                                      "tolerance"_a = c.tolerance, "ok"_a = c.ok()));
            }
            rows.append(py::dict("stock"_a = row.reference.stock, "adv_fraction"_a = row.reference.adv_fraction,
                                 "cells"_a = cells));
        }
        return py::dict("rows"_a = rows, "cells_checked"_a = table.cells_checked,
                        "cells_failed"_a = table.cells_failed, "passed"_a = table.pass());
    });
}
