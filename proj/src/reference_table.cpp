#include "povliq/reference_table.hpp"

#include "povliq/block_pricing.hpp"

#include <cmath>

namespace povliq {

namespace {

struct StockInputs {
    const char* name;
    double price;
    double adv;
    double vol;
    double eta;
    double psi;
    double k;
};

constexpr double kPhi = 0.63;
constexpr double kGamma = 3e-6;

Scenario make_scenario(const StockInputs& in, double fraction) {
    Scenario s;
    s.name = std::string(in.name) + " " + std::to_string(static_cast<int>(std::lround(fraction * 100))) +
             "% ADV";
    s.market = {in.price, in.adv, in.vol, 252.0};
    s.impact = {in.eta, kPhi, in.psi, in.k};
    s.gamma = kGamma;
    s.q0_adv_fraction = fraction;
    s.side = Side::Sell;
    return s;
}

} // namespace

bool ReferenceCell::ok() const {
    // Rounded one-decimal figures; allow for representation error at the edge.
    return std::abs(deviation()) <= tolerance + 1e-9;
}

std::vector<ReferenceCase> reference_cases() {
    constexpr StockInputs total{"Total", 40.0, 4e6, 0.18, 0.116, 0.002, 5.8e-7};
    constexpr StockInputs axa{"Axa", 13.0, 7e6, 0.22, 0.046, 0.0007, 1.9e-7};
    constexpr StockInputs danone{"Danone", 50.0, 1.7e6, 0.18, 0.145, 0.003, 2.7e-6};

    return {
        {"Total", 0.10, make_scenario(total, 0.10), {17.1, 29.0, 10.1, 6.0, 45.1, 43.0}},
        {"Total", 0.15, make_scenario(total, 0.15), {28.1, 43.5, 13.6, 8.2, 65.3, 62.4}},
        {"Axa", 0.10, make_scenario(axa, 0.10), {13.7, 51.2, 10.7, 6.4, 68.3, 66.0}},
        {"Axa", 0.15, make_scenario(axa, 0.15), {22.5, 76.8, 14.4, 8.7, 99.9, 96.8}},
        {"Danone", 0.10, make_scenario(danone, 0.10), {11.6, 45.9, 8.0, 4.7, 58.6, 57.0}},
        {"Danone", 0.15, make_scenario(danone, 0.15), {19.1, 68.8, 10.8, 6.4, 86.0, 83.8}},
    };
}

ReferenceTableResult reproduce_reference_table() {
    ReferenceTableResult result;
    for (auto& ref : reference_cases()) {
        const auto report = pov_premium(ref.scenario.problem());
        const auto& e = ref.expected;
        ReferenceRow row{ref,
                         {{{"optimal rate (%)", report.rho_star * 100.0, e.rate_pct, kRateTolerancePct},
                           {"permanent (bps)", report.bps.permanent, e.permanent_bps, kBpsTolerance},
                           {"instantaneous (bps)", report.bps.instantaneous, e.instantaneous_bps,
                            kBpsTolerance},
                           {"risk (bps)", report.bps.risk, e.risk_bps, kBpsTolerance},
                           {"POV premium (bps)", report.bps.premium_total, e.pov_bps, kBpsTolerance},
                           {"IS premium (bps)", report.bps.is_premium.value_or(NAN), e.is_bps,
                            kBpsTolerance}}}};
        for (const auto& cell : row.cells) {
            ++result.cells_checked;
            if (!cell.ok()) {
                ++result.cells_failed;
            }
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

} // namespace povliq
