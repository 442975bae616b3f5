#pragma once

#include "povliq/scenario.hpp"

#include <array>
#include <string>
#include <vector>

namespace povliq {

// Published figures for one liquidation case: rate in percent, premia in bps.
struct ReferenceCells {
    double rate_pct;
    double permanent_bps;
    double instantaneous_bps;
    double risk_bps;
    double pov_bps;
    double is_bps;
};

struct ReferenceCase {
    std::string stock;
    double adv_fraction;
    Scenario scenario;
    ReferenceCells expected;
};

inline constexpr double kRateTolerancePct = 0.1;
inline constexpr double kBpsTolerance = 0.15;

// Total, Axa and Danone at 10% and 15% of ADV.
std::vector<ReferenceCase> reference_cases();

struct ReferenceCell {
    std::string label;
    double computed;
    double expected;
    double tolerance;

    double deviation() const { return computed - expected; }
    bool ok() const;
};

struct ReferenceRow {
    ReferenceCase reference;
    std::array<ReferenceCell, 6> cells; // rate, permanent, instantaneous, risk, pov, is
};

struct ReferenceTableResult {
    std::vector<ReferenceRow> rows;
    int cells_checked = 0;
    int cells_failed = 0;

    bool pass() const { return cells_failed == 0; }
};

ReferenceTableResult reproduce_reference_table();

} // namespace povliq
