#pragma once

#include "povliq/model.hpp"
#include "povliq/volume_curve.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace povliq {

// A relative intraday profile entry: fraction of the trading day and volume
// rate as a multiple of ADV. Rates average to one over the day.
struct RelativeProfilePiece {
    double duration_fraction;
    double relative_rate;
};

// Inputs of one liquidation case in market conventions, as read from a
// scenario file.
//
//   name: Total 10% ADV            # optional
//   market:  { price, adv, annualized_vol, trading_days_per_year }
//   impact:  { eta, phi, psi, k }
//   trader:  { gamma }
//   order:   { q0_shares | q0_adv_fraction, side: sell | buy }
//   volume:  { profile: flat | [[duration_fraction, relative_rate], ...] }
//
// The file is YAML; any JSON document with the same keys is accepted too.
struct Scenario {
    std::string name;
    MarketSpec market;
    ImpactParams impact;
    double gamma = 0.0;
    std::optional<double> q0_shares;
    std::optional<double> q0_adv_fraction;
    std::vector<RelativeProfilePiece> profile; // empty means flat
    Side side = Side::Sell;

    double q0() const;
    VolumeCurve volume_curve() const;
    LiquidationProblem problem() const;
};

// Throws Error(ParseError) naming the offending field and source line.
Scenario parse_scenario(std::string_view text, std::string_view source = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

} // namespace povliq
