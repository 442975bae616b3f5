#include "povliq/scenario.hpp"

#include "povliq/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace povliq {

namespace {

constexpr double kProfileTolerance = 1e-9;

enum class Bound { Positive, NonNegative };

std::string at_line(const YAML::Node& node) {
    const auto mark = node.Mark();
    if (mark.line < 0) {
        return "";
    }
    return "line " + std::to_string(mark.line + 1) + ": ";
}

[[noreturn]] void fail(const std::string& field, const YAML::Node& node, const std::string& what) {
    throw Error(ErrorCode::ParseError, field, at_line(node) + what);
}

YAML::Node require_map(const YAML::Node& parent, const std::string& key,
                       const std::set<std::string>& allowed) {
    const YAML::Node node = parent[key];
    if (!node) {
        fail(key, parent, "missing section '" + key + "'");
    }
    if (!node.IsMap()) {
        fail(key, node, "section '" + key + "' must be a mapping");
    }
    for (const auto& kv : node) {
        const auto name = kv.first.as<std::string>();
        if (!allowed.contains(name)) {
            fail(key + "." + name, kv.first, "unknown key '" + name + "'");
        }
    }
    return node;
}

double to_number(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) {
        fail(field, node, "expected a number");
    }
    double value = 0.0;
    try {
        value = node.as<double>();
    } catch (const YAML::Exception&) {
        fail(field, node, "'" + node.Scalar() + "' is not a number");
    }
    if (!std::isfinite(value)) {
        fail(field, node, "must be finite");
    }
    return value;
}

double read_number(const YAML::Node& section, const std::string& section_name,
                   const std::string& key, Bound bound) {
    const std::string field = section_name + "." + key;
    const YAML::Node node = section[key];
    if (!node) {
        fail(field, section, "missing field '" + field + "'");
    }
    const double value = to_number(node, field);
    if (bound == Bound::Positive && !(value > 0.0)) {
        fail(field, node, "must be > 0, got " + node.Scalar());
    }
    if (bound == Bound::NonNegative && !(value >= 0.0)) {
        fail(field, node, "must be >= 0, got " + node.Scalar());
    }
    return value;
}

std::vector<RelativeProfilePiece> read_profile(const YAML::Node& volume) {
    const YAML::Node node = volume["profile"];
    if (!node) {
        fail("volume.profile", volume, "missing field 'volume.profile'");
    }
    if (node.IsScalar()) {
        if (node.Scalar() != "flat") {
            fail("volume.profile", node, "expected 'flat' or a list of [duration_fraction, relative_rate]");
        }
        return {};
    }
    if (!node.IsSequence() || node.size() == 0) {
        fail("volume.profile", node, "expected 'flat' or a non-empty list");
    }

    std::vector<RelativeProfilePiece> pieces;
    double total_duration = 0.0;
    double mean_rate = 0.0;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const YAML::Node entry = node[i];
        const std::string field = "volume.profile[" + std::to_string(i) + "]";
        if (!entry.IsSequence() || entry.size() != 2) {
            fail(field, entry, "expected [duration_fraction, relative_rate]");
        }
        const double duration = to_number(entry[0], field + ".duration_fraction");
        const double rate = to_number(entry[1], field + ".relative_rate");
        if (!(duration > 0.0)) {
            fail(field + ".duration_fraction", entry[0], "must be > 0");
        }
        if (!(rate > 0.0)) {
            fail(field + ".relative_rate", entry[1], "must be > 0");
        }
        pieces.push_back({duration, rate});
        total_duration += duration;
        mean_rate += duration * rate;
    }
    if (std::abs(total_duration - 1.0) > kProfileTolerance) {
        fail("volume.profile", node,
             "durations sum to " + std::to_string(total_duration) + ", expected 1");
    }
    if (std::abs(mean_rate - 1.0) > kProfileTolerance) {
        fail("volume.profile", node,
             "relative rates average to " + std::to_string(mean_rate) + ", expected 1");
    }
    return pieces;
}

Scenario from_yaml(const YAML::Node& root) {
    if (!root.IsMap()) {
        fail("", root, "scenario must be a mapping");
    }
    const std::set<std::string> top = {"name", "market", "impact", "trader", "order", "volume"};
    for (const auto& kv : root) {
        const auto name = kv.first.as<std::string>();
        if (!top.contains(name)) {
            fail(name, kv.first, "unknown section '" + name + "'");
        }
    }

    Scenario s;
    if (root["name"]) {
        s.name = root["name"].as<std::string>();
    }

    const auto market =
        require_map(root, "market", {"price", "adv", "annualized_vol", "trading_days_per_year"});
    s.market.price_s0 = read_number(market, "market", "price", Bound::Positive);
    s.market.adv = read_number(market, "market", "adv", Bound::Positive);
    s.market.annualized_vol = read_number(market, "market", "annualized_vol", Bound::Positive);
    if (market["trading_days_per_year"]) {
        s.market.trading_days_per_year =
            read_number(market, "market", "trading_days_per_year", Bound::Positive);
    }

    const auto impact = require_map(root, "impact", {"eta", "phi", "psi", "k"});
    s.impact.eta = read_number(impact, "impact", "eta", Bound::Positive);
    s.impact.phi = read_number(impact, "impact", "phi", Bound::Positive);
    s.impact.psi = read_number(impact, "impact", "psi", Bound::NonNegative);
    s.impact.k_perm = read_number(impact, "impact", "k", Bound::NonNegative);

    const auto trader = require_map(root, "trader", {"gamma"});
    s.gamma = read_number(trader, "trader", "gamma", Bound::Positive);

    const auto order = require_map(root, "order", {"q0_shares", "q0_adv_fraction", "side"});
    const bool has_shares = static_cast<bool>(order["q0_shares"]);
    const bool has_fraction = static_cast<bool>(order["q0_adv_fraction"]);
    if (has_shares == has_fraction) {
        fail("order", order, "exactly one of 'q0_shares' or 'q0_adv_fraction' is required");
    }
    if (has_shares) {
        s.q0_shares = read_number(order, "order", "q0_shares", Bound::NonNegative);
    } else {
        s.q0_adv_fraction = read_number(order, "order", "q0_adv_fraction", Bound::NonNegative);
    }
    if (order["side"]) {
        const auto side = order["side"].as<std::string>();
        if (side == "sell") {
            s.side = Side::Sell;
        } else if (side == "buy") {
            s.side = Side::Buy;
        } else {
            fail("order.side", order["side"], "expected 'sell' or 'buy', got '" + side + "'");
        }
    }

    if (root["volume"]) {
        const auto volume = require_map(root, "volume", {"profile"});
        s.profile = read_profile(volume);
    }
    return s;
}

} // namespace

double Scenario::q0() const {
    return q0_shares ? *q0_shares : q0_adv_fraction.value_or(0.0) * market.adv;
}

VolumeCurve Scenario::volume_curve() const {
    if (profile.empty()) {
        return VolumeCurve::flat(market.adv);
    }
    std::vector<ProfilePiece> pieces;
    pieces.reserve(profile.size());
    for (const auto& p : profile) {
        pieces.push_back({p.duration_fraction, p.relative_rate * market.adv});
    }
    return VolumeCurve::piecewise(pieces);
}

LiquidationProblem Scenario::problem() const {
    return build_problem(market, impact, q0(), gamma, volume_curve(), side);
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorCode::ParseError, std::string(source),
                    "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    return from_yaml(root);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, path.string(), "cannot open scenario file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.string());
}

} // namespace povliq
