#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "abc/model.hpp"
#include "abc/serialization.hpp"

namespace abc {

// Exact arbitrary-precision rational used for every payoff quantity.
using Rational = boost::multiprecision::cpp_rational;

// Accepts integers ("12", "-3"), fractions ("1/2") and finite decimals
// ("0.25"); anything else is InvalidArgument.
Rational parse_rational(std::string_view text);
// "6", "-3/4": integer when the denominator is 1.
std::string format_rational(const Rational& value);

// {"num": n, "den": d} with d > 0 in lowest terms. Components that do not
// fit in 64 bits are written as decimal strings.
Json rational_to_json(const Rational& value);
Rational rational_from_json(const Json& j);

struct IncentiveGame {
  Rational honest_payoff;
  Rational cheat_payoff;  // gross gain when cheating
  Rational detection_probability{1};
  Rational deposit;
};

struct DeterrenceResult {
  bool deterred = false;
  Rational expected_cheat_payoff;
};

inline constexpr int kMinFactor = 1;
inline constexpr int kMaxFactor = 5;

ThreatModel score_scenario(const ThreatModel& model, std::string_view scenario_id,
                           int likelihood, int severity, std::string notes);

// Scenarios with their scores, highest score first; unscored scenarios last,
// ties broken by scenario id.
std::vector<std::pair<ThreatScenario, std::optional<RiskScore>>> ranked_scenarios(
    const ThreatModel& model);

// Smallest penalty deposit that makes cheating unprofitable when a detected
// cheater forfeits the deposit: max(0, (cheat - honest) / p). At p = 1 this
// is the cheater's additional payoff over honest behaviour.
Rational min_deposit(const Rational& cheat_payoff, const Rational& honest_payoff,
                     const Rational& detection_probability);

// Risk-neutral single round: the cheater keeps the gain and loses the
// deposit with probability p, so expected = cheat - p * deposit. Deterred
// iff expected <= honest.
DeterrenceResult is_deterred(const IncentiveGame& game);

void validate_game(const IncentiveGame& game);

Json game_to_json(const IncentiveGame& game);
IncentiveGame game_from_json(const Json& j);

}  // namespace abc
