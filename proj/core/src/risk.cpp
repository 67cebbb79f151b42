#include "abc/risk.hpp"

#include <algorithm>
#include <limits>

#include "abc/error.hpp"
#include "abc/model_core.hpp"

namespace abc {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view text, std::string_view whole) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    digits.remove_prefix(1);
  }
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::InvalidArgument, "not a rational number: '" + std::string(whole) + "'");
  }
  return cpp_int(std::string(text));
}

Json integer_to_json(const cpp_int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return Json(static_cast<std::int64_t>(v));
  }
  return Json(v.str());
}

cpp_int integer_from_json(const Json& j) {
  if (j.is_number_integer()) return cpp_int(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    return parse_integer(s, s);
  }
  throw Error(ErrorCode::InvalidArgument, "rational component must be an integer");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const cpp_int num = parse_integer(text.substr(0, slash), text);
    const cpp_int den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto int_part = text.substr(0, dot);
    const auto frac_part = text.substr(dot + 1);
    if (frac_part.empty() ||
        !std::all_of(frac_part.begin(), frac_part.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorCode::InvalidArgument, "not a rational number: '" + std::string(text) + "'");
    }
    const bool negative = !int_part.empty() && int_part.front() == '-';
    const std::string_view int_digits =
        (int_part.empty() || int_part == "-" || int_part == "+") ? "0" : int_part;
    const cpp_int whole = parse_integer(int_digits, text);
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const cpp_int frac{std::string(frac_part)};
    const cpp_int magnitude = cpp_int(abs(whole)) * scale + frac;
    return Rational(negative ? cpp_int(-magnitude) : magnitude, scale);
  }
  return Rational(parse_integer(text, text));
}

std::string format_rational(const Rational& value) {
  const cpp_int num = boost::multiprecision::numerator(value);
  const cpp_int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Json rational_to_json(const Rational& value) {
  return Json{{"num", integer_to_json(boost::multiprecision::numerator(value))},
              {"den", integer_to_json(boost::multiprecision::denominator(value))}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer() || j.is_string()) {
    return j.is_string() ? parse_rational(j.get<std::string>())
                         : Rational(j.get<std::int64_t>());
  }
  const cpp_int den = integer_from_json(j.at("den"));
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  return Rational(integer_from_json(j.at("num")), den);
}

ThreatModel score_scenario(const ThreatModel& model, std::string_view scenario_id,
                           int likelihood, int severity, std::string notes) {
  if (!model.find_scenario(scenario_id)) {
    throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + std::string(scenario_id) + "'");
  }
  if (likelihood < kMinFactor || likelihood > kMaxFactor || severity < kMinFactor ||
      severity > kMaxFactor) {
    throw Error(ErrorCode::OutOfRange, "likelihood and severity must be within 1..5");
  }
  ThreatModel next = next_version(model);
  RiskScore score{std::string(scenario_id), likelihood, severity, likelihood * severity,
                  std::move(notes)};
  auto it = std::find_if(next.scores.begin(), next.scores.end(),
                         [&](const RiskScore& s) { return s.scenario_ref == scenario_id; });
  if (it != next.scores.end()) {
    *it = std::move(score);
  } else {
    next.scores.push_back(std::move(score));
  }
  return next;
}

std::vector<std::pair<ThreatScenario, std::optional<RiskScore>>> ranked_scenarios(
    const ThreatModel& model) {
  std::vector<std::pair<ThreatScenario, std::optional<RiskScore>>> out;
  for (const auto& s : model.scenarios) {
    const RiskScore* score = model.find_score(s.id);
    out.emplace_back(s, score ? std::optional<RiskScore>(*score) : std::nullopt);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const int sa = a.second ? a.second->score : 0;
    const int sb = b.second ? b.second->score : 0;
    if (sa != sb) return sa > sb;
    return a.first.id < b.first.id;
  });
  return out;
}

void validate_game(const IncentiveGame& game) {
  if (game.detection_probability <= 0 || game.detection_probability > 1) {
    throw Error(ErrorCode::OutOfRange, "detection probability must lie in (0, 1]");
  }
  if (game.deposit < 0) throw Error(ErrorCode::OutOfRange, "deposit must be non-negative");
}

Rational min_deposit(const Rational& cheat_payoff, const Rational& honest_payoff,
                     const Rational& detection_probability) {
  if (detection_probability <= 0 || detection_probability > 1) {
    throw Error(ErrorCode::OutOfRange, "detection probability must lie in (0, 1]");
  }
  const Rational gain = cheat_payoff - honest_payoff;
  if (gain <= 0) return Rational(0);
  return gain / detection_probability;
}

DeterrenceResult is_deterred(const IncentiveGame& game) {
  validate_game(game);
  DeterrenceResult r;
  r.expected_cheat_payoff = game.cheat_payoff - game.detection_probability * game.deposit;
  r.deterred = r.expected_cheat_payoff <= game.honest_payoff;
  return r;
}

Json game_to_json(const IncentiveGame& game) {
  return Json{{"honest_payoff", rational_to_json(game.honest_payoff)},
              {"cheat_payoff", rational_to_json(game.cheat_payoff)},
              {"detection_probability", rational_to_json(game.detection_probability)},
              {"deposit", rational_to_json(game.deposit)}};
}

IncentiveGame game_from_json(const Json& j) {
  IncentiveGame g;
  g.honest_payoff = rational_from_json(j.at("honest_payoff"));
  g.cheat_payoff = rational_from_json(j.at("cheat_payoff"));
  g.detection_probability = j.contains("detection_probability")
                                ? rational_from_json(j.at("detection_probability"))
                                : Rational(1);
  g.deposit = j.contains("deposit") ? rational_from_json(j.at("deposit")) : Rational(0);
  validate_game(g);
  return g;
}

}  // namespace abc
