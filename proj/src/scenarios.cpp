#include "dissuasion/scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include "dissuasion/benchmark.hpp"

namespace dissuasion {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Unconditional: return "unconditional";
    case Regime::ActionBased: return "action";
    case Regime::SignalBased: return "signal";
  }
  return "?";
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::Always: return "always";
    case Condition::Refrain: return "R";
    case Condition::Act: return "A";
    case Condition::Positive: return "+";
    case Condition::Negative: return "-";
  }
  return "?";
}

Regime parse_regime(const std::string& text) {
  if (text == "unconditional" || text == "Unconditional") return Regime::Unconditional;
  if (text == "action" || text == "ActionBased") return Regime::ActionBased;
  if (text == "signal" || text == "SignalBased") return Regime::SignalBased;
  throw std::invalid_argument("unknown regime '" + text + "' (expected unconditional|action|signal)");
}

std::vector<Condition> conditions_for(Regime regime) {
  switch (regime) {
    case Regime::Unconditional: return {Condition::Always};
    case Regime::ActionBased: return {Condition::Refrain, Condition::Act};
    case Regime::SignalBased: return {Condition::Positive, Condition::Negative};
  }
  return {};
}

const Period2Rule* EquilibriumReport::rule(Message m, Condition c) const {
  for (const auto& r : period2_policy) {
    if (r.period1_message == m && r.condition == c) return &r;
  }
  return nullptr;
}

namespace {

// Cost of splitting q into <anchor;1> when the anchor costs `anchor_cost` and
// certainty costs 2 (AA).
double chord_to_certainty(double q, double anchor, double anchor_cost) {
  return anchor_cost + (q - anchor) * (2 - anchor_cost) / (1 - anchor);
}

void add_silent_branch_rules(EquilibriumReport& report, Message m) {
  for (Condition c : conditions_for(report.regime)) report.period2_policy.push_back({m, c, std::nullopt});
}

EquilibriumReport base_report(Regime regime, double q) {
  check_belief(q, "prior");
  EquilibriumReport report;
  report.regime = regime;
  report.prior = q;
  return report;
}

void finish(EquilibriumReport& report, const Model& model) {
  // The receiver only acts once the good state has been revealed, so every
  // action earns the receiver 1 and costs the sender 1.
  report.receiver_payoff = report.sender_cost;
  report.attains_lower_bound =
      std::abs(report.sender_cost - no_info_payoff(report.prior, model)) <= kExactTol;
}

}  // namespace

EquilibriumReport unconditional_equilibrium(double q, const Model& model) {
  auto report = base_report(Regime::Unconditional, q);
  const double qi = model.thresholds().q_i;
  if (q <= qi) {
    add_silent_branch_rules(report, Message::Silent);
    report.sender_cost = 0;
  } else {
    report.period1_split = make_split(q, qi);
    add_silent_branch_rules(report, Message::Good);
    add_silent_branch_rules(report, Message::Silent);
    report.sender_cost = 2 * (q - qi) / (1 - qi);
  }
  finish(report, model);
  return report;
}

EquilibriumReport action_based_equilibrium(double q, const Model& model) {
  auto report = base_report(Regime::ActionBased, q);
  const auto& t = model.thresholds();
  if (q <= t.q_i) {
    add_silent_branch_rules(report, Message::Silent);
    report.sender_cost = 0;
  } else if (q <= t.p_star) {
    report.period2_policy.push_back({Message::Silent, Condition::Refrain, make_split(q, xi(q, model))});
    report.period2_policy.push_back({Message::Silent, Condition::Act, std::nullopt});
    report.sender_cost = no_info_payoff(q, model);
  } else {
    report.period1_split = make_split(q, t.p_star);
    add_silent_branch_rules(report, Message::Good);
    report.period2_policy.push_back({Message::Silent, Condition::Refrain, make_split(t.p_star, 0.0)});
    report.period2_policy.push_back({Message::Silent, Condition::Act, std::nullopt});
    report.sender_cost = t.p_star > t.q_ii ? no_info_payoff(q, model)
                                           : chord_to_certainty(q, t.p_star, t.p_star);
  }
  finish(report, model);
  return report;
}

EquilibriumReport signal_based_equilibrium(double q, const Model& model) {
  const auto& t = model.thresholds();
  if (!t.p_e || q <= *t.p_e) {
    auto report = action_based_equilibrium(q, model);
    report.regime = Regime::SignalBased;
    for (auto& r : report.period2_policy) {
      r.condition = r.condition == Condition::Refrain ? Condition::Positive : Condition::Negative;
    }
    return report;
  }
  auto report = base_report(Regime::SignalBased, q);
  const double pe = *t.p_e;
  report.period1_split = make_split(q, pe);
  add_silent_branch_rules(report, Message::Good);
  report.period2_policy.push_back({Message::Silent, Condition::Positive, make_split(pe, xi(pe, model))});
  report.period2_policy.push_back({Message::Silent, Condition::Negative, std::nullopt});
  report.sender_cost = chord_to_certainty(q, pe, no_info_payoff(pe, model));
  finish(report, model);
  return report;
}

EquilibriumReport equilibrium(Regime regime, double q, const Model& model) {
  switch (regime) {
    case Regime::Unconditional: return unconditional_equilibrium(q, model);
    case Regime::ActionBased: return action_based_equilibrium(q, model);
    case Regime::SignalBased: return signal_based_equilibrium(q, model);
  }
  throw std::invalid_argument("unknown regime");
}

double equilibrium_cost(Regime regime, double q, const Model& model) {
  check_belief(q, "prior");
  const auto& t = model.thresholds();
  switch (regime) {
    case Regime::Unconditional:
      return q <= t.q_i ? 0.0 : 2 * (q - t.q_i) / (1 - t.q_i);
    case Regime::ActionBased:
      if (q <= t.p_star || t.p_star > t.q_ii) return no_info_payoff(q, model);
      return chord_to_certainty(q, t.p_star, t.p_star);
    case Regime::SignalBased:
      if (!t.p_e || q <= *t.p_e) return equilibrium_cost(Regime::ActionBased, q, model);
      return chord_to_certainty(q, *t.p_e, no_info_payoff(*t.p_e, model));
  }
  throw std::invalid_argument("unknown regime");
}

double action_precvx_cost(double q, const Model& model) {
  check_belief(q);
  const auto& t = model.thresholds();
  if (q < t.p_star) throw std::domain_error("action_precvx_cost requires q >= p_star");
  if (q >= t.q_ii) return 2.0;
  return 1 + q * model.alpha_g() + (1 - q) * model.alpha_l();
}

double signal_precvx_cost(double q, const Model& model) {
  check_belief(q);
  const auto& t = model.thresholds();
  if (!t.p_e) throw std::domain_error("signal_precvx_cost requires alpha_g > 1/2");
  const double pe = *t.p_e, pss = *t.p_star_star;
  if (q <= pe) return no_info_payoff(q, model);
  if (q <= pss) return stage_payoff(q, model) / (1 - model.alpha_g());
  if (q <= t.q_ii) return 1 + q * model.alpha_g() - (1 - q) * model.alpha_l() * model.c();
  return 1 + (q - t.q_m) / (1 - t.q_m);
}

double gamma_hat_unconditional(double q, const Model& model) {
  check_belief(q);
  const auto& t = model.thresholds();
  if (q < t.q_i - kExactTol || q > t.q_m + kExactTol) {
    throw std::domain_error("gamma_hat_unconditional requires q in [q_i, q_m]");
  }
  const double c = model.c(), ag = model.alpha_g(), al = model.alpha_l();
  const double reveal = (q - (1 - q) * c + q * ag - (1 - q) * al * c) / ag;  // q * gamma_hat
  if (reveal < equilibrium_cost(Regime::Unconditional, q, model) - kExactTol) {
    throw std::logic_error("period-2 unconditional disclosure undercuts the period-1 split");
  }
  return reveal / q;
}

}  // namespace dissuasion
