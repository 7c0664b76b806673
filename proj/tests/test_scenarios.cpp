#include <doctest.h>

#include <random>

#include "dissuasion/benchmark.hpp"
#include "dissuasion/game_engine.hpp"
#include "dissuasion/scenarios.hpp"
#include "reference.hpp"

using namespace dissuasion;

namespace {

const Model kRef{GameParams{1.0, 0.75, 0.25}};
const Model kLowSignal{GameParams{1.0, 0.5, 0.25}};

}  // namespace

TEST_CASE("unconditional regime") {
  auto r = unconditional_equilibrium(0.6, kRef);
  CHECK(r.sender_cost == doctest::Approx(0.628571428571).epsilon(1e-11));
  CHECK(r.receiver_payoff == r.sender_cost);
  REQUIRE(r.period1_split.has_value());
  CHECK(r.period1_split->branches.back().posterior == doctest::Approx(kRef.thresholds().q_i));
  CHECK(unconditional_equilibrium(kRef.thresholds().q_i, kRef).sender_cost == 0.0);
  CHECK(unconditional_equilibrium(1.0, kRef).sender_cost == doctest::Approx(2.0));
  CHECK(unconditional_equilibrium(0.3, kRef).attains_lower_bound);
}

TEST_CASE("action-based regime") {
  auto r = action_based_equilibrium(0.5, kRef);
  CHECK(r.sender_cost == doctest::Approx(0.25));
  CHECK(r.attains_lower_bound);
  CHECK_FALSE(r.period1_split.has_value());
  const auto* after_refrain = r.rule(Message::Silent, Condition::Refrain);
  REQUIRE(after_refrain != nullptr);
  REQUIRE(after_refrain->split.has_value());
  CHECK(after_refrain->split->branches.back().posterior == doctest::Approx(1.0 / 3));
  const auto* after_act = r.rule(Message::Silent, Condition::Act);
  REQUIRE(after_act != nullptr);
  CHECK_FALSE(after_act->split.has_value());

  r = action_based_equilibrium(0.8, kRef);
  CHECK(r.sender_cost == doctest::Approx(1.266666666667).epsilon(1e-11));
  CHECK(r.sender_cost > no_info_payoff(0.8, kRef));
  CHECK_FALSE(r.attains_lower_bound);

  r = action_based_equilibrium(0.9, kLowSignal);
  CHECK(r.sender_cost == doctest::Approx(1.6));
  CHECK(r.attains_lower_bound);
}

TEST_CASE("signal-based regime") {
  auto r = signal_based_equilibrium(0.5, kRef);
  CHECK(r.regime == Regime::SignalBased);
  CHECK(r.sender_cost == doctest::Approx(0.25));
  CHECK(r.rule(Message::Silent, Condition::Positive) != nullptr);

  r = signal_based_equilibrium(0.8, kRef);
  CHECK(r.sender_cost == doctest::Approx(1.288888888889).epsilon(1e-11));
  CHECK_FALSE(r.attains_lower_bound);
  REQUIRE(r.period1_split.has_value());
  CHECK(r.period1_split->branches.back().posterior == doctest::Approx(0.55));

  for (double q : {0.2, 0.5, 0.65, 0.9}) {
    const auto s = signal_based_equilibrium(q, kLowSignal);
    const auto a = action_based_equilibrium(q, kLowSignal);
    CHECK(s.sender_cost == a.sender_cost);
    CHECK(s.receiver_payoff == a.receiver_payoff);
    CHECK(s.period2_policy.size() == a.period2_policy.size());
  }
}

TEST_CASE("closed-form costs agree with the reports") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const Model m(ref::draw_params(rng));
    const double q = unit(rng);
    for (Regime regime : {Regime::Unconditional, Regime::ActionBased, Regime::SignalBased}) {
      CHECK(equilibrium_cost(regime, q, m) == equilibrium(regime, q, m).sender_cost);
    }
  }
}

TEST_CASE("cost before convexification, action-based") {
  CHECK(action_precvx_cost(0.7, kRef) == doctest::Approx(1.6));
  CHECK(action_precvx_cost(0.9, kRef) == 2.0);
  CHECK(action_precvx_cost(kRef.thresholds().q_ii, kRef) == 2.0);
  CHECK_THROWS_AS(action_precvx_cost(0.5, kRef), std::domain_error);
}

TEST_CASE("cost before convexification, signal-based") {
  CHECK(signal_precvx_cost(0.56, kRef) == doctest::Approx(0.48));
  CHECK(signal_precvx_cost(0.7, kRef) == doctest::Approx(1.45));
  CHECK(signal_precvx_cost(0.9, kRef) == doctest::Approx(1.8));
  CHECK(signal_precvx_cost(0.8, kRef) == doctest::Approx(1.6));
  CHECK(signal_precvx_cost(0.55, kRef) == doctest::Approx(0.4));
  CHECK_THROWS_AS(signal_precvx_cost(0.7, kLowSignal), std::domain_error);
}

TEST_CASE("smallest deterrent revelation without conditioning") {
  const double g = gamma_hat_unconditional(0.45, kRef);
  CHECK(0.45 * g == doctest::Approx(0.133333333333).epsilon(1e-11));
  CHECK(0.45 * g >= equilibrium_cost(Regime::Unconditional, 0.45, kRef));
  CHECK(kRef.thresholds().q_i * gamma_hat_unconditional(kRef.thresholds().q_i, kRef) == doctest::Approx(0.0));
  CHECK_THROWS_AS(gamma_hat_unconditional(0.7, kRef), std::domain_error);
}

TEST_CASE("regime names") {
  CHECK(parse_regime("unconditional") == Regime::Unconditional);
  CHECK(parse_regime("action") == Regime::ActionBased);
  CHECK(parse_regime("signal") == Regime::SignalBased);
  CHECK_THROWS_AS(parse_regime("bogus"), std::invalid_argument);
  for (Regime r : {Regime::Unconditional, Regime::ActionBased, Regime::SignalBased}) {
    CHECK(parse_regime(to_string(r)) == r);
  }
}

// With alpha_g <= 1/2 the signal-conditioned plan copies the action-based
// one. Above q_ii the receiver prefers to act at once and keep acting after a
// negative signal, which a signal-conditioned disclosure cannot punish.
TEST_CASE("copied plan is not incentive compatible for weak signals above q_ii") {
  const double q = 0.65;
  REQUIRE(q > kLowSignal.thresholds().q_ii);
  const auto action = sender_from_report(action_based_equilibrium(q, kLowSignal));
  const auto signal = sender_from_report(signal_based_equilibrium(q, kLowSignal));
  const auto compliance = ReceiverStrategy::compliance();
  CHECK(ic_check(action, compliance, q, kLowSignal) <= 1e-12);
  CHECK(ic_check(signal, compliance, q, kLowSignal) == doctest::Approx(0.0625));
  CHECK(best_response(signal, q, kLowSignal).outcome.receiver_payoff == doctest::Approx(0.6625));
}
