#include "dissuasion/benchmark.hpp"

#include <algorithm>

namespace dissuasion {

const char* to_string(BenchmarkStrategy s) {
  switch (s) {
    case BenchmarkStrategy::RR: return "RR";
    case BenchmarkStrategy::AC: return "AC";
    case BenchmarkStrategy::AA: return "AA";
  }
  return "?";
}

namespace {

double ac_payoff(double q, const Model& m) {
  return q - (1 - q) * m.c() + q * m.alpha_g() - (1 - q) * m.alpha_l() * m.c();
}

double aa_payoff(double q, const Model& m) { return 2 * stage_payoff(q, m); }

}  // namespace

double no_info_payoff(double q, const Model& model) {
  check_belief(q);
  const auto& t = model.thresholds();
  if (q <= t.q_i) return 0.0;
  if (q <= t.q_ii) return ac_payoff(q, model);
  return aa_payoff(q, model);
}

double no_info_cost(double q, const Model& model) {
  check_belief(q);
  const auto& t = model.thresholds();
  if (q <= t.q_i) return 0.0;
  if (q <= t.q_ii) return 1 + q * model.alpha_g() + (1 - q) * model.alpha_l();
  return 2.0;
}

BenchmarkReport optimal_no_info(double q, const Model& model) {
  check_belief(q);
  const auto& t = model.thresholds();
  BenchmarkReport report;
  report.strategy = q <= t.q_i    ? BenchmarkStrategy::RR
                    : q <= t.q_ii ? BenchmarkStrategy::AC
                                  : BenchmarkStrategy::AA;
  report.receiver_payoff = std::max({0.0, ac_payoff(q, model), aa_payoff(q, model)});
  report.sender_cost = no_info_cost(q, model);
  return report;
}

}  // namespace dissuasion
