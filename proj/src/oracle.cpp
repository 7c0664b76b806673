#include "dissuasion/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dissuasion/benchmark.hpp"

namespace dissuasion {

Envelope::Envelope(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.size() < 2) throw std::invalid_argument("envelope needs at least two knots");
}

double Envelope::operator()(double x) const {
  const double slack = 1e-12 * (1 + std::abs(xs_.back() - xs_.front()));
  if (x < xs_.front() - slack || x > xs_.back() + slack) throw std::domain_error("envelope evaluated outside its samples");
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
  return ys_[lo] + t * (ys_[hi] - ys_[lo]);
}

Envelope convex_envelope(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("convex_envelope needs at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first)) {
      throw std::invalid_argument("convex_envelope samples must have strictly increasing abscissae");
    }
  }
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : samples) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  std::vector<double> xs, ys;
  for (const auto& [x, y] : hull) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return Envelope(std::move(xs), std::move(ys));
}

SenderStrategy to_sender(Regime regime, double q, const ExtremeFamilyPoint& point) {
  SenderStrategy s = SenderStrategy::silent(conditioning_for(regime));
  s.period1 = Disclosure::from_split(make_split(q, point.r1));
  for (const auto& [condition, gamma] : point.gammas) s.set_period2(Message::Silent, condition, Disclosure{gamma, 0.0});
  return s;
}

namespace {

std::vector<double> r1_grid(double q, double h) {
  std::vector<double> grid;
  for (long k = 0; static_cast<double>(k) * h < q - 1e-12; ++k) grid.push_back(static_cast<double>(k) * h);
  grid.push_back(q);
  return grid;
}

std::vector<double> gamma_grid(double h) {
  std::vector<double> grid;
  for (long k = 0; static_cast<double>(k) * h < 1 - 1e-12; ++k) grid.push_back(static_cast<double>(k) * h);
  grid.push_back(1.0);
  return grid;
}

void check_search_inputs(double q, double grid_step) {
  if (!(q > 0 && q < 1)) throw std::domain_error("brute force search needs q in (0,1)");
  if (!(grid_step > 0 && grid_step < 1)) throw std::domain_error("grid_step must lie in (0,1)");
}

ExtremeFamilyPoint make_point(Regime regime, double r1, double g1, double g2) {
  ExtremeFamilyPoint p;
  p.r1 = r1;
  const auto conditions = conditions_for(regime);
  p.gammas[conditions[0]] = g1;
  if (conditions.size() > 1) p.gammas[conditions[1]] = g2;
  return p;
}

struct Value {
  double payoff = 0;
  double cost = 0;
};

// Period-2 node reached with joint weights (wg, wl) under an extreme split
// that reveals the good state with probability gamma.
Value period2_node(double wg, double wl, double gamma, double c) {
  const double reveal = wg * gamma;
  const double rest = wg * (1 - gamma) - c * wl;
  if (rest > kIndifferenceTol) return {reveal + rest, reveal + wg * (1 - gamma) + wl};
  return {reveal, reveal};
}

double period1_choice(const Value& refrain, const Value& act) {
  if (refrain.payoff > act.payoff + kIndifferenceTol) return refrain.cost;
  if (act.payoff > refrain.payoff + kIndifferenceTol) return act.cost;
  return std::min(refrain.cost, act.cost);
}

// Cost comparison for the argmin: costs within kIndifferenceTol count as
// equal, and equal costs go to the smaller index.
bool better(const std::pair<double, std::size_t>& a, const std::pair<double, std::size_t>& b) {
  if (a.first < b.first - kIndifferenceTol) return true;
  if (a.first > b.first + kIndifferenceTol) return false;
  return a.second < b.second;
}

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  std::size_t i = 0, j = 0;
  double r1 = 0;
};

// Minimises over j the cost of the period-1 comparison between a fixed
// refrain value and act values (base + a_j) costing (base_cost + b_j).
class ActSide {
 public:
  ActSide(const std::vector<double>& a, const std::vector<double>& b) : a_(a), b_(b), order_(a.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) { return a_[x] < a_[y]; });
    sorted_a_.resize(order_.size());
    prefix_min_index_.resize(order_.size());
    suffix_best_.resize(order_.size());
    for (std::size_t k = 0; k < order_.size(); ++k) {
      sorted_a_[k] = a_[order_[k]];
      prefix_min_index_[k] = k == 0 ? order_[k] : std::min(prefix_min_index_[k - 1], order_[k]);
    }
    for (std::size_t k = order_.size(); k-- > 0;) {
      const std::pair<double, std::size_t> here{b_[order_[k]], order_[k]};
      suffix_best_[k] = k + 1 == order_.size() || better(here, suffix_best_[k + 1]) ? here : suffix_best_[k + 1];
    }
  }

  // Best (cost, j) given the refrain value/cost and the act offset.
  std::pair<double, std::size_t> best(const Value& refrain, double base, double base_cost) const {
    std::pair<double, std::size_t> out{std::numeric_limits<double>::infinity(), 0};
    const double threshold = refrain.payoff - base;
    // Any j whose act value does not beat refraining lets the receiver refrain.
    const auto up = std::upper_bound(sorted_a_.begin(), sorted_a_.end(), threshold + kIndifferenceTol);
    if (up != sorted_a_.begin()) out = {refrain.cost, prefix_min_index_[static_cast<std::size_t>(up - sorted_a_.begin()) - 1]};
    // Any j whose act value is not beaten lets the receiver act.
    const auto lo = std::lower_bound(sorted_a_.begin(), sorted_a_.end(), threshold - kIndifferenceTol);
    if (lo != sorted_a_.end()) {
      const auto& [b, j] = suffix_best_[static_cast<std::size_t>(lo - sorted_a_.begin())];
      const std::pair<double, std::size_t> act{base_cost + b, j};
      if (better(act, out)) out = act;
    }
    return out;
  }

 private:
  const std::vector<double>& a_;
  const std::vector<double>& b_;
  std::vector<std::size_t> order_;
  std::vector<double> sorted_a_;
  std::vector<std::size_t> prefix_min_index_;
  std::vector<std::pair<double, std::size_t>> suffix_best_;
};

}  // namespace

BruteForceResult brute_force_optimal_cost(Regime regime, double q, const Model& model, double grid_step) {
  check_search_inputs(q, grid_step);
  const double c = model.c(), ag = model.alpha_g(), al = model.alpha_l();
  const auto gammas = gamma_grid(grid_step);
  const std::size_t n = gammas.size();

  std::vector<Value> refrain(n), plus(n), minus(n);
  std::vector<double> act_payoff(n), act_cost(n), minus_payoff(n), minus_cost(n);
  Candidate best;

  for (double r1 : r1_grid(q, grid_step)) {
    const double w = (q - r1) / (1 - r1);  // mass sent to certainty
    const double s = 1 - w;
    const double wg = s * r1, wl = s * (1 - r1);
    const Value first_act{wg - c * wl, s};
    for (std::size_t k = 0; k < n; ++k) {
      refrain[k] = period2_node(wg, wl, gammas[k], c);
      plus[k] = period2_node(wg * ag, wl * al, gammas[k], c);
      minus[k] = period2_node(wg * (1 - ag), wl * (1 - al), gammas[k], c);
    }
    auto consider = [&](double cost, std::size_t i, std::size_t j) {
      const double total = 2 * w + cost;
      if (total < best.cost - kIndifferenceTol) best = {total, i, j, r1};
    };

    switch (regime) {
      case Regime::Unconditional:
        for (std::size_t i = 0; i < n; ++i) {
          const Value act{first_act.payoff + plus[i].payoff + minus[i].payoff,
                          first_act.cost + plus[i].cost + minus[i].cost};
          consider(period1_choice(refrain[i], act), i, 0);
        }
        break;
      case Regime::ActionBased: {
        for (std::size_t j = 0; j < n; ++j) {
          act_payoff[j] = first_act.payoff + plus[j].payoff + minus[j].payoff;
          act_cost[j] = first_act.cost + plus[j].cost + minus[j].cost;
        }
        const ActSide side(act_payoff, act_cost);
        for (std::size_t i = 0; i < n; ++i) {
          const auto [cost, j] = side.best(refrain[i], 0.0, 0.0);
          consider(cost, i, j);
        }
        break;
      }
      case Regime::SignalBased: {
        for (std::size_t j = 0; j < n; ++j) {
          minus_payoff[j] = minus[j].payoff;
          minus_cost[j] = minus[j].cost;
        }
        const ActSide side(minus_payoff, minus_cost);
        for (std::size_t i = 0; i < n; ++i) {
          const auto [cost, j] = side.best(refrain[i], first_act.payoff + plus[i].payoff, first_act.cost + plus[i].cost);
          consider(cost, i, j);
        }
        break;
      }
    }
  }

  BruteForceResult result{best.cost, make_point(regime, best.r1, gammas[best.i], gammas[best.j])};
  const double engine_cost = best_response(to_sender(regime, q, result.argmin), q, model).outcome.sender_cost;
  if (std::abs(engine_cost - result.cost) > kCompareTol) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "brute force reduction disagrees with the engine: %.15g vs %.15g", result.cost,
                  engine_cost);
    throw std::logic_error(msg);
  }
  return result;
}

BruteForceResult brute_force_exhaustive(Regime regime, double q, const Model& model, double grid_step) {
  check_search_inputs(q, grid_step);
  const auto gammas = gamma_grid(grid_step);
  const bool two = conditions_for(regime).size() > 1;
  BruteForceResult best{std::numeric_limits<double>::infinity(), {}};
  for (double r1 : r1_grid(q, grid_step)) {
    for (double g1 : gammas) {
      for (std::size_t j = 0; j < (two ? gammas.size() : 1); ++j) {
        const auto point = make_point(regime, r1, g1, gammas[j]);
        const double cost = best_response(to_sender(regime, q, point), q, model).outcome.sender_cost;
        if (cost < best.cost - kIndifferenceTol) best = {cost, point};
      }
    }
  }
  return best;
}

bool VerificationReport::passed() const { return first_failure() == nullptr; }

const CheckResult* VerificationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

namespace {

std::string describe_q(const char* prefix, double q) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s%.12g", prefix, q);
  return buf;
}

}  // namespace

VerificationReport verify_lemma1(const GameParams& params, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("verify_lemma1 needs at least two grid points");
  const Model model(params);
  const auto& t = model.thresholds();
  const auto gap = [&](double q) { return no_info_payoff(q, model) - q; };
  VerificationReport report;

  // Unique sign change of pi(q) - q on the open grid, bracketing p_star.
  {
    CheckResult r{"unique_fixed_point", kExactTol, 0, true, ""};
    int changes = 0;
    double lo = 0, hi = 1;
    bool prev_negative = gap(1.0 / grid_points) < 0;
    for (int k = 2; k <= grid_points; ++k) {
      const double q = static_cast<double>(k) / grid_points;
      const bool negative = gap(q) < 0;
      if (negative != prev_negative) {
        ++changes;
        lo = static_cast<double>(k - 1) / grid_points;
        hi = q;
      }
      prev_negative = negative;
    }
    if (changes != 1) {
      r.passed = false;
      r.detail = "found " + std::to_string(changes) + " sign changes of pi(q)-q";
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0 ? lo : hi) = mid;
      }
      r.worst_residual = std::abs(0.5 * (lo + hi) - t.p_star);
      if (r.worst_residual > r.tolerance) {
        r.passed = false;
        r.detail = describe_q("root of pi(q)-q found at ", 0.5 * (lo + hi));
      }
    }
    report.checks.push_back(r);
  }

  // Part (a): the fixed point lies in the act-twice region iff 2a_G - a_L <= 1.
  {
    CheckResult r{"branch_condition", kCompareTol, 0, true, ""};
    const bool condition = 2 * params.alpha_g - params.alpha_l <= 1;
    const bool in_aa_region = t.p_star >= t.q_ii;
    r.worst_residual = std::abs(t.p_star - t.q_ii);
    if (condition != in_aa_region && r.worst_residual > r.tolerance) {
      r.passed = false;
      r.detail = condition ? "2a_G-a_L<=1 but p_star < q_ii" : "2a_G-a_L>1 but p_star >= q_ii";
    } else {
      r.worst_residual = 0;
    }
    report.checks.push_back(r);
  }

  // Part (b).
  {
    CheckResult r{"p_star_above_q_m", 0, std::max(0.0, t.q_m - t.p_star), t.p_star > t.q_m, ""};
    if (!r.passed) r.detail = describe_q("p_star does not exceed q_m; p_star=", t.p_star);
    report.checks.push_back(r);
  }

  // Part (c): xi(q) >= 0 below p_star.
  {
    CheckResult r{"xi_nonnegative", kExactTol, 0, true, ""};
    for (int k = 0; k <= grid_points; ++k) {
      const double q = static_cast<double>(k) / grid_points;
      if (q > t.p_star) break;
      const double pi = no_info_payoff(q, model);
      const double x = (q - pi) / (1 - pi);
      if (-x > r.worst_residual) {
        r.worst_residual = -x;
        if (-x > r.tolerance && r.passed) {
          r.passed = false;
          r.detail = describe_q("xi negative at q=", q);
        }
      }
    }
    report.checks.push_back(r);
  }
  return report;
}

CostCurves CostCurves::closed_form(const Model& model) {
  return {[model](double q) { return no_info_payoff(q, model); },
          [model](double q) { return equilibrium_cost(Regime::ActionBased, q, model); },
          [model](double q) { return equilibrium_cost(Regime::SignalBased, q, model); },
          [model](double q) { return equilibrium_cost(Regime::Unconditional, q, model); },
          [model](double q) { return no_info_cost(q, model); }};
}

VerificationReport verify_orderings(const GameParams& params, int grid_points) {
  return verify_orderings(params, grid_points, CostCurves::closed_form(Model(params)));
}

VerificationReport verify_orderings(const GameParams& params, int grid_points, const CostCurves& curves) {
  if (grid_points < 100) throw std::invalid_argument("verify_orderings needs at least 100 grid points");
  const Model model(params);
  const std::array<std::pair<const char*, const std::function<double(double)>*>, 5> chain{{
      {"pi", &curves.pi}, {"N^A", &curves.n_a}, {"N^S", &curves.n_s}, {"N^U", &curves.n_u}, {"N", &curves.n}}};

  VerificationReport report;
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    report.checks.push_back({std::string(chain[k].first) + "<=" + chain[k + 1].first, kCompareTol, 0, true, ""});
  }
  for (int i = 0; i < grid_points; ++i) {
    const double q = static_cast<double>(i) / (grid_points - 1);
    std::array<double, 5> v{};
    for (std::size_t k = 0; k < chain.size(); ++k) v[k] = (*chain[k].second)(q);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      auto& r = report.checks[k];
      const double excess = v[k] - v[k + 1];
      r.worst_residual = std::max(r.worst_residual, excess);
      if (excess > r.tolerance && r.passed) {
        r.passed = false;
        r.detail = describe_q("first violation at q=", q);
      }
    }
  }

  const auto& t = model.thresholds();
  CheckResult order{"q_i<p_e<p_star", 0, 0, true, "p_e undefined"};
  if (t.p_e) {
    order.detail.clear();
    order.worst_residual = std::max({0.0, t.q_i - *t.p_e, *t.p_e - t.p_star});
    order.passed = t.q_i < *t.p_e && *t.p_e < t.p_star;
    if (!order.passed) order.detail = describe_q("threshold order violated; p_e=", *t.p_e);
  }
  report.checks.push_back(order);
  return report;
}

}  // namespace dissuasion
