#pragma once

// Independent verification: lower convex envelopes, a grid search over the
// extreme strategy family, and grid checks of the fixed point p_star and the
// regime orderings.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dissuasion/game_engine.hpp"
#include "dissuasion/model.hpp"
#include "dissuasion/scenarios.hpp"

namespace dissuasion {

/// Piecewise-linear lower convex envelope of a sampled function.
class Envelope {
 public:
  Envelope(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  const std::vector<double>& knots_x() const { return xs_; }
  const std::vector<double>& knots_y() const { return ys_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Monotone-chain lower hull. Needs at least two samples with strictly
/// increasing abscissae.
Envelope convex_envelope(const std::vector<std::pair<double, double>>& samples);

/// A period-1 split <r1;1> plus one extreme period-2 split per condition,
/// applied after the period-1 message l. gammas[c] is the probability of
/// revealing the good state.
struct ExtremeFamilyPoint {
  double r1 = 0;
  std::map<Condition, double> gammas;
};

SenderStrategy to_sender(Regime regime, double q, const ExtremeFamilyPoint& point);

struct BruteForceResult {
  double cost = 0;
  ExtremeFamilyPoint argmin;
};

/// Minimum sender cost over r1 in {0, h, 2h, ...} U {q} and every gamma in
/// {0, h, ..., 1}, with the receiver best-responding. The search reduces to
/// per-branch backward induction; the winning point is re-evaluated with the
/// game engine. Ties go to the smallest (r1, gammas).
BruteForceResult brute_force_optimal_cost(Regime regime, double q, const Model& model, double grid_step);

/// Same search, calling best_response on every grid point. Only practical
/// for coarse grids.
BruteForceResult brute_force_exhaustive(Regime regime, double q, const Model& model, double grid_step);

struct CheckResult {
  std::string name;
  double tolerance = 0;
  double worst_residual = 0;
  bool passed = true;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* first_failure() const;
};

VerificationReport verify_lemma1(const GameParams& params, int grid_points = 10000);

/// The five curves compared by verify_orderings.
struct CostCurves {
  std::function<double(double)> pi, n_a, n_s, n_u, n;

  static CostCurves closed_form(const Model& model);
};

/// pi <= N^A <= N^S <= N^U <= N on an inclusive grid over [0,1], and
/// q_i < p_e < p_star when p_e exists.
VerificationReport verify_orderings(const GameParams& params, int grid_points);
VerificationReport verify_orderings(const GameParams& params, int grid_points, const CostCurves& curves);

}  // namespace dissuasion
