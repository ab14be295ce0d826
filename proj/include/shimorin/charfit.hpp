#ifndef SHIMORIN_CHARFIT_HPP
#define SHIMORIN_CHARFIT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shimorin/measure.hpp"
#include "shimorin/weight.hpp"

namespace shimorin {

/// Default knot set for fitted profiles: t = 0 followed by knots-1
/// geometrically spaced points from 0.02 to 12.  Laplace moments at large n
/// are dominated by small t, so resolution is concentrated near the origin.
std::vector<double> default_t_grid(std::size_t knots = 48);

/**
 * One feasibility instance: look for a log-convex h, bounded as e^{-t} at
 * infinity, whose Laplace moments satisfy f(n+1) * L_n(h) = 1 for n = 0..N,
 * where f is the Bernstein function of nu.
 */
struct FitProblem {
  Measure nu;
  std::size_t N = 24;
  std::vector<double> t_grid = default_t_grid();
  double eps_feas = 1e-8;
  int iteration_cap = 500;
  double convexity_tol = 1e-10;

  explicit FitProblem(Measure measure) : nu(std::move(measure)) {}
};

enum class FitVerdict { Feasible, InfeasibleAtN, PrecheckRejected };

std::string to_string(FitVerdict v);

struct PrecheckResult {
  bool pass = false;
  std::string warning;  // set when divergence passes only as "Unknown"
};

/// Necessary condition first: the construction only applies to measures whose
/// PRW integral diverges.  Unknown classifications pass with a warning.
PrecheckResult precheck(const Measure& nu);

struct FitResult {
  std::optional<HProfile> profile;  // absent iff PrecheckRejected
  std::vector<double> residuals;    // |f(n+1) L_n(h) - 1| for n = 0..N
  double convexity_margin = 0.0;
  GrowthReport growth;
  FitVerdict verdict = FitVerdict::PrecheckRejected;
  int iterations = 0;
  std::string warning;
};

/**
 * Deterministic solver: initialize from the exponential matching the first
 * two targets, then damped Gauss-Newton on the grid values of log h, with
 * every iterate projected onto nondecreasing slopes (pool-adjacent-violators)
 * capped at -1.  The projection keeps each iterate simultaneously log-convex
 * and growth-admissible, so divergent Laplace moments never enter the line
 * search.  Feasible means: max residual <= eps_feas and both certificates
 * hold at the problem tolerances; anything else at this truncation is
 * reported as Infeasible-at-N, which is a statement about N and the grid,
 * not about the infinite system.
 */
FitResult fit_h(const FitProblem& problem);

struct Certificate {
  std::vector<double> residuals;  // as in FitResult
  double convexity_margin = 0.0;
  GrowthReport growth;
  double mass_identity = 0.0;  // nu([0,1]) * L_0(h); must equal 1
  bool certified = false;
};

/// Re-derives every condition from scratch for a given profile (no state
/// shared with fit_h): moment residuals up to N, log-convexity at tol,
/// growth boundedness, and the n = 0 mass identity.
Certificate certify(const Measure& nu, const HProfile& hp, std::size_t N, double tol);

}  // namespace shimorin

#endif
