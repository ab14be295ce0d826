#ifndef SHIMORIN_MOMENTS_HPP
#define SHIMORIN_MOMENTS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "shimorin/measure.hpp"

namespace shimorin {

enum class MomentTag { Nu, Mu, Omega, KernelCoefficients, Custom };

std::string to_string(MomentTag t);

/// A finite real sequence m_0..m_N with a provenance tag.
struct MomentSequence {
  std::vector<double> values;
  MomentTag tag = MomentTag::Custom;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// b_n = 1 / (a_0 + ... + a_n), running sums compensated.  Throws
/// std::domain_error("not a positive sequence") if any partial sum is <= 0.
/// A Nu-tagged input yields a Mu-tagged output (these are the mu_n = 1/f(n+1)
/// moments); anything else is tagged Custom.
MomentSequence reciprocal_partial_sums(const MomentSequence& a);

struct CompleteMonotonicityReport {
  int max_order = 0;       // K: highest difference order checked
  double min_value = 0.0;  // min over k <= K, n of (-1)^k Delta^k b_n
  bool pass = false;       // min_value >= -tol
};

/// Hausdorff complete-monotonicity certificate: signed iterated forward
/// differences (-1)^k Delta^k b_n for k = 0..K must all be >= -tol.
/// Requires K >= 1 and b.size() >= K+1.
CompleteMonotonicityReport complete_monotonicity_report(const MomentSequence& b,
                                                        int K, double tol);

struct OmegaMoments {
  MomentSequence moments;  // omega_0..omega_N, Omega-tagged
  std::string warning;     // nonempty when the PRW classification is Unknown
};

/// Moments of the radial weight induced by nu: omega_n = 1/(2 f((n+1)/2)),
/// f the Bernstein function of nu.  Requires the PRW integral of nu to
/// diverge; throws std::domain_error("Shimorin kernel is not a Bergman
/// kernel") when it provably converges, and attaches a warning when the
/// classification is Unknown.
OmegaMoments omega_moments_from_nu(const Measure& nu, std::size_t N);

struct DiscreteFit {
  std::vector<Atom> atoms;  // strictly positive masses, sorted by location
  double residual = 0.0;    // l2 norm of the remaining moment mismatch

  /// Throws std::invalid_argument if the fit carries no mass at all.
  Measure as_measure() const;
};

/// Truncated Hausdorff inversion on a fixed support grid: nonnegative masses
/// m_j minimizing || sum_j m_j r_j^n - target_n ||_2, by the Lawson-Hanson
/// active-set iteration (deterministic: ties broken toward the lowest index).
/// `tol` sets the dual-feasibility threshold at which the iteration stops.
DiscreteFit fit_discrete_measure(const MomentSequence& target,
                                 const std::vector<double>& support_grid,
                                 double tol);

}  // namespace shimorin

#endif
