#ifndef SHIMORIN_BERNSTEIN_HPP
#define SHIMORIN_BERNSTEIN_HPP

#include <cstddef>
#include <vector>

#include "shimorin/measure.hpp"

namespace shimorin {

/**
 * The Bernstein function of a measure nu on [0,1]:
 *
 *   f(s) = integral_0^1 (1 - t^s) / (1 - t) dnu(t),   s > 0,
 *
 * with the integrand extended continuously (1 at t=0, s at t=1).  f is
 * nondecreasing and strictly positive for nonzero nu.  Values at positive
 * integers coincide with partial sums of the moments of nu; evaluation here
 * always goes through the integral so that the two routes stay independent
 * cross-checks of each other.
 */
class BernsteinFunction {
 public:
  explicit BernsteinFunction(Measure nu);

  /// f(s) by the integral route.  Throws std::domain_error for s <= 0.
  double operator()(double s) const;

  /// Kernel coefficients c_n = f(n+1) = nu_0 + ... + nu_n for n = 0..N,
  /// computed by compensated running partial sums of the moments.
  std::vector<double> kernel_coefficients(std::size_t N) const;

  const Measure& measure() const { return nu_; }

 private:
  double jacobi_part_value(const JacobiPart& p, double s) const;

  Measure nu_;
  std::vector<double> prefix_;  // cached c_0..c_{kCacheLen-1}
};

}  // namespace shimorin

#endif
