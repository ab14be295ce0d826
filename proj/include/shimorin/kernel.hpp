#ifndef SHIMORIN_KERNEL_HPP
#define SHIMORIN_KERNEL_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "shimorin/measure.hpp"
#include "shimorin/moments.hpp"

namespace shimorin {

/// Truncated series of a Shimorin-type kernel: S(z,l) = sum c_n (z conj(l))^n.
/// mass_bound is the total mass nu_0 of the generating measure; it certifies
/// the linear growth c_n <= (n+1) nu_0 that the truncation-tail bound rests on.
class KernelSeries {
 public:
  KernelSeries(std::vector<double> coefficients, double mass_bound);

  const std::vector<double>& coefficients() const { return c_; }
  double mass_bound() const { return mass_bound_; }
  std::size_t size() const { return c_.size(); }

 private:
  std::vector<double> c_;
  double mass_bound_;
};

/// A pair of points in the open unit disk; kernels only see x = z * conj(l).
struct DiskPoint {
  std::complex<double> z;
  std::complex<double> lambda;

  DiskPoint(std::complex<double> z_, std::complex<double> lambda_);
  std::complex<double> x() const { return z * std::conj(lambda); }
};

/// Thrown when a KernelSeries is too short for the requested tolerance;
/// carries how many coefficients would suffice.
class InsufficientTerms : public std::runtime_error {
 public:
  InsufficientTerms(std::size_t required, double bound);
  std::size_t required_terms() const { return required_; }
  double tail_bound() const { return bound_; }

 private:
  std::size_t required_;
  double bound_;
};

struct SeriesEval {
  std::complex<double> value;  // partial sum over the stored coefficients
  double tail_bound;           // certified bound on the dropped tail
};

/// Closed form of mass_bound * sum_{n > N} (n+1) y^n for y = |x| < 1: the
/// certified truncation error of an (N+1)-term series.
double series_tail_bound(double mass_bound, double y, std::size_t N);

/// Sum the stored series at p and certify the truncation error via
/// |tail| <= nu_0 * sum_{n>N} (n+1)|x|^n  (closed form).  Throws
/// InsufficientTerms if that bound exceeds tol.
SeriesEval eval_series(const KernelSeries& ks, const DiskPoint& p, double tol);

/// S_nu(z,l) = (1 - x)^{-1} * integral_0^1 (1 - r x)^{-1} dnu(r), x = z conj(l).
/// Atoms contribute exactly; densities via the measure's Gauss rules.
std::complex<double> eval_integral(const Measure& nu, const DiskPoint& p);

/// Bergman-side coefficients from weight moments: c_n = 1/(2 omega_{2n+1}).
/// Consumes omega_1, omega_3, ... from the given sequence; throws
/// std::domain_error("weight not RKHS-admissible") on a nonpositive odd
/// moment.  The series mass bound is inferred as max_n c_n/(n+1).
KernelSeries weight_kernel_coefficients(const MomentSequence& omega_moments);

struct MatchReport {
  bool match = false;
  double max_deviation = 0.0;  // max_n |2 omega_{2n+1} c_n - 1|
  std::size_t worst_n = 0;
};

/// Coefficient-level kernel equality test: S_nu equals the Bergman kernel of
/// the weight with moments omega iff 2 omega_{2n+1} c_n = 1 for all n; checks
/// n = 0..N against tol.  Requires omega to reach index 2N+1.
MatchReport kernel_match(const Measure& nu, const MomentSequence& omega_moments,
                         std::size_t N, double tol);

}  // namespace shimorin

#endif
