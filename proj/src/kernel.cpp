#include "shimorin/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shimorin/bernstein.hpp"
#include "shimorin/parallel.hpp"

namespace shimorin {

// nu_0 * sum_{n > N} (n+1) y^n  =  nu_0 * y^{N+1} ((N+2) - (N+1) y) / (1-y)^2
double series_tail_bound(double mass_bound, double y, std::size_t N) {
  if (y == 0.0) return 0.0;
  const double g = std::pow(y, static_cast<double>(N) + 1.0);
  const double num = (static_cast<double>(N) + 2.0) - (static_cast<double>(N) + 1.0) * y;
  const double d = 1.0 - y;
  return mass_bound * g * num / (d * d);
}

KernelSeries::KernelSeries(std::vector<double> coefficients, double mass_bound)
    : c_(std::move(coefficients)), mass_bound_(mass_bound) {
  if (c_.empty()) throw std::invalid_argument("KernelSeries: no coefficients");
  if (!(mass_bound_ > 0.0) || !std::isfinite(mass_bound_))
    throw std::invalid_argument("KernelSeries: mass bound must be positive");
  const double slack = 1.0 + 1e-12;
  for (std::size_t n = 0; n < c_.size(); ++n) {
    if (!(c_[n] > 0.0) || !std::isfinite(c_[n]))
      throw std::invalid_argument("KernelSeries: coefficient " + std::to_string(n) +
                                  " is not positive");
    if (n > 0 && c_[n] < c_[n - 1] / slack)
      throw std::invalid_argument("KernelSeries: coefficients must be nondecreasing");
    if (c_[n] > (static_cast<double>(n) + 1.0) * mass_bound_ * slack)
      throw std::invalid_argument(
          "KernelSeries: coefficient " + std::to_string(n) +
          " violates the linear growth bound (n+1) * mass_bound");
  }
}

DiskPoint::DiskPoint(std::complex<double> z_, std::complex<double> lambda_)
    : z(z_), lambda(lambda_) {
  if (!(std::abs(z) < 1.0) || !(std::abs(lambda) < 1.0))
    throw std::domain_error("DiskPoint: both points must lie in the open unit disk");
}

InsufficientTerms::InsufficientTerms(std::size_t required, double bound)
    : std::runtime_error("need more terms: " + std::to_string(required) +
                         " series coefficients required (tail bound " +
                         std::to_string(bound) + ")"),
      required_(required),
      bound_(bound) {}

SeriesEval eval_series(const KernelSeries& ks, const DiskPoint& p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("eval_series: tol must be positive");
  const std::complex<double> x = p.x();
  const double y = std::abs(x);
  if (!(y < 1.0)) throw std::domain_error("eval_series: |z conj(lambda)| must be < 1");
  const std::size_t N = ks.size() - 1;
  const double bound = series_tail_bound(ks.mass_bound(), y, N);
  if (bound > tol) {
    std::size_t M = N;
    while (series_tail_bound(ks.mass_bound(), y, M) > tol && M < (std::size_t{1} << 40))
      M = M < 16 ? M + 1 : M + M / 8;  // bound is monotone in M; overshoot is fine
    throw InsufficientTerms(M + 1, bound);
  }
  // Horner over the stored coefficients (fixed order, deterministic).
  std::complex<double> acc{0.0, 0.0};
  const std::vector<double>& c = ks.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return {acc, bound};
}

std::complex<double> eval_integral(const Measure& nu, const DiskPoint& p) {
  const std::complex<double> x = p.x();
  if (!(std::abs(x) < 1.0))
    throw std::domain_error("eval_integral: |z conj(lambda)| must be < 1");
  const std::complex<double> inner =
      nu.integrate([x](double r) { return 1.0 / (1.0 - r * x); });
  return inner / (1.0 - x);
}

KernelSeries weight_kernel_coefficients(const MomentSequence& omega_moments) {
  const std::size_t len = omega_moments.size();
  if (len < 2)
    throw std::invalid_argument("weight_kernel_coefficients: need moments up to omega_1");
  const std::size_t count = len / 2;  // indices with 2n+1 <= len-1
  for (std::size_t n = 0; n < count; ++n)
    if (!(omega_moments[2 * n + 1] > 0.0))
      throw std::domain_error("weight not RKHS-admissible");
  std::vector<double> c = par::map_indexed<double>(
      count, [&](std::size_t n) { return 1.0 / (2.0 * omega_moments[2 * n + 1]); });
  double mass_bound = 0.0;
  for (std::size_t n = 0; n < count; ++n)
    mass_bound = std::max(mass_bound, c[n] / (static_cast<double>(n) + 1.0));
  return KernelSeries(std::move(c), mass_bound);
}

MatchReport kernel_match(const Measure& nu, const MomentSequence& omega_moments,
                         std::size_t N, double tol) {
  if (N < 1) throw std::invalid_argument("kernel_match: N must be >= 1");
  if (omega_moments.size() < 2 * N + 2)
    throw std::invalid_argument("kernel_match: omega moments must reach index 2N+1");
  BernsteinFunction f(nu);
  const std::vector<double> c = f.kernel_coefficients(N);
  MatchReport rep;
  for (std::size_t n = 0; n <= N; ++n) {
    const double dev = std::abs(2.0 * omega_moments[2 * n + 1] * c[n] - 1.0);
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_n = n;
    }
  }
  rep.match = rep.max_deviation <= tol;
  return rep;
}

}  // namespace shimorin
