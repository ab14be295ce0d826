#ifndef SHIMORIN_NUMERICS_HPP
#define SHIMORIN_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace shimorin {

/** Compensated (Kahan) accumulator for long sums of like-signed terms. */
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Running partial sums s_n = a_0 + ... + a_n, compensated.
inline std::vector<double> prefix_sums(std::span<const double> a) {
  std::vector<double> out(a.size());
  KahanSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc.add(a[i]);
    out[i] = acc.value();
  }
  return out;
}

/// log of the Euler Beta function, a, b > 0.
inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Euler Beta function B(a, b) for a, b > 0.
inline double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

/**
 * The bounded Bernstein integrand (1 - t^s) / (1 - t) for t in [0, 1], s > 0.
 * Continuous extensions: value 1 at t = 0, value s at t = 1. Near t = 1 the
 * naive form loses digits, so it is evaluated as -expm1(s log1p(-u)) / u with
 * u = 1 - t.
 */
inline double bernstein_integrand(double t, double s) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return s;
  const double u = 1.0 - t;
  return -std::expm1(s * std::log1p(-u)) / u;
}

/// (e^x - 1) / x with the removable singularity filled in.
inline double expm1_over_x(double x) {
  if (std::abs(x) < 1e-8) return 1.0 + 0.5 * x + x * x / 6.0;
  return std::expm1(x) / x;
}

/// Forward difference Delta^k b at offset n via the binomial formula.
/// Requires n + k < b.size().  Used by tests and the monotonicity report.
inline double forward_difference(std::span<const double> b, std::size_t k,
                                 std::size_t n) {
  // sum_{j=0}^{k} (-1)^{k-j} C(k,j) b_{n+j}
  double binom = 1.0;
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  double acc = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    acc += sign * binom * b[n + j];
    binom = binom * double(k - j) / double(j + 1);
    sign = -sign;
  }
  return acc;
}

}  // namespace shimorin

#endif
