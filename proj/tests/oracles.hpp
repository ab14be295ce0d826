// Self-contained numeric oracles for the tests.  Nothing here touches the
// library's own quadrature or series code, so agreement between the two is a
// genuine cross-check rather than a tautology.
#ifndef SHIMORIN_TESTS_ORACLES_HPP
#define SHIMORIN_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <functional>

namespace oracles {

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b]; tol is an absolute error target.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-13) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = detail::simpson(f, a, b, fa, fm, fb);
  return detail::adapt(f, a, b, fa, fm, fb, whole, tol, 48);
}

/// Harmonic number H_n = 1 + 1/2 + ... + 1/n (H_0 = 0), summed small-first.
inline double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t k = n; k >= 1; --k) h += 1.0 / double(k);
  return h;
}

/// Bernstein function of Lebesgue measure at half-integer arguments:
///   f(m + 1/2) = -2 ln 2 + 2 * sum_{k=1}^{m+1} 1/(2k - 1),
/// from the digamma identity f(s) = psi(s+1) + gamma_Euler and
/// psi(1/2) = -gamma_Euler - 2 ln 2.
inline double lebesgue_bernstein_half(std::size_t m) {
  double s = 0.0;
  for (std::size_t k = m + 1; k >= 1; --k) s += 1.0 / double(2 * k - 1);
  return 2.0 * s - 2.0 * std::log(2.0);
}

}  // namespace oracles

#endif
