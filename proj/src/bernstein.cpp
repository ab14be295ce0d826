#include "shimorin/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shimorin/numerics.hpp"
#include "shimorin/quadrature.hpp"

namespace shimorin {

namespace {

constexpr std::size_t kCacheLen = 512;
constexpr int kSplitNodes = 64;

// Number of dyadic grading levels needed to resolve t^s on [p,q] when the
// ratio q/p is large (the integrand is analytic there but its derivatives
// scale like powers of 1/t near the left end).
int grading_for(double p, double q, int cap) {
  if (p <= 0.0) return cap;
  double ratio = q / p;
  int lv = 1;
  while (ratio > 2.0 && lv < cap) {
    ratio *= 0.5;
    ++lv;
  }
  return lv;
}

}  // namespace

BernsteinFunction::BernsteinFunction(Measure nu) : nu_(std::move(nu)) {
  if (nu_.is_zero()) throw std::invalid_argument("BernsteinFunction: empty measure");
  prefix_ = prefix_sums(nu_.moments(static_cast<long>(kCacheLen) - 1));
}

double BernsteinFunction::jacobi_part_value(const JacobiPart& p, double s) const {
  const int n = nu_.rule().nodes;
  if (s == std::floor(s) && s <= 2.0 * n) {
    // (1 - t^s)/(1 - t) is a polynomial of degree s-1; the native rule is exact.
    const quad::Rule& rule = quad::jacobi_rule(n, p.gamma, p.beta);
    return p.c * quad::apply(rule, [s](double t) { return bernstein_integrand(t, s); });
  }
  // Split at 1/2 to isolate the t^s branch point at the origin.  On [0,1/2]
  // expand the integrand as t^gamma (1-t)^(beta-1) - t^(gamma+s) (1-t)^(beta-1)
  // and absorb each algebraic factor into a Gauss-Jacobi weight; on [1/2,1]
  // the Bernstein quotient is analytic and only (1-t)^beta is rough.
  const double bm1 = p.beta - 1.0;
  auto left = [bm1](double tau) { return std::pow(1.0 - 0.5 * tau, bm1); };
  const quad::Rule& r1 = quad::jacobi_rule(kSplitNodes, p.gamma, 0.0);
  const quad::Rule& r2 = quad::jacobi_rule(kSplitNodes, p.gamma + s, 0.0);
  const quad::Rule& r3 = quad::jacobi_rule(kSplitNodes, 0.0, p.beta);
  const double i1 = std::pow(0.5, p.gamma + 1.0) * quad::apply_serial(r1, left);
  const double i2 = std::pow(0.5, p.gamma + s + 1.0) * quad::apply_serial(r2, left);
  auto right = [&](double tau) {
    const double t = 0.5 * (1.0 + tau);
    return bernstein_integrand(t, s) * std::pow(t, p.gamma);
  };
  const double i3 = std::pow(0.5, p.beta + 1.0) * quad::apply_serial(r3, right);
  return p.c * (i1 - i2 + i3);
}

double BernsteinFunction::operator()(double s) const {
  if (!(s > 0.0)) throw std::domain_error("BernsteinFunction: s must be positive");
  KahanSum acc;
  for (const Atom& a : nu_.atoms()) acc.add(a.mass * bernstein_integrand(a.at, s));
  for (const JacobiPart& p : nu_.jacobi_parts()) acc.add(jacobi_part_value(p, s));
  if (nu_.tabulated()) {
    const TabulatedDensity& tab = *nu_.tabulated();
    const quad::Rule& rule = quad::legendre_rule(nu_.rule().nodes);
    const int cap = nu_.rule().graded_levels;
    for (std::size_t i = 0; i + 1 < tab.r.size(); ++i) {
      const double p = tab.r[i], q = tab.r[i + 1];
      const double dp = tab.density[i], dq = tab.density[i + 1];
      if (dp == 0.0 && dq == 0.0) continue;
      auto f = [&](double t) {
        const double w = (t - p) / (q - p);
        return bernstein_integrand(t, s) * (dp + (dq - dp) * w);
      };
      acc.add(quad::apply_graded_left(rule, p, q, grading_for(p, q, cap), f));
    }
  }
  return acc.value();
}

std::vector<double> BernsteinFunction::kernel_coefficients(std::size_t N) const {
  if (N + 1 <= prefix_.size())
    return std::vector<double>(prefix_.begin(), prefix_.begin() + static_cast<long>(N) + 1);
  return prefix_sums(nu_.moments(static_cast<long>(N)));
}

}  // namespace shimorin
