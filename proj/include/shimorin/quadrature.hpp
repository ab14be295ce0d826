#ifndef SHIMORIN_QUADRATURE_HPP
#define SHIMORIN_QUADRATURE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "shimorin/parallel.hpp"

namespace shimorin::quad {

/**
 * Nodes and weights of a positive quadrature rule.  For a Gauss-Jacobi rule
 * built by jacobi_rule(n, a, b) the pair integrates smooth f against the
 * weight x^a (1-x)^b on [0, 1]:
 *
 *   integral_0^1 f(x) x^a (1-x)^b dx  ==  sum_i w[i] f(x[i])
 *
 * exactly for polynomial f of degree <= 2n - 1.
 */
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

/// Gauss-Jacobi rule on [0,1] for weight x^a (1-x)^b, a, b > -1 (Golub-Welsch).
Rule make_jacobi_rule(int n, double a, double b);

/// Cached, thread-safe access to make_jacobi_rule results.
const Rule& jacobi_rule(int n, double a, double b);

/// Gauss-Legendre on [0,1]: the a = b = 0 special case.
inline const Rule& legendre_rule(int n) { return jacobi_rule(n, 0.0, 0.0); }

/// Weighted node sum in fixed index order (serial reference path).
template <class F>
auto apply_serial(const Rule& rule, F&& f) -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  R acc{};
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.w[i] * f(rule.x[i]);
  return acc;
}

/// Same sum with node evaluations fanned out over OpenMP.  Slot-filled and
/// reduced in index order, so the result is bit-identical to apply_serial.
template <class F>
auto apply_openmp(const Rule& rule, F&& f) -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  std::vector<R> terms(rule.size());
  par::for_each_index_openmp(rule.size(), [&](std::size_t i) {
    terms[i] = rule.w[i] * f(rule.x[i]);
  });
  R acc{};
  for (const R& t : terms) acc += t;
  return acc;
}

template <class F>
auto apply(const Rule& rule, F&& f) -> decltype(f(0.0)) {
  if (par::enabled() && rule.size() >= par::kGrain)
    return apply_openmp(rule, std::forward<F>(f));
  using R = decltype(f(0.0));
  std::vector<R> terms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i)
    terms[i] = rule.w[i] * f(rule.x[i]);
  R acc{};
  for (const R& t : terms) acc += t;
  return acc;
}

/// Plain Gauss-Legendre transplanted to [lo, hi].
template <class F>
auto apply_on(const Rule& rule, double lo, double hi, F&& f) -> decltype(f(0.0)) {
  const double len = hi - lo;
  return len * apply(rule, [&](double u) { return f(lo + len * u); });
}

/**
 * Composite Gauss-Legendre over [lo, hi] with segments graded geometrically
 * toward lo; resolves integrands whose derivatives grow toward the left end
 * (e.g. t^s branch just outside the interval).  levels = number of geometric
 * pieces; ratio 2 grading.
 */
template <class F>
auto apply_graded_left(const Rule& rule, double lo, double hi, int levels, F&& f)
    -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  R acc{};
  double right = hi;
  for (int j = 0; j < levels; ++j) {
    const double left = (j + 1 == levels) ? lo : lo + (right - lo) * 0.5;
    acc += apply_on(rule, left, right, f);
    right = left;
  }
  return acc;
}

}  // namespace shimorin::quad

#endif
