// Shared measure and weight families used across the test files and the
// acceptance run.  Everything is built fresh on each call so tests cannot
// leak state into each other.
#ifndef SHIMORIN_TESTS_FIXTURES_HPP
#define SHIMORIN_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "shimorin/measure.hpp"
#include "shimorin/weight.hpp"

namespace fixtures {

struct NamedMeasure {
  std::string name;
  shimorin::Measure nu;
};

inline shimorin::Measure tab_hat() {
  // Triangular bump supported on [0.1, 0.9], peak 1 at 0.5; density is zero
  // at both ends of its grid, so the PRW classification is a clean Converges.
  std::vector<double> r, d;
  for (int i = 0; i <= 16; ++i) {
    const double x = 0.1 + 0.05 * i;
    r.push_back(x);
    d.push_back(1.0 - std::abs(x - 0.5) / 0.4);
  }
  d.front() = 0.0;
  d.back() = 0.0;
  return shimorin::Measure({}, {}, shimorin::TabulatedDensity{r, d});
}

inline shimorin::Measure tab_open_end() {
  // Positive density at the last grid point: nothing is known beyond it.
  return shimorin::Measure({}, {},
                           shimorin::TabulatedDensity{{0.5, 0.7, 0.98},
                                                      {1.0, 0.5, 0.25}});
}

/// The full fixture family: atoms, Beta-type densities, tables, mixtures.
inline std::vector<NamedMeasure> test_measures() {
  using M = shimorin::Measure;
  std::vector<NamedMeasure> out;
  out.push_back({"dirac0", M::dirac(0.0)});
  out.push_back({"dirac1", M::dirac(1.0)});
  out.push_back({"half-dirac-mid", M::dirac(0.5, 0.5)});
  out.push_back({"dirac0+dirac1", M::dirac(0.0) + M::dirac(1.0)});
  out.push_back({"2dirac0+dirac1", M::dirac(0.0, 2.0) + M::dirac(1.0)});
  out.push_back({"lebesgue", M::lebesgue()});
  out.push_back({"jacobi-r", M::jacobi(1.0, 1.0, 0.0)});
  out.push_back({"jacobi-smooth", M::jacobi(2.0, 0.5, 0.25)});
  out.push_back({"jacobi-edge", M::jacobi(1.0, 0.0, -0.5)});
  out.push_back({"tab-hat", tab_hat()});
  out.push_back({"tab-open-end", tab_open_end()});
  out.push_back({"atom+lebesgue", M::dirac(0.3, 0.5) + M::lebesgue()});
  return out;
}

/// Subset whose PRW integral provably diverges (atom at 1 or beta <= 0).
inline std::vector<NamedMeasure> prw_divergent_measures() {
  std::vector<NamedMeasure> out;
  for (auto& m : test_measures())
    if (m.nu.prw_classify() == shimorin::PrwVerdict::Diverges)
      out.push_back(std::move(m));
  return out;
}

struct NamedWeight {
  std::string name;
  shimorin::RadialWeightProfile w;
};

/// Affine log-profile h(t) = e^{A + m t} on an equispaced grid.
inline shimorin::HProfile affine_profile(double A, double m, double t_max = 8.0,
                                         int knots = 9) {
  std::vector<double> t, g;
  for (int i = 0; i < knots; ++i) {
    t.push_back(t_max * i / double(knots - 1));
    g.push_back(A + m * t.back());
  }
  return shimorin::HProfile(std::move(t), std::move(g));
}

/// Sup over [0,8] of |g_fit - g_exact| for the atom-family target
/// g(t) = -log b - (1 + a/b) t of the measure a*dirac(0) + b*dirac(1).
inline double family_sup_error(const shimorin::HProfile& hp, double a,
                               double b) {
  double sup = 0.0;
  for (int i = 0; i <= 800; ++i) {
    const double t = i / 100.0;
    const double exact = -std::log(b) - (1.0 + a / b) * t;
    sup = std::max(sup, std::abs(hp.g(t) - exact));
  }
  return sup;
}

inline shimorin::RadialWeightProfile tab_weight_hat() {
  // Log-linear interpolation of a positive bump; all samples positive so the
  // weight extends to the whole interval.
  std::vector<double> r, w;
  for (int i = 0; i <= 8; ++i) {
    const double x = 0.1 + 0.1 * i;
    r.push_back(x);
    w.push_back(0.25 + std::exp(-8.0 * (x - 0.5) * (x - 0.5)));
  }
  return shimorin::RadialWeightProfile::tabulated(std::move(r), std::move(w));
}

inline std::vector<NamedWeight> test_weights() {
  using W = shimorin::RadialWeightProfile;
  std::vector<NamedWeight> out;
  out.push_back({"const-1", W::constant(1.0)});
  out.push_back({"r^2", W::power(1.0, 1.0)});
  out.push_back({"2r^0.7", W::power(2.0, 0.35)});
  out.push_back({"from-h(e^{-2t})", W::from_h(affine_profile(0.0, -2.0))});
  out.push_back({"tab-bump", tab_weight_hat()});
  return out;
}

}  // namespace fixtures

#endif
