#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "shimorin/measure.hpp"
#include "shimorin/numerics.hpp"

using namespace shimorin;

TEST_CASE("atom moments are exact power sums") {
  const Measure m = Measure::dirac(0.0, 2.0) + Measure::dirac(1.0);
  CHECK(m.moment(0) == 3.0);  // 0^0 counts the atom at the origin
  for (long k = 1; k <= 12; ++k) CHECK(m.moment(k) == 1.0);

  const Measure half = Measure::dirac(0.5, 0.5);
  CHECK(half.moment(3) == 0.5 * 0.125);
}

TEST_CASE("Jacobi part moments agree with the adaptive oracle") {
  const Measure m = Measure::jacobi(2.0, 0.5, 0.25);
  for (long k = 0; k <= 5; ++k) {
    const double want = oracles::integrate(
        [&](double r) {
          return 2.0 * std::pow(r, double(k) + 0.5) * std::pow(1.0 - r, 0.25);
        },
        0.0, 1.0, 1e-13);
    CHECK(m.moment(k) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("tabulated moments agree with segment-wise oracle integration") {
  const Measure m = fixtures::tab_hat();
  const auto& tab = *m.tabulated();
  for (long k : {0L, 1L, 4L}) {
    double want = 0.0;
    for (std::size_t i = 0; i + 1 < tab.r.size(); ++i) {
      const double p = tab.r[i], q = tab.r[i + 1];
      const double d0 = tab.density[i], d1 = tab.density[i + 1];
      want += oracles::integrate(
          [&](double r) {
            const double dens = d0 + (d1 - d0) * (r - p) / (q - p);
            return dens * std::pow(r, double(k));
          },
          p, q, 1e-14);
    }
    CHECK(m.moment(k) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("batch moments equal scalar moments bitwise") {
  for (const auto& fx : fixtures::test_measures()) {
    CAPTURE(fx.name);
    const auto batch = fx.nu.moments(40);
    REQUIRE(batch.size() == 41);
    for (long k = 0; k <= 40; ++k) CHECK(batch[std::size_t(k)] == fx.nu.moment(k));
  }
}

TEST_CASE("moment sequences are nonincreasing and completely monotone") {
  for (const auto& fx : fixtures::test_measures()) {
    CAPTURE(fx.name);
    const auto nu = fx.nu.moments(40);
    for (std::size_t k = 1; k < nu.size(); ++k) CHECK(nu[k] <= nu[k - 1] + 1e-15);
    for (std::size_t j = 0; j <= 8; ++j)
      for (std::size_t k = 0; k + j <= 40; ++k) {
        const double signed_diff = (j % 2 ? -1.0 : 1.0) *
                                   forward_difference(std::span(nu), j, k);
        CHECK(signed_diff >= -1e-12);
      }
  }
}

TEST_CASE("PRW verdicts follow the atom/exponent/table rules") {
  using V = PrwVerdict;
  auto verdict = [](const Measure& m) { return m.prw_classify(); };
  CHECK(verdict(Measure::dirac(0.0)) == V::Converges);
  CHECK(verdict(Measure::dirac(1.0)) == V::Diverges);
  CHECK(verdict(Measure::dirac(0.5, 0.5)) == V::Converges);
  CHECK(verdict(Measure::lebesgue()) == V::Diverges);           // beta = 0
  CHECK(verdict(Measure::jacobi(1.0, 1.0, 0.0)) == V::Diverges);
  CHECK(verdict(Measure::jacobi(2.0, 0.5, 0.25)) == V::Converges);
  CHECK(verdict(Measure::jacobi(1.0, 0.0, -0.5)) == V::Diverges);
  CHECK(verdict(fixtures::tab_hat()) == V::Converges);          // density dies before 1
  CHECK(verdict(fixtures::tab_open_end()) == V::Unknown);       // positive at last sample
  CHECK(verdict(Measure::dirac(0.3, 0.5) + Measure::lebesgue()) == V::Diverges);

  // mass scaling never changes the verdict
  for (const auto& fx : fixtures::test_measures()) {
    CAPTURE(fx.name);
    std::vector<Atom> atoms = fx.nu.atoms();
    for (auto& a : atoms) a.mass *= 5.0;
    std::vector<JacobiPart> jac = fx.nu.jacobi_parts();
    for (auto& p : jac) p.c *= 5.0;
    auto tab = fx.nu.tabulated();
    if (tab)
      for (auto& d : tab->density) d *= 5.0;
    const Measure scaled(std::move(atoms), std::move(jac), std::move(tab));
    CHECK(scaled.prw_classify() == fx.nu.prw_classify());
  }
}

TEST_CASE("an identically zero measure cannot be classified") {
  const Measure zero({}, {}, TabulatedDensity{{0.2, 0.8}, {0.0, 0.0}});
  CHECK(zero.is_zero());
  CHECK_THROWS_WITH_AS((void)zero.prw_classify(), "empty measure",
                       std::invalid_argument);
}

TEST_CASE("measure union adds moments and coalesces atoms") {
  const Measure a = Measure::dirac(0.3, 0.5) + Measure::lebesgue();
  const Measure b = fixtures::tab_hat() + Measure::dirac(0.3, 0.25);
  const Measure s = a + b;
  for (long k = 0; k <= 10; ++k)
    CHECK(s.moment(k) ==
          doctest::Approx(a.moment(k) + b.moment(k)).epsilon(1e-14));

  const Measure twice = Measure::dirac(0.25) + Measure::dirac(0.25);
  REQUIRE(twice.atoms().size() == 1);
  CHECK(twice.atoms()[0].mass == 2.0);

  CHECK_THROWS_AS((void)(fixtures::tab_hat() + fixtures::tab_open_end()),
                  std::invalid_argument);
}

TEST_CASE("integrate handles real and complex integrands") {
  CHECK(Measure::lebesgue().integrate([](double r) { return r * r; }) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const auto z = Measure::lebesgue().integrate(
      [](double r) { return std::exp(std::complex<double>(0.0, r)); });
  CHECK(z.real() == doctest::Approx(std::sin(1.0)).epsilon(1e-13));
  CHECK(z.imag() == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-13));

  const Measure mix = Measure::dirac(0.5, 2.0) + Measure::lebesgue();
  CHECK(mix.integrate([](double r) { return r; }) ==
        doctest::Approx(2.0 * 0.5 + 0.5).epsilon(1e-14));
}

TEST_CASE("JSON round-trip preserves every part") {
  for (const auto& fx : fixtures::test_measures()) {
    CAPTURE(fx.name);
    const Measure back = Measure::from_json(fx.nu.to_json());
    const auto want = fx.nu.moments(20), got = back.moments(20);
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(got[k] == want[k]);
    CHECK(back.prw_classify() == fx.nu.prw_classify());
  }
}

TEST_CASE("malformed measures are rejected at construction") {
  CHECK_THROWS_AS(Measure::dirac(1.5), std::invalid_argument);
  CHECK_THROWS_AS(Measure::dirac(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Measure({Atom{0.2, 1.0}, Atom{0.2, 1.0}}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Measure::jacobi(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Measure::jacobi(1.0, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Measure::jacobi(1.0, 0.0, -1.2), std::invalid_argument);
  CHECK_THROWS_AS(Measure({}, {}, TabulatedDensity{{0.5}, {1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Measure({}, {}, TabulatedDensity{{0.5, 0.4}, {1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Measure({}, {}, TabulatedDensity{{0.0, 0.5}, {1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Measure({}, {}, TabulatedDensity{{0.4, 0.5}, {1.0, -1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Measure::from_json(nlohmann::json::object()),
                  std::invalid_argument);
}
