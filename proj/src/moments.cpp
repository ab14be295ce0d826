#include "shimorin/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shimorin/bernstein.hpp"
#include "shimorin/numerics.hpp"
#include "shimorin/parallel.hpp"

namespace shimorin {

std::string to_string(MomentTag t) {
  switch (t) {
    case MomentTag::Nu: return "nu_moments";
    case MomentTag::Mu: return "mu_moments";
    case MomentTag::Omega: return "omega_moments";
    case MomentTag::KernelCoefficients: return "kernel_coefficients";
    case MomentTag::Custom: return "custom";
  }
  return "custom";
}

MomentSequence reciprocal_partial_sums(const MomentSequence& a) {
  if (a.values.empty()) throw std::invalid_argument("reciprocal_partial_sums: empty sequence");
  MomentSequence out;
  out.tag = a.tag == MomentTag::Nu ? MomentTag::Mu : MomentTag::Custom;
  out.values.reserve(a.size());
  KahanSum sum;
  for (double v : a.values) {
    sum.add(v);
    if (!(sum.value() > 0.0)) throw std::domain_error("not a positive sequence");
    out.values.push_back(1.0 / sum.value());
  }
  return out;
}

CompleteMonotonicityReport complete_monotonicity_report(const MomentSequence& b,
                                                        int K, double tol) {
  if (K < 1) throw std::invalid_argument("complete_monotonicity_report: K must be >= 1");
  if (b.size() < static_cast<std::size_t>(K) + 1)
    throw std::invalid_argument("complete_monotonicity_report: sequence shorter than K+1");
  CompleteMonotonicityReport rep;
  rep.max_order = K;
  rep.min_value = std::numeric_limits<double>::infinity();
  std::vector<double> diff = b.values;  // Delta^k b, shrinking by one per level
  double sign = 1.0;
  for (int k = 0; k <= K; ++k) {
    for (double v : diff) rep.min_value = std::min(rep.min_value, sign * v);
    if (k == K) break;
    for (std::size_t n = 0; n + 1 < diff.size(); ++n) diff[n] = diff[n + 1] - diff[n];
    diff.pop_back();
    sign = -sign;
  }
  rep.pass = rep.min_value >= -tol;
  return rep;
}

OmegaMoments omega_moments_from_nu(const Measure& nu, std::size_t N) {
  OmegaMoments out;
  switch (nu.prw_classify()) {
    case PrwVerdict::Diverges:
      break;
    case PrwVerdict::Converges:
      throw std::domain_error("Shimorin kernel is not a Bergman kernel");
    case PrwVerdict::Unknown:
      out.warning =
          "PRW divergence could not be certified for this measure; "
          "omega moments may not correspond to an admissible weight";
      break;
  }
  BernsteinFunction f(nu);
  out.moments.tag = MomentTag::Omega;
  out.moments.values = par::map_indexed<double>(N + 1, [&](std::size_t n) {
    return 1.0 / (2.0 * f((static_cast<double>(n) + 1.0) / 2.0));
  });
  return out;
}

Measure DiscreteFit::as_measure() const {
  if (atoms.empty()) throw std::invalid_argument("DiscreteFit: no mass was assigned");
  return Measure(atoms, {}, std::nullopt);
}

DiscreteFit fit_discrete_measure(const MomentSequence& target,
                                 const std::vector<double>& support_grid,
                                 double tol) {
  if (support_grid.empty()) throw std::invalid_argument("fit_discrete_measure: empty grid");
  if (target.values.empty()) throw std::invalid_argument("fit_discrete_measure: empty target");
  for (double r : support_grid)
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("fit_discrete_measure: grid point outside [0,1]");

  const long m = static_cast<long>(target.size());
  const long p = static_cast<long>(support_grid.size());
  Eigen::MatrixXd V(m, p);
  for (long j = 0; j < p; ++j) {
    double pw = 1.0;
    for (long n = 0; n < m; ++n) {
      V(n, j) = pw;  // r^0 := 1 also at r = 0
      pw *= support_grid[static_cast<std::size_t>(j)];
    }
  }
  Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(target.values.data(), m);

  // Lawson-Hanson NNLS.  All tie-breaks take the lowest index, so the
  // iteration path is fully determined by the inputs.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  std::vector<bool> passive(static_cast<std::size_t>(p), false);
  const double wtol = std::max(tol, 1e-14) * std::max(1.0, (V.transpose() * mu).cwiseAbs().maxCoeff());

  auto solve_passive = [&](const std::vector<long>& idx) {
    Eigen::MatrixXd Vp(m, static_cast<long>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) Vp.col(static_cast<long>(c)) = V.col(idx[c]);
    return Vp.colPivHouseholderQr().solve(mu).eval();
  };

  auto collect_passive = [&] {
    std::vector<long> idx;
    for (long j = 0; j < p; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    return idx;
  };

  long outer_guard = 3 * p + 10;
  while (outer_guard-- > 0) {
    Eigen::VectorXd w = V.transpose() * (mu - V * x);
    // Candidate entry: best positive dual whose trial coefficient stays
    // positive.  A candidate that solves to <= 0 would make the step length
    // collapse to zero and cycle, so it is set aside for this dual round.
    std::vector<bool> rejected(static_cast<std::size_t>(p), false);
    long enter = -1;
    std::vector<long> idx;
    Eigen::VectorXd z;
    for (;;) {
      enter = -1;
      double best = wtol;
      for (long j = 0; j < p; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (!passive[ju] && !rejected[ju] && w(j) > best) {
          best = w(j);
          enter = j;
        }
      }
      if (enter < 0) break;
      passive[static_cast<std::size_t>(enter)] = true;
      idx = collect_passive();
      z = solve_passive(idx);
      const auto pos = static_cast<long>(
          std::find(idx.begin(), idx.end(), enter) - idx.begin());
      if (z(pos) > 0.0) break;
      passive[static_cast<std::size_t>(enter)] = false;
      rejected[static_cast<std::size_t>(enter)] = true;
    }
    if (enter < 0) break;

    long inner_guard = 3 * p + 10;
    while (inner_guard-- > 0) {
      bool all_pos = true;
      for (long c = 0; c < z.size(); ++c)
        if (z(c) <= 0.0) all_pos = false;
      if (all_pos) {
        x.setZero();
        for (std::size_t c = 0; c < idx.size(); ++c) x(idx[c]) = z(static_cast<long>(c));
        break;
      }
      double alpha = 1.0;
      for (std::size_t c = 0; c < idx.size(); ++c)
        if (z(static_cast<long>(c)) <= 0.0) {
          double xi = x(idx[c]);
          alpha = std::min(alpha, xi / (xi - z(static_cast<long>(c))));
        }
      for (std::size_t c = 0; c < idx.size(); ++c)
        x(idx[c]) += alpha * (z(static_cast<long>(c)) - x(idx[c]));
      for (long j : idx)
        if (x(j) <= 1e-14 * x.maxCoeff()) {
          x(j) = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      idx = collect_passive();
      z = solve_passive(idx);
    }
  }

  DiscreteFit fit;
  fit.residual = (V * x - mu).norm();
  std::vector<std::pair<double, double>> located;
  for (long j = 0; j < p; ++j)
    if (x(j) > 0.0) located.emplace_back(support_grid[static_cast<std::size_t>(j)], x(j));
  std::sort(located.begin(), located.end());
  for (std::size_t i = 0; i < located.size(); ++i) {
    if (i > 0 && located[i].first == located[i - 1].first)
      fit.atoms.back().mass += located[i].second;  // duplicate grid points coalesce
    else
      fit.atoms.push_back({located[i].first, located[i].second});
  }
  return fit;
}

}  // namespace shimorin
