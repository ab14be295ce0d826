#include "shimorin/charfit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shimorin/bernstein.hpp"

namespace shimorin {

namespace {

constexpr double kGrowthThreshold = 1.0;
constexpr double kImprovementFloor = 1e-14;
constexpr double kFdStep = 1e-6;
constexpr double kLambdaMin = 1e-12;
constexpr double kLambdaMax = 1e12;

std::vector<double> segment_slopes(const std::vector<double>& t,
                                   const std::vector<double>& g) {
  std::vector<double> s(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    s[i] = (g[i + 1] - g[i]) / (t[i + 1] - t[i]);
  return s;
}

// Weighted pool-adjacent-violators: nondecreasing fit of s with weights w.
void isotonic_nondecreasing(std::vector<double>& s, const std::vector<double>& w) {
  struct Block {
    double value, weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    blocks.push_back({s[i], w[i], 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].value > blocks.back().value) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.value = (a.value * a.weight + b.value * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.count += b.count;
    }
  }
  std::size_t i = 0;
  for (const Block& b : blocks)
    for (std::size_t k = 0; k < b.count; ++k) s[i++] = b.value;
}

// Projection onto the feasible cone: slopes nondecreasing and capped at -1
// (a nondecreasing slope vector with terminal slope <= -1 has every slope
// <= -1, so capping elementwise is the same constraint).  g[0] is kept.
std::vector<double> project(const std::vector<double>& t, std::vector<double> g) {
  std::vector<double> s = segment_slopes(t, g);
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = t[i + 1] - t[i];
  isotonic_nondecreasing(s, w);
  for (double& v : s) v = std::min(v, -1.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    g[i + 1] = g[i] + s[i] * (t[i + 1] - t[i]);
  return g;
}

// Signed residuals f(n+1) L_n - 1.  Infinite when the tail diverges (only
// reachable off the cone; projected iterates always have slope <= -1).
std::vector<double> residuals_at(const std::vector<double>& c,
                                 const std::vector<double>& t,
                                 const std::vector<double>& g) {
  std::vector<double> R(c.size());
  HProfile hp(t, g);
  if (!(hp.last_slope() < 0.0)) {
    std::fill(R.begin(), R.end(), std::numeric_limits<double>::infinity());
    return R;
  }
  for (std::size_t n = 0; n < c.size(); ++n)
    R[n] = c[n] * laplace_transform(hp, static_cast<double>(n)).value - 1.0;
  return R;
}

double sum_sq(const std::vector<double>& R) {
  double s = 0.0;
  for (double v : R) s += v * v;
  return s;
}

}  // namespace

std::vector<double> default_t_grid(std::size_t knots) {
  if (knots < 4) throw std::invalid_argument("default_t_grid: need at least 4 knots");
  std::vector<double> t;
  t.reserve(knots);
  t.push_back(0.0);
  const double lo = 0.02, hi = 12.0;
  const std::size_t m = knots - 1;
  for (std::size_t i = 0; i < m; ++i)
    t.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(m - 1)));
  return t;
}

std::string to_string(FitVerdict v) {
  switch (v) {
    case FitVerdict::Feasible: return "Feasible";
    case FitVerdict::InfeasibleAtN: return "Infeasible-at-N";
    case FitVerdict::PrecheckRejected: return "PrecheckRejected";
  }
  return "PrecheckRejected";
}

PrecheckResult precheck(const Measure& nu) {
  PrecheckResult pr;
  switch (nu.prw_classify()) {
    case PrwVerdict::Diverges:
      pr.pass = true;
      break;
    case PrwVerdict::Converges:
      pr.pass = false;
      break;
    case PrwVerdict::Unknown:
      pr.pass = true;
      pr.warning =
          "PRW divergence could not be certified for this measure; "
          "feasibility results are conditional";
      break;
  }
  return pr;
}

FitResult fit_h(const FitProblem& problem) {
  if (problem.N < 2) throw std::invalid_argument("fit_h: N must be >= 2");
  if (problem.iteration_cap < 1)
    throw std::invalid_argument("fit_h: iteration cap must be >= 1");
  const std::vector<double>& t = problem.t_grid;

  FitResult res;
  const PrecheckResult pc = precheck(problem.nu);
  res.warning = pc.warning;
  if (!pc.pass) {
    res.verdict = FitVerdict::PrecheckRejected;
    return res;
  }

  BernsteinFunction f(problem.nu);
  const std::vector<double> c = f.kernel_coefficients(problem.N);  // f(n+1)
  const std::size_t M = t.size();

  // Exponential warm start alpha e^{-beta t} matching the first two targets
  // m_0 = 1/f(1), m_1 = 1/f(2): beta = m_1/(m_0 - m_1), alpha = beta m_0.
  const double m0 = 1.0 / c[0], m1 = 1.0 / c[1];
  const double beta = m1 / std::max(m0 - m1, 1e-300);
  const double alpha = beta * m0;
  std::vector<double> g(M);
  for (std::size_t i = 0; i < M; ++i) g[i] = std::log(alpha) - beta * t[i];
  g = project(t, g);

  std::vector<double> R = residuals_at(c, t, g);
  double ssr = sum_sq(R);
  double lambda = 1e-3;
  const std::size_t rows = c.size();

  for (int iter = 0; iter < problem.iteration_cap; ++iter) {
    // Finite-difference Jacobian of the unprojected residual map at g.
    Eigen::MatrixXd J(static_cast<long>(rows), static_cast<long>(M));
    for (std::size_t i = 0; i < M; ++i) {
      std::vector<double> gp = g;
      gp[i] += kFdStep;
      const std::vector<double> Rp = residuals_at(c, t, gp);
      for (std::size_t n = 0; n < rows; ++n)
        J(static_cast<long>(n), static_cast<long>(i)) = (Rp[n] - R[n]) / kFdStep;
    }
    Eigen::VectorXd r(static_cast<long>(rows));
    for (std::size_t n = 0; n < rows; ++n) r(static_cast<long>(n)) = R[n];
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd Jtr = J.transpose() * r;

    bool accepted = false;
    double improvement = 0.0;
    while (true) {
      Eigen::MatrixXd A = JtJ;
      for (long k = 0; k < A.rows(); ++k) A(k, k) += lambda;
      const Eigen::VectorXd d = A.ldlt().solve(-Jtr);
      std::vector<double> gt = g;
      for (std::size_t i = 0; i < M; ++i) gt[i] += d(static_cast<long>(i));
      gt = project(t, gt);
      const std::vector<double> Rt = residuals_at(c, t, gt);
      const double st = sum_sq(Rt);
      if (st < ssr) {
        improvement = ssr - st;
        g = std::move(gt);
        R = Rt;
        ssr = st;
        lambda = std::max(lambda * 0.25, kLambdaMin);
        accepted = true;
        break;
      }
      if (lambda >= kLambdaMax) break;
      lambda = std::min(lambda * 8.0, kLambdaMax);
    }
    res.iterations = iter + 1;
    if (!accepted || improvement < kImprovementFloor) break;
  }

  res.profile = HProfile(t, g);
  res.residuals.resize(rows);
  for (std::size_t n = 0; n < rows; ++n) res.residuals[n] = std::abs(R[n]);
  res.convexity_margin = log_convexity_check(*res.profile, problem.convexity_tol).margin;
  res.growth = growth_check(*res.profile, kGrowthThreshold);
  const double worst = *std::max_element(res.residuals.begin(), res.residuals.end());
  const bool ok = worst <= problem.eps_feas &&
                  res.convexity_margin >= -problem.convexity_tol && res.growth.bounded;
  res.verdict = ok ? FitVerdict::Feasible : FitVerdict::InfeasibleAtN;
  return res;
}

Certificate certify(const Measure& nu, const HProfile& hp, std::size_t N, double tol) {
  BernsteinFunction f(nu);
  const std::vector<double> c = f.kernel_coefficients(N);
  Certificate cert;
  cert.residuals.resize(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    double Ln;
    try {
      Ln = laplace_moment(hp, static_cast<long>(n)).value;
    } catch (const std::domain_error&) {
      Ln = std::numeric_limits<double>::infinity();
    }
    cert.residuals[n] = std::abs(c[n] * Ln - 1.0);
    if (n == 0) cert.mass_identity = c[0] * Ln;
  }
  cert.convexity_margin = log_convexity_check(hp, tol).margin;
  cert.growth = growth_check(hp, kGrowthThreshold);
  const double worst = *std::max_element(cert.residuals.begin(), cert.residuals.end());
  cert.certified = worst <= tol && cert.convexity_margin >= -tol && cert.growth.bounded;
  return cert;
}

}  // namespace shimorin
