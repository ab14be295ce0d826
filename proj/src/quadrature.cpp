#include "shimorin/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "shimorin/numerics.hpp"

namespace shimorin::quad {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal matrix
// built from the three-term recurrence of the (monic) Jacobi polynomials, and
// the weight at node i is mu0 * v0i^2 with v the normalized eigenvector.
// Recurrence coefficients follow Gautschi's r_jacobi for the weight
// (1-u)^alpha (1+u)^beta on [-1, 1]; the [0,1] weight x^a (1-x)^b maps to
// alpha = b, beta = a under x = (u+1)/2.
Rule make_jacobi_rule(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("quadrature: need at least one node");
  if (a <= -1.0 || b <= -1.0)
    throw std::invalid_argument("quadrature: Jacobi exponents must be > -1");

  const double alpha = b;
  const double beta = a;

  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  const double apb = alpha + beta;

  diag[0] = (beta - alpha) / (apb + 2.0);
  for (int k = 1; k < n; ++k) {
    const double d = (2.0 * k + apb) * (2.0 * k + apb + 2.0);
    diag[k] = (beta * beta - alpha * alpha) / d;
  }
  for (int k = 1; k < n; ++k) {
    double bk;
    if (k == 1) {
      bk = 4.0 * (alpha + 1.0) * (beta + 1.0) /
           ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
    } else {
      const double t = 2.0 * k + apb;
      bk = 4.0 * k * (k + alpha) * (k + beta) * (k + apb) /
           (t * t * (t + 1.0) * (t - 1.0));
    }
    sub[k - 1] = std::sqrt(bk);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (n == 1) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = diag[0];
    es.compute(m);
  } else {
    es.computeFromTridiagonal(diag, sub.head(n - 1));
  }
  if (es.info() != Eigen::Success)
    throw std::runtime_error("quadrature: tridiagonal eigensolve failed");

  // mu0 = integral over [-1,1] of the Jacobi weight.
  const double mu0 =
      std::exp((apb + 1.0) * std::log(2.0) + log_beta(alpha + 1.0, beta + 1.0));
  // Scale from [-1,1] to [0,1]: dx = du/2 and the weight picks up 2^{-a-b}.
  const double scale = std::exp(-(apb + 1.0) * std::log(2.0));

  Rule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
    const double v0 = es.eigenvectors()(0, i);
    rule.w[i] = scale * mu0 * v0 * v0;
  }
  return rule;
}

namespace {
using RuleKey = std::tuple<int, double, double>;
std::map<RuleKey, Rule> g_rule_cache;
std::mutex g_rule_mutex;
}  // namespace

const Rule& jacobi_rule(int n, double a, double b) {
  const RuleKey key{n, a, b};
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = g_rule_cache.find(key);
  if (it == g_rule_cache.end())
    it = g_rule_cache.emplace(key, make_jacobi_rule(n, a, b)).first;
  return it->second;
}

}  // namespace shimorin::quad
