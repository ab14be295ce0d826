#include "shimorin/weight.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "shimorin/numerics.hpp"
#include "shimorin/parallel.hpp"
#include "shimorin/quadrature.hpp"

namespace shimorin {

namespace {

constexpr int kWeightNodes = 256;
constexpr double kTailGridCap = 0.99;  // deeper tails underflow

// int_a^b exp(A + B (x - a)) dx, stable for B (b - a) near 0.
double exp_affine(double A, double B, double a, double b) {
  return (b - a) * std::exp(A) * expm1_over_x(B * (b - a));
}

double slope_at(const HProfile& hp, double t) {
  const std::vector<double>& knots = hp.t();
  if (t <= knots.front()) return hp.first_slope();
  if (t >= knots.back()) return hp.last_slope();
  const auto it = std::upper_bound(knots.begin(), knots.end(), t);
  const std::size_t seg = static_cast<std::size_t>(it - knots.begin()) - 1;
  return hp.slope(std::min(seg, knots.size() - 2));
}

// int_lo^hi exp(s u + g(u)) du, exact per affine piece of g.
double exp_affine_integral(const HProfile& hp, double s, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> pts;
  pts.push_back(lo);
  for (double tk : hp.t())
    if (tk > lo && tk < hi) pts.push_back(tk);
  pts.push_back(hi);
  KahanSum acc;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    const double m = slope_at(hp, 0.5 * (a + b));
    acc.add(exp_affine(s * a + hp.g(a), s + m, a, b));
  }
  return acc.value();
}

// Minimum increase of successive divided differences of (x, y) knots.
double convexity_margin(const std::vector<double>& x, const std::vector<double>& y) {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double left = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    const double right = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    margin = std::min(margin, right - left);
  }
  return margin;
}

void check_t_grid(const std::vector<double>& t) {
  if (t.size() < 3) throw std::invalid_argument("t-grid needs at least 3 points");
  if (!(t.front() >= 0.0)) throw std::invalid_argument("t-grid must start at t >= 0");
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (!(t[i] < t[i + 1]))
      throw std::invalid_argument("t-grid must be strictly increasing");
}

}  // namespace

HProfile::HProfile(std::vector<double> t, std::vector<double> log_h)
    : t_(std::move(t)), g_(std::move(log_h)) {
  check_t_grid(t_);
  if (g_.size() != t_.size())
    throw std::invalid_argument("HProfile: t and log_h lengths differ");
  for (double v : g_)
    if (!std::isfinite(v)) throw std::invalid_argument("HProfile: log_h must be finite");
}

double HProfile::g(double t) const {
  if (t <= t_.front()) return g_.front() + first_slope() * (t - t_.front());
  if (t >= t_.back()) return g_.back() + last_slope() * (t - t_.back());
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  return g_[i] + slope(i) * (t - t_[i]);
}

double HProfile::h(double t) const { return std::exp(g(t)); }

double HProfile::slope(std::size_t i) const {
  return (g_[i + 1] - g_[i]) / (t_[i + 1] - t_[i]);
}

HProfile HProfile::from_json(const nlohmann::json& j) {
  return HProfile(j.at("t").get<std::vector<double>>(),
                  j.at("log_h").get<std::vector<double>>());
}

nlohmann::json HProfile::to_json() const {
  return nlohmann::json{{"t", t_}, {"log_h", g_}};
}

RadialWeightProfile RadialWeightProfile::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("constant weight: c must be positive");
  RadialWeightProfile w;
  w.kind_ = Kind::Constant;
  w.c_ = c;
  return w;
}

RadialWeightProfile RadialWeightProfile::power(double c, double p) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("power weight: c must be positive");
  if (!(p >= 0.0) || !std::isfinite(p))
    throw std::invalid_argument("power weight: p must be >= 0");
  RadialWeightProfile w;
  w.kind_ = Kind::Power;
  w.c_ = c;
  w.p_ = p;
  return w;
}

RadialWeightProfile RadialWeightProfile::from_h(HProfile hp) {
  RadialWeightProfile w;
  w.kind_ = Kind::FromH;
  w.h_ = std::move(hp);
  return w;
}

RadialWeightProfile RadialWeightProfile::tabulated(std::vector<double> r,
                                                   std::vector<double> omega) {
  if (r.size() != omega.size())
    throw std::invalid_argument("tabulated weight: grid/sample lengths differ");
  if (r.size() < 2) throw std::invalid_argument("tabulated weight: need 2+ samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0 && r[i] < 1.0))
      throw std::invalid_argument("tabulated weight: grid must lie inside (0,1)");
    if (i > 0 && !(r[i] > r[i - 1]))
      throw std::invalid_argument("tabulated weight: grid must be strictly increasing");
    if (!(omega[i] >= 0.0) || !std::isfinite(omega[i]))
      throw std::invalid_argument("tabulated weight: samples must be >= 0 and finite");
  }
  std::size_t prefix = 0;
  while (prefix < omega.size() && omega[prefix] > 0.0) ++prefix;
  for (std::size_t i = prefix; i < omega.size(); ++i)
    if (omega[i] != 0.0)
      throw std::invalid_argument(
          "tabulated weight: zero samples are only allowed as a trailing run");
  if (prefix < 2)
    throw std::invalid_argument("tabulated weight: need at least 2 positive samples");
  RadialWeightProfile w;
  w.kind_ = Kind::Tabulated;
  w.r_ = std::move(r);
  w.w_ = std::move(omega);
  w.positive_prefix_ = prefix;
  return w;
}

const HProfile& RadialWeightProfile::h_profile() const {
  if (!h_) throw std::logic_error("h_profile: not a FromH weight");
  return *h_;
}

double RadialWeightProfile::operator()(double r) const {
  if (!(r > 0.0 && r < 1.0))
    throw std::domain_error("weight: radius must lie in (0,1)");
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::Power:
      return c_ * std::exp(2.0 * p_ * std::log(r));
    case Kind::FromH: {
      const double T = -2.0 * std::log(r);
      return std::exp(h_->g(T) + T);
    }
    case Kind::Tabulated:
      break;
  }
  const std::size_t last = positive_prefix_ - 1;
  if (r >= r_[last]) {
    if (r == r_[last]) return w_[last];
    return positive_prefix_ < w_.size()
               ? 0.0  // weight vanishes past the last positive sample
               : std::exp(std::log(w_[last]) +
                          (std::log(w_[last]) - std::log(w_[last - 1])) /
                              (r_[last] - r_[last - 1]) * (r - r_[last]));
  }
  if (r <= r_.front())
    return std::exp(std::log(w_[0]) + (std::log(w_[1]) - std::log(w_[0])) /
                                          (r_[1] - r_[0]) * (r - r_[0]));
  const auto it = std::upper_bound(r_.begin(), r_.begin() + static_cast<long>(last) + 1, r);
  const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
  const double la = std::log(w_[i]), lb = std::log(w_[i + 1]);
  return std::exp(la + (lb - la) / (r_[i + 1] - r_[i]) * (r - r_[i]));
}

RadialWeightProfile RadialWeightProfile::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(j.at("c").get<double>());
  if (kind == "power") return power(j.at("c").get<double>(), j.at("p").get<double>());
  if (kind == "from_h") return from_h(HProfile::from_json(j.at("h")));
  if (kind == "tabulated")
    return tabulated(j.at("r").get<std::vector<double>>(),
                     j.at("omega").get<std::vector<double>>());
  throw std::invalid_argument("weight: unknown kind '" + kind + "'");
}

nlohmann::json RadialWeightProfile::to_json() const {
  switch (kind_) {
    case Kind::Constant:
      return nlohmann::json{{"kind", "constant"}, {"c", c_}};
    case Kind::Power:
      return nlohmann::json{{"kind", "power"}, {"c", c_}, {"p", p_}};
    case Kind::FromH:
      return nlohmann::json{{"kind", "from_h"}, {"h", h_->to_json()}};
    case Kind::Tabulated:
      break;
  }
  return nlohmann::json{{"kind", "tabulated"}, {"r", r_}, {"omega", w_}};
}

HProfile weight_to_h(const RadialWeightProfile& w, const std::vector<double>& t_grid) {
  check_t_grid(t_grid);
  std::vector<double> g(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double r = std::exp(-0.5 * t_grid[i]);
    if (!(r > 0.0 && r < 1.0))
      throw std::domain_error("weight_to_h: grid point maps outside (0,1)");
    const double val = w(r);
    if (!(val > 0.0)) throw std::domain_error("weight_to_h: nonpositive weight sample");
    g[i] = -t_grid[i] + std::log(val);
  }
  return HProfile(t_grid, std::move(g));
}

double h_to_weight(const HProfile& hp, double r) {
  if (!(r > 0.0 && r < 1.0))
    throw std::domain_error("h_to_weight: radius must lie in (0,1)");
  const double T = -2.0 * std::log(r);
  return std::exp(hp.g(T) + T);
}

ConvexityReport log_convexity_check(const HProfile& hp, double tol) {
  ConvexityReport rep;
  rep.margin = convexity_margin(hp.t(), hp.log_h());
  rep.pass = rep.margin >= -tol;
  return rep;
}

ConvexityReport log_subharmonic_check(const RadialWeightProfile& w,
                                      const std::vector<double>& t_grid, double tol) {
  check_t_grid(t_grid);
  std::vector<double> q(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double r = std::exp(-0.5 * t_grid[i]);
    if (!(r > 0.0 && r < 1.0))
      throw std::domain_error("log_subharmonic_check: grid point maps outside (0,1)");
    const double val = w(r);
    if (!(val > 0.0))
      throw std::domain_error("log_subharmonic_check: nonpositive weight sample");
    q[i] = std::log(val);
  }
  ConvexityReport rep;
  rep.margin = convexity_margin(t_grid, q);
  rep.pass = rep.margin >= -tol;
  return rep;
}

GrowthReport growth_check(const HProfile& hp, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("growth_check: T must be positive");
  if (!(T >= hp.t().front()))
    throw std::invalid_argument("growth_check: T must not precede the grid");
  GrowthReport rep;
  rep.threshold = T;
  rep.bounded = hp.last_slope() <= -1.0;
  if (!rep.bounded) {
    rep.sup_bound = std::numeric_limits<double>::infinity();
    return rep;
  }
  // t + g(t) is piecewise affine with nonpositive terminal slope, so the sup
  // over [T, inf) is attained at T or at a knot past T.
  double best = T + hp.g(T);
  for (std::size_t i = 0; i < hp.knots(); ++i)
    if (hp.t()[i] >= T) best = std::max(best, hp.t()[i] + hp.log_h()[i]);
  rep.sup_bound = std::exp(best);
  return rep;
}

DhatReport dhat_moment_check(const MomentSequence& omega_moments, double ceiling) {
  const std::size_t len = omega_moments.size();
  if (len < 3)
    throw std::invalid_argument("dhat_moment_check: need moments at least up to omega_2");
  for (std::size_t i = 0; i < len; ++i)
    if (!(omega_moments[i] > 0.0))
      throw std::domain_error("dhat_moment_check: nonpositive moment");
  DhatReport rep;
  rep.form = DhatReport::Form::MomentRatio;
  const std::size_t N = (len - 1) / 2;
  for (std::size_t n = 1; n <= N; ++n) {
    const double ratio = omega_moments[n] / omega_moments[2 * n];
    if (ratio > rep.constant) {
      rep.constant = ratio;
      rep.arg_max = static_cast<double>(n);
    }
  }
  rep.pass = rep.constant <= ceiling;
  return rep;
}

namespace {

// omega_hat(r) = int_r^1 omega(s) ds, in closed form for every variant
// (piecewise exponentials integrate exactly; expm1 keeps short pieces stable).
double omega_tail(const RadialWeightProfile& w, double r) {
  switch (w.kind()) {
    case RadialWeightProfile::Kind::Constant:
      return w.c() * (1.0 - r);
    case RadialWeightProfile::Kind::Power: {
      const double q = 2.0 * w.p() + 1.0;
      return w.c() * (1.0 - std::pow(r, q)) / q;
    }
    case RadialWeightProfile::Kind::FromH: {
      const HProfile& hp = w.h_profile();
      if (r == 0.0) {  // full integral: finite only when the terminal slope allows
        const double m = hp.last_slope();
        if (!(m < -0.5)) return std::numeric_limits<double>::infinity();
        const double tM = hp.t().back();
        return 0.5 * (exp_affine_integral(hp, 0.5, 0.0, tM) +
                      std::exp(0.5 * tM + hp.g(tM)) / (-0.5 - m));
      }
      const double U = -2.0 * std::log(r);
      return 0.5 * exp_affine_integral(hp, 0.5, 0.0, U);
    }
    case RadialWeightProfile::Kind::Tabulated:
      break;
  }
  const std::vector<double>& rg = w.grid();
  const std::vector<double>& ws = w.samples();
  const std::size_t last = [&] {
    std::size_t k = 0;
    while (k < ws.size() && ws[k] > 0.0) ++k;
    return k - 1;
  }();
  KahanSum acc;
  auto piece = [&](double a, double b, double la, double slope, double a0) {
    // integrate exp(la + slope (x - a0)) over [max(a, r), b]
    const double lo = std::max(a, r);
    if (b > lo) acc.add(exp_affine(la + slope * (lo - a0), slope, lo, b));
  };
  const double l0 = std::log(ws[0]), l1 = std::log(ws[1]);
  const double head_slope = (l1 - l0) / (rg[1] - rg[0]);
  piece(0.0, std::min(rg[0], 1.0), l0, head_slope, rg[0]);
  for (std::size_t i = 0; i < last; ++i) {
    const double la = std::log(ws[i]), lb = std::log(ws[i + 1]);
    piece(rg[i], rg[i + 1], la, (lb - la) / (rg[i + 1] - rg[i]), rg[i]);
  }
  if (last + 1 == ws.size()) {  // no trailing zeros: extrapolate to the boundary
    const double la = std::log(ws[last - 1]), lb = std::log(ws[last]);
    piece(rg[last], 1.0, lb, (lb - la) / (rg[last] - rg[last - 1]), rg[last]);
  }
  return acc.value();
}

}  // namespace

DhatReport dhat_tail_check(const RadialWeightProfile& w,
                           const std::vector<double>& r_grid, double ceiling) {
  if (r_grid.empty()) throw std::invalid_argument("dhat_tail_check: empty grid");
  for (double r : r_grid)
    if (!(r >= 0.0 && r <= kTailGridCap))
      throw std::invalid_argument("dhat_tail_check: grid radii must lie in [0, 0.99]");
  const auto tails = par::map_indexed<std::array<double, 2>>(
      r_grid.size(), [&](std::size_t i) -> std::array<double, 2> {
        return {omega_tail(w, r_grid[i]), omega_tail(w, 0.5 * (1.0 + r_grid[i]))};
      });
  DhatReport rep;
  rep.form = DhatReport::Form::Tail;
  for (std::size_t i = 0; i < tails.size(); ++i) {
    if (!(tails[i][0] > 0.0) || !(tails[i][1] > 0.0))
      throw std::domain_error("not RKHS-admissible");
    const double ratio = tails[i][0] / tails[i][1];
    if (ratio > rep.constant) {
      rep.constant = ratio;
      rep.arg_max = r_grid[i];
    }
  }
  rep.pass = rep.constant <= ceiling;
  return rep;
}

LaplaceMoment laplace_transform(const HProfile& hp, double s) {
  if (!(hp.last_slope() < s)) throw std::domain_error("integral diverges");
  LaplaceMoment out;
  const double tM = hp.t().back();
  out.tail = std::exp(hp.g(tM) - s * tM) / (s - hp.last_slope());
  out.value = exp_affine_integral(hp, -s, 0.0, tM) + out.tail;
  return out;
}

LaplaceMoment laplace_moment(const HProfile& hp, long n) {
  if (n < 0) throw std::invalid_argument("laplace_moment: n must be >= 0");
  return laplace_transform(hp, static_cast<double>(n));
}

double weight_moment(const RadialWeightProfile& w, long n) {
  if (n < 0) throw std::invalid_argument("weight_moment: n must be >= 0");
  const double nd = static_cast<double>(n);
  switch (w.kind()) {
    case RadialWeightProfile::Kind::Constant:
      return w.c() / (nd + 1.0);
    case RadialWeightProfile::Kind::Power:
      return w.c() / (nd + 2.0 * w.p() + 1.0);
    case RadialWeightProfile::Kind::FromH: {
      const double s = 0.5 * (nd - 1.0);
      if (!(w.h_profile().last_slope() < s))
        throw std::domain_error("∫ r ω(r) dr = ∞");
      return 0.5 * laplace_transform(w.h_profile(), s).value;
    }
    case RadialWeightProfile::Kind::Tabulated:
      break;
  }
  const quad::Rule& rule = quad::legendre_rule(kWeightNodes);
  const std::vector<double>& rg = w.grid();
  const std::size_t prefix = [&] {
    std::size_t k = 0;
    while (k < w.samples().size() && w.samples()[k] > 0.0) ++k;
    return k;
  }();
  auto f = [&](double r) { return std::pow(r, nd) * w(r); };
  KahanSum acc;
  acc.add(quad::apply_on(rule, 0.0, rg.front(), [&](double r) {
    return r > 0.0 ? f(r) : 0.0;
  }));
  for (std::size_t i = 0; i + 1 < prefix; ++i)
    acc.add(quad::apply_on(rule, rg[i], rg[i + 1], f));
  if (prefix == w.samples().size())
    acc.add(quad::apply_on(rule, rg.back(), 1.0, [&](double r) {
      return r < 1.0 ? f(r) : 0.0;
    }));
  return acc.value();
}

bool rkhs_check(const RadialWeightProfile& w) {
  if (w.kind() != RadialWeightProfile::Kind::Tabulated) return true;
  return w.samples().back() > 0.0;
}

}  // namespace shimorin
