#ifndef SHIMORIN_WEIGHT_HPP
#define SHIMORIN_WEIGHT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shimorin/moments.hpp"

namespace shimorin {

/**
 * Piecewise-linear profile of g = log h on a grid 0 <= t_0 < ... < t_M,
 * M >= 2, continued affinely beyond both ends.  This representation turns the
 * analytic conditions on h into finite certificates: log-convexity becomes a
 * slope-monotonicity check, the growth condition sup e^t h(t) < inf becomes a
 * terminal-slope test, and Laplace moments integrate segment by segment in
 * closed form.
 */
class HProfile {
 public:
  HProfile(std::vector<double> t, std::vector<double> log_h);

  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& log_h() const { return g_; }
  std::size_t knots() const { return t_.size(); }

  /// g(t) for t >= 0, extrapolating the end segments affinely.
  double g(double t) const;
  double h(double t) const;

  /// Slope of segment i (between knots i and i+1), i < knots()-1.
  double slope(std::size_t i) const;
  double first_slope() const { return slope(0); }
  double last_slope() const { return slope(t_.size() - 2); }

  static HProfile from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  std::vector<double> t_;
  std::vector<double> g_;
};

/**
 * Radial weight r in (0,1) -> omega(r) > 0 in one of four shapes:
 *   Constant   c
 *   Power      c * r^(2p), p >= 0
 *   FromH      omega(r) = h(-2 log r) / r^2 for an HProfile h
 *   Tabulated  log-linear interpolation of samples on an interior grid,
 *              affine log-extrapolation beyond the ends; a trailing run of
 *              zero samples makes the weight vanish from the last positive
 *              sample onward (the only way a weight here can fail rkhs_check).
 */
class RadialWeightProfile {
 public:
  enum class Kind { Constant, Power, FromH, Tabulated };

  static RadialWeightProfile constant(double c);
  static RadialWeightProfile power(double c, double p);
  static RadialWeightProfile from_h(HProfile hp);
  static RadialWeightProfile tabulated(std::vector<double> r,
                                       std::vector<double> omega);

  Kind kind() const { return kind_; }
  double operator()(double r) const;  // value at r in (0,1)

  double c() const { return c_; }              // Constant/Power
  double p() const { return p_; }              // Power
  const HProfile& h_profile() const;           // FromH only
  const std::vector<double>& grid() const { return r_; }      // Tabulated
  const std::vector<double>& samples() const { return w_; }   // Tabulated

  static RadialWeightProfile from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  RadialWeightProfile() = default;

  Kind kind_ = Kind::Constant;
  double c_ = 1.0, p_ = 0.0;
  std::optional<HProfile> h_;
  std::vector<double> r_, w_;
  std::size_t positive_prefix_ = 0;  // Tabulated: samples[0..prefix) > 0
};

struct ConvexityReport {
  double margin = 0.0;  // min increase of successive divided differences
  bool pass = false;    // margin >= -tol
};

struct GrowthReport {
  double threshold = 0.0;  // T
  double sup_bound = 0.0;  // sup_{t >= T} e^t h(t); +inf when unbounded
  bool bounded = false;
};

struct DhatReport {
  enum class Form { MomentRatio, Tail };
  double constant = 0.0;  // best C found
  Form form = Form::MomentRatio;
  double arg_max = 0.0;  // index n (moment form) or radius r (tail form)
  bool pass = false;     // constant <= ceiling
};

struct LaplaceMoment {
  double value = 0.0;  // full integral, tail included
  double tail = 0.0;   // closed-form contribution of (t_M, inf)
};

/// Sample h(t) = e^{-t} omega(e^{-t/2}) on the grid: g_i = -t_i + log omega(.).
/// Grid needs 3+ strictly increasing points; every point must map into (0,1)
/// and hit a positive weight value.
HProfile weight_to_h(const RadialWeightProfile& w, const std::vector<double>& t_grid);

/// Inverse transform omega(r) = h(-2 log r) / r^2, evaluated at one radius.
double h_to_weight(const HProfile& hp, double r);

/// Log-convexity certificate: successive segment slopes of g must not
/// decrease; margin is the worst increase, pass iff margin >= -tol.
ConvexityReport log_convexity_check(const HProfile& hp, double tol);

/// Radial log-subharmonicity via convexity of t -> log omega(e^{-t/2})
/// sampled on the grid (same divided-difference test; the -t shift of
/// weight_to_h is affine and does not move the margin).
ConvexityReport log_subharmonic_check(const RadialWeightProfile& w,
                                      const std::vector<double>& t_grid, double tol);

/// sup_{t >= T} e^t h(t): finite iff the terminal slope of g is <= -1, and
/// then attained at a knot or at T since t + g(t) is piecewise affine.
GrowthReport growth_check(const HProfile& hp, double T);

/// Moment-ratio form of the D-hat condition: C = max_{1<=n<=N} omega_n /
/// omega_{2n} with N = (len-1)/2; pass iff C <= ceiling.
DhatReport dhat_moment_check(const MomentSequence& omega_moments, double ceiling);

/// Tail form of the D-hat condition: C = max over the grid of
/// omega_hat(r) / omega_hat((1+r)/2), omega_hat(r) = int_r^1 omega.  Grid
/// radii must lie in [0, 0.99] (tails further out underflow).
DhatReport dhat_tail_check(const RadialWeightProfile& w,
                           const std::vector<double>& r_grid, double ceiling = 2.0);

/// L_n(h) = int_0^inf e^{-nt} h(t) dt, exact per affine segment of log h.
/// Throws std::domain_error("integral diverges") when the terminal slope
/// is >= n.  laplace_transform is the same integral at a real exponent.
LaplaceMoment laplace_moment(const HProfile& hp, long n);
LaplaceMoment laplace_transform(const HProfile& hp, double s);

/// omega_n = int_0^1 r^n omega(r) dr.  Closed form c/(n+2p+1) for
/// Constant/Power; segment quadrature for Tabulated; omega_n = (1/2)
/// L_{(n-1)/2}(h) for FromH.  Divergent integrals raise a domain error.
double weight_moment(const RadialWeightProfile& w, long n);

/// True when omega assigns positive mass to every neighborhood [r, 1) of the
/// boundary — the reproducing-kernel admissibility condition.  Only a
/// Tabulated weight with trailing zero samples fails.
bool rkhs_check(const RadialWeightProfile& w);

}  // namespace shimorin

#endif
