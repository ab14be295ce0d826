#include "shimorin/measure.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "shimorin/parallel.hpp"

namespace shimorin {

std::string to_string(PrwVerdict v) {
  switch (v) {
    case PrwVerdict::Diverges: return "Diverges";
    case PrwVerdict::Converges: return "Converges";
    case PrwVerdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

Measure::Measure(std::vector<Atom> atoms, std::vector<JacobiPart> jacobi,
                 std::optional<TabulatedDensity> tabulated, QuadratureRule rule)
    : atoms_(std::move(atoms)),
      jacobi_(std::move(jacobi)),
      tabulated_(std::move(tabulated)),
      rule_(rule) {
  for (const Atom& a : atoms_) {
    if (!(a.at >= 0.0 && a.at <= 1.0))
      throw std::invalid_argument("measure: atom location outside [0,1]");
    if (!(a.mass > 0.0))
      throw std::invalid_argument("measure: atom mass must be > 0");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.at < b.at; });
  for (std::size_t i = 0; i + 1 < atoms_.size(); ++i)
    if (atoms_[i].at == atoms_[i + 1].at)
      throw std::invalid_argument("measure: duplicate atom location");
  for (const JacobiPart& p : jacobi_) {
    if (!(p.c > 0.0))
      throw std::invalid_argument("measure: Jacobi coefficient must be > 0");
    if (!(p.gamma > -1.0 && p.beta > -1.0))
      throw std::invalid_argument("measure: Jacobi exponents must be > -1");
  }
  if (tabulated_) {
    const auto& t = *tabulated_;
    if (t.r.size() < 2 || t.r.size() != t.density.size())
      throw std::invalid_argument("measure: tabulated part needs matching grids"
                                  " of length >= 2");
    for (std::size_t i = 0; i < t.r.size(); ++i) {
      if (!(t.r[i] > 0.0 && t.r[i] < 1.0))
        throw std::invalid_argument("measure: tabulated grid must lie in (0,1)");
      if (i && !(t.r[i] > t.r[i - 1]))
        throw std::invalid_argument("measure: tabulated grid must increase");
      if (!(t.density[i] >= 0.0) || !std::isfinite(t.density[i]))
        throw std::invalid_argument("measure: tabulated density must be >= 0");
    }
  }
  if (rule_.nodes < 2 || rule_.graded_levels < 1)
    throw std::invalid_argument("measure: bad quadrature rule");
}

Measure Measure::dirac(double at, double mass) {
  return Measure({Atom{at, mass}}, {});
}

Measure Measure::jacobi(double c, double gamma, double beta) {
  return Measure({}, {JacobiPart{c, gamma, beta}});
}

Measure Measure::lebesgue() { return jacobi(1.0, 0.0, 0.0); }

bool Measure::is_zero() const {
  if (!atoms_.empty() || !jacobi_.empty()) return false;
  if (!tabulated_) return true;
  return std::all_of(tabulated_->density.begin(), tabulated_->density.end(),
                     [](double d) { return d == 0.0; });
}

namespace {
// integral over [p,q] of r^k (A + B r) dr, exact.
double segment_poly_moment(double p, double q, double A, double B, long k) {
  const double hi1 = std::pow(q, double(k + 1)), lo1 = std::pow(p, double(k + 1));
  const double hi2 = std::pow(q, double(k + 2)), lo2 = std::pow(p, double(k + 2));
  return A * (hi1 - lo1) / double(k + 1) + B * (hi2 - lo2) / double(k + 2);
}
}  // namespace

double Measure::moment(long k) const {
  if (k < 0) throw std::domain_error("moment: index must be >= 0");
  KahanSum acc;
  for (const Atom& a : atoms_) {
    if (a.at == 0.0)
      acc.add(k == 0 ? a.mass : 0.0);  // 0^0 := 1
    else
      acc.add(a.mass * std::pow(a.at, double(k)));
  }
  for (const JacobiPart& p : jacobi_)
    acc.add(p.c * beta_fn(double(k) + p.gamma + 1.0, p.beta + 1.0));
  if (tabulated_) {
    const auto& t = *tabulated_;
    for (std::size_t i = 0; i + 1 < t.r.size(); ++i) {
      const double p = t.r[i], q = t.r[i + 1];
      const double d0 = t.density[i], d1 = t.density[i + 1];
      if (d0 == 0.0 && d1 == 0.0) continue;
      const double slope = (d1 - d0) / (q - p);
      acc.add(segment_poly_moment(p, q, d0 - slope * p, slope, k));
    }
  }
  return acc.value();
}

std::vector<double> Measure::moments(long N) const {
  if (N < 0) throw std::domain_error("moments: N must be >= 0");
  return par::map_indexed<double>(std::size_t(N) + 1,
                                  [&](std::size_t k) { return moment(long(k)); });
}

PrwVerdict Measure::prw_classify() const {
  if (is_zero()) throw std::invalid_argument("empty measure");
  for (const Atom& a : atoms_)
    if (a.at == 1.0) return PrwVerdict::Diverges;
  for (const JacobiPart& p : jacobi_)
    if (p.beta <= 0.0) return PrwVerdict::Diverges;
  if (tabulated_) {
    // A table still positive at its last sample says nothing about (r_M, 1).
    const auto& d = tabulated_->density;
    if (d.back() > 0.0) return PrwVerdict::Unknown;
  }
  return PrwVerdict::Converges;
}

Measure operator+(const Measure& a, const Measure& b) {
  std::vector<Atom> atoms = a.atoms();
  for (const Atom& x : b.atoms()) {
    auto it = std::find_if(atoms.begin(), atoms.end(),
                           [&](const Atom& y) { return y.at == x.at; });
    if (it != atoms.end())
      it->mass += x.mass;
    else
      atoms.push_back(x);
  }
  std::vector<JacobiPart> jac = a.jacobi_parts();
  jac.insert(jac.end(), b.jacobi_parts().begin(), b.jacobi_parts().end());
  if (a.tabulated() && b.tabulated())
    throw std::invalid_argument("measure: cannot merge two tabulated parts");
  auto tab = a.tabulated() ? a.tabulated() : b.tabulated();
  return Measure(std::move(atoms), std::move(jac), std::move(tab), a.rule());
}

Measure Measure::from_json(const nlohmann::json& j) {
  std::vector<Atom> atoms;
  std::vector<JacobiPart> jac;
  std::optional<TabulatedDensity> tab;
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms"))
      atoms.push_back({a.at("at").get<double>(), a.at("mass").get<double>()});
  if (j.contains("jacobi"))
    for (const auto& p : j.at("jacobi"))
      jac.push_back({p.at("c").get<double>(), p.at("gamma").get<double>(),
                     p.at("beta").get<double>()});
  if (j.contains("tabulated")) {
    TabulatedDensity t;
    t.r = j.at("tabulated").at("r").get<std::vector<double>>();
    t.density = j.at("tabulated").at("density").get<std::vector<double>>();
    tab = std::move(t);
  }
  if (atoms.empty() && jac.empty() && !tab)
    throw std::invalid_argument("measure: at least one part required");
  return Measure(std::move(atoms), std::move(jac), std::move(tab));
}

nlohmann::json Measure::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  if (!atoms_.empty()) {
    auto arr = nlohmann::json::array();
    for (const Atom& a : atoms_) arr.push_back({{"at", a.at}, {"mass", a.mass}});
    j["atoms"] = std::move(arr);
  }
  if (!jacobi_.empty()) {
    auto arr = nlohmann::json::array();
    for (const JacobiPart& p : jacobi_)
      arr.push_back({{"c", p.c}, {"gamma", p.gamma}, {"beta", p.beta}});
    j["jacobi"] = std::move(arr);
  }
  if (tabulated_)
    j["tabulated"] = {{"r", tabulated_->r}, {"density", tabulated_->density}};
  return j;
}

}  // namespace shimorin
