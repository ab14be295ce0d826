#include "shimorin/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "shimorin/bernstein.hpp"
#include "shimorin/kernel.hpp"
#include "shimorin/moments.hpp"

namespace shimorin {

namespace {

constexpr std::size_t kRoundTripN = 100;
constexpr double kRoundTripTol = 1e-9;
constexpr double kDhatCeiling = 2.0;
constexpr std::size_t kDhatGridPoints = 100;
constexpr std::size_t kSeriesTermsCap = 2'000'000;

const std::set<std::string> kKnownTasks = {
    "classify", "coefficients", "kernel-eval", "weight-moments",
    "dhat",     "fit-h",        "certify",     "round-trip"};
const std::set<std::string> kMeasureTasks = {
    "classify", "coefficients", "kernel-eval", "fit-h", "certify", "round-trip"};
const std::set<std::string> kWeightTasks = {"weight-moments", "dhat"};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  out << content;
}

void write_csv(const std::filesystem::path& p, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::string body = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) body += ',';
      body += fmt17(row[i]);
    }
    body += '\n';
  }
  write_file(p, body);
}

std::size_t series_terms_needed(double mass, double y, double tol) {
  std::size_t N = 0;
  while (series_tail_bound(mass, y, N) > tol && N < kSeriesTermsCap)
    N = N < 16 ? N + 1 : N + N / 8;
  return N;
}

std::vector<double> fit_grid(int grid_points) {
  return default_t_grid(static_cast<std::size_t>(grid_points));
}

struct TaskContext {
  const RunConfig& cfg;
  std::filesystem::path out;
  std::optional<HProfile> fitted;  // from a fit-h task earlier in this run
};

nlohmann::ordered_json task_classify(TaskContext& ctx) {
  const PrwVerdict v = ctx.cfg.measure->prw_classify();
  nlohmann::ordered_json e{{"task", "classify"}, {"prw", to_string(v)}};
  if (v == PrwVerdict::Unknown)
    e["bergman_kernel"] = nullptr;
  else
    e["bergman_kernel"] = (v == PrwVerdict::Diverges);
  return e;
}

nlohmann::ordered_json task_coefficients(TaskContext& ctx) {
  const std::size_t N = static_cast<std::size_t>(ctx.cfg.max_n);
  BernsteinFunction f(*ctx.cfg.measure);
  const std::vector<double> c = f.kernel_coefficients(N);
  std::vector<std::vector<double>> rows;
  rows.reserve(c.size());
  for (std::size_t n = 0; n < c.size(); ++n)
    rows.push_back({static_cast<double>(n), c[n]});
  write_csv(ctx.out / "coefficients.csv", "n,c_n", rows);
  return {{"task", "coefficients"},
          {"max_n", ctx.cfg.max_n},
          {"csv", "coefficients.csv"}};
}

nlohmann::ordered_json task_kernel_eval(TaskContext& ctx) {
  const Measure& nu = *ctx.cfg.measure;
  std::vector<double> pts = ctx.cfg.eval_points;
  if (pts.empty()) pts.push_back(0.25);
  const double nu0 = nu.total_mass();
  BernsteinFunction f(nu);
  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  for (double x : pts) {
    if (!(std::abs(x) < 1.0))
      throw std::invalid_argument("kernel-eval: |x| must be < 1 (got " + fmt17(x) + ")");
    const std::size_t N = series_terms_needed(nu0, std::abs(x), ctx.cfg.tol);
    const KernelSeries ks(f.kernel_coefficients(N), nu0);
    const double s = std::sqrt(std::abs(x));
    const DiskPoint p{x < 0.0 ? -s : s, s};
    const SeriesEval se = eval_series(ks, p, ctx.cfg.tol);
    const std::complex<double> iv = eval_integral(nu, p);
    const double diff = std::abs(se.value - iv);
    worst = std::max(worst, diff);
    rows.push_back({x, se.value.real(), iv.real(), diff, se.tail_bound,
                    static_cast<double>(N + 1)});
  }
  write_csv(ctx.out / "kernel_eval.csv",
            "x,series,integral,abs_diff,tail_bound,terms", rows);
  return {{"task", "kernel-eval"},
          {"points", pts.size()},
          {"max_abs_diff", worst},
          {"csv", "kernel_eval.csv"}};
}

nlohmann::ordered_json task_weight_moments(TaskContext& ctx) {
  const RadialWeightProfile& w = *ctx.cfg.weight;
  const long N = ctx.cfg.max_n;
  std::vector<std::vector<double>> rows;
  for (long n = 0; n <= N; ++n)
    rows.push_back({static_cast<double>(n), weight_moment(w, n)});
  write_csv(ctx.out / "weight_moments.csv", "n,omega_n", rows);
  return {{"task", "weight-moments"},
          {"max_n", N},
          {"omega_0", rows.front()[1]},
          {"csv", "weight_moments.csv"}};
}

nlohmann::ordered_json task_dhat(TaskContext& ctx) {
  const RadialWeightProfile& w = *ctx.cfg.weight;
  const std::size_t K = static_cast<std::size_t>(std::max(ctx.cfg.max_n, 1L));
  MomentSequence seq;
  seq.tag = MomentTag::Omega;
  for (std::size_t n = 0; n <= 2 * K; ++n)
    seq.values.push_back(weight_moment(w, static_cast<long>(n)));
  const DhatReport moment_rep = dhat_moment_check(seq, kDhatCeiling);
  // i/100 keeps the last radius bit-exact on the 0.99 cap of the tail check
  std::vector<double> grid(kDhatGridPoints);
  for (std::size_t i = 0; i < kDhatGridPoints; ++i)
    grid[i] = static_cast<double>(i) / static_cast<double>(kDhatGridPoints);
  const DhatReport tail_rep = dhat_tail_check(w, grid, kDhatCeiling);
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 1; n <= K; ++n)
    rows.push_back({static_cast<double>(n), seq.values[n] / seq.values[2 * n]});
  write_csv(ctx.out / "dhat.csv", "n,moment_ratio", rows);
  auto rep_json = [](const DhatReport& r) {
    return nlohmann::ordered_json{{"C", r.constant},
                                  {"arg_max", r.arg_max},
                                  {"pass", r.pass}};
  };
  return {{"task", "dhat"},
          {"ceiling", kDhatCeiling},
          {"moment_form", rep_json(moment_rep)},
          {"tail_form", rep_json(tail_rep)},
          {"csv", "dhat.csv"}};
}

void write_fit_outputs(TaskContext& ctx, const FitResult& res, const Measure& nu,
                       std::size_t N, const std::string& csv_name,
                       const std::string& profile_name) {
  if (!res.profile) return;
  BernsteinFunction f(nu);
  const std::vector<double> c = f.kernel_coefficients(N);
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 0; n <= N; ++n) {
    const double Ln = laplace_moment(*res.profile, static_cast<long>(n)).value;
    rows.push_back({static_cast<double>(n), 1.0 / c[n], Ln, std::abs(c[n] * Ln - 1.0)});
  }
  write_csv(ctx.out / csv_name, "n,target,achieved,relative_residual", rows);
  write_file(ctx.out / profile_name, res.profile->to_json().dump(2) + "\n");
}

nlohmann::ordered_json fit_summary(const char* task_name, const FitResult& res) {
  nlohmann::ordered_json e{{"task", task_name},
                           {"verdict", to_string(res.verdict)}};
  if (!res.residuals.empty())
    e["max_residual"] =
        *std::max_element(res.residuals.begin(), res.residuals.end());
  e["iterations"] = res.iterations;
  if (res.profile) {
    e["convexity_margin"] = res.convexity_margin;
    e["growth_bounded"] = res.growth.bounded;
  }
  if (!res.warning.empty()) e["warning"] = res.warning;
  return e;
}

nlohmann::ordered_json task_fit_h(TaskContext& ctx) {
  FitProblem prob(*ctx.cfg.measure);
  prob.N = static_cast<std::size_t>(std::max(ctx.cfg.max_n, 2L));
  prob.t_grid = fit_grid(ctx.cfg.grid_points);
  prob.eps_feas = ctx.cfg.tol;
  const FitResult res = fit_h(prob);
  nlohmann::ordered_json e = fit_summary("fit-h", res);
  if (res.profile) {
    write_fit_outputs(ctx, res, *ctx.cfg.measure, prob.N, "fit_residuals.csv",
                      "h_profile.json");
    e["csv"] = "fit_residuals.csv";
    e["profile"] = "h_profile.json";
    ctx.fitted = res.profile;
  }
  return e;
}

nlohmann::ordered_json task_certify(TaskContext& ctx) {
  const HProfile* hp = nullptr;
  if (ctx.cfg.h)
    hp = &*ctx.cfg.h;
  else if (ctx.fitted)
    hp = &*ctx.fitted;
  else
    throw std::invalid_argument(
        "certify task needs an h profile: config key \"h\" or a preceding fit-h task");
  const std::size_t N = static_cast<std::size_t>(ctx.cfg.max_n);
  const Certificate cert = certify(*ctx.cfg.measure, *hp, N, ctx.cfg.tol);
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 0; n < cert.residuals.size(); ++n)
    rows.push_back({static_cast<double>(n), cert.residuals[n]});
  write_csv(ctx.out / "certify_residuals.csv", "n,residual", rows);
  return {{"task", "certify"},
          {"certified", cert.certified},
          {"max_residual",
           *std::max_element(cert.residuals.begin(), cert.residuals.end())},
          {"mass_identity", cert.mass_identity},
          {"convexity_margin", cert.convexity_margin},
          {"growth_bounded", cert.growth.bounded},
          {"csv", "certify_residuals.csv"}};
}

nlohmann::ordered_json task_round_trip(TaskContext& ctx) {
  const Measure& nu = *ctx.cfg.measure;
  const PrwVerdict v = nu.prw_classify();
  nlohmann::ordered_json e{{"task", "round-trip"}, {"prw", to_string(v)}};
  if (v == PrwVerdict::Converges) {
    e["match"] = false;
    e["certified"] = false;
    e["note"] = "kernel is not of Bergman type; chain stops at classification";
    return e;
  }
  const OmegaMoments om = omega_moments_from_nu(nu, 2 * kRoundTripN + 1);
  if (!om.warning.empty()) e["warning"] = om.warning;
  const MatchReport mr = kernel_match(nu, om.moments, kRoundTripN, kRoundTripTol);
  e["match"] = mr.match;
  e["max_deviation"] = mr.max_deviation;

  FitProblem prob(nu);
  prob.N = static_cast<std::size_t>(std::max(ctx.cfg.max_n, 2L));
  prob.t_grid = fit_grid(ctx.cfg.grid_points);
  prob.eps_feas = ctx.cfg.tol;
  const FitResult res = fit_h(prob);
  e["fit_verdict"] = to_string(res.verdict);
  if (res.profile) {
    write_fit_outputs(ctx, res, nu, prob.N, "roundtrip_residuals.csv",
                      "roundtrip_h_profile.json");
    const Certificate cert = certify(nu, *res.profile, prob.N, ctx.cfg.tol);
    e["certified"] = cert.certified;
    e["max_residual"] =
        *std::max_element(cert.residuals.begin(), cert.residuals.end());
    e["mass_identity"] = cert.mass_identity;
    e["csv"] = "roundtrip_residuals.csv";
    e["profile"] = "roundtrip_h_profile.json";
  } else {
    e["certified"] = false;
  }
  return e;
}

void validate(const RunConfig& cfg) {
  if (cfg.tasks.empty()) throw std::invalid_argument("config: task list is empty");
  std::set<std::string> seen;
  for (const std::string& t : cfg.tasks) {
    if (!kKnownTasks.count(t))
      throw std::invalid_argument("config: unknown task '" + t + "'");
    if (!seen.insert(t).second)
      throw std::invalid_argument("config: task '" + t + "' appears twice");
    if (kMeasureTasks.count(t) && !cfg.measure)
      throw std::invalid_argument("config: task '" + t + "' needs a measure");
    if (kWeightTasks.count(t) && !cfg.weight)
      throw std::invalid_argument("config: task '" + t + "' needs a weight");
  }
  if (cfg.max_n < 0) throw std::invalid_argument("config: max_n must be >= 0");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  if (cfg.grid_points < 4)
    throw std::invalid_argument("config: grid_points must be >= 4");
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    if (j.contains("measure")) cfg.measure = Measure::from_json(j.at("measure"));
    if (j.contains("weight"))
      cfg.weight = RadialWeightProfile::from_json(j.at("weight"));
    if (j.contains("h")) cfg.h = HProfile::from_json(j.at("h"));
    cfg.tasks = j.at("tasks").get<std::vector<std::string>>();
    if (j.contains("max_n")) cfg.max_n = j.at("max_n").get<long>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("grid_points")) cfg.grid_points = j.at("grid_points").get<int>();
    if (j.contains("eval_points"))
      cfg.eval_points = j.at("eval_points").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

nlohmann::ordered_json RunReport::to_json(bool include_timings) const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["tasks"] = tasks;
  if (include_timings) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [name, ms] : timings_ms) t[name] = ms;
    j["timings_ms"] = t;
  }
  return j;
}

RunReport run(const RunConfig& config, const std::string& out_dir) {
  validate(config);
  std::filesystem::create_directories(out_dir);
  TaskContext ctx{config, out_dir, std::nullopt};
  RunReport report;
  for (const std::string& name : config.tasks) {
    const auto t0 = std::chrono::steady_clock::now();
    nlohmann::ordered_json entry;
    try {
      if (name == "classify") entry = task_classify(ctx);
      else if (name == "coefficients") entry = task_coefficients(ctx);
      else if (name == "kernel-eval") entry = task_kernel_eval(ctx);
      else if (name == "weight-moments") entry = task_weight_moments(ctx);
      else if (name == "dhat") entry = task_dhat(ctx);
      else if (name == "fit-h") entry = task_fit_h(ctx);
      else if (name == "certify") entry = task_certify(ctx);
      else if (name == "round-trip") entry = task_round_trip(ctx);
    } catch (const std::exception& e) {
      entry = nlohmann::ordered_json{{"task", name}, {"error", e.what()}};
      report.ok = false;
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.timings_ms.emplace_back(
        name, std::chrono::duration<double, std::milli>(t1 - t0).count());
    report.tasks.push_back(entry);
  }
  write_file(std::filesystem::path(out_dir) / "report.json",
             report.to_json(config.emit_timings).dump(2) + "\n");
  return report;
}

}  // namespace shimorin
