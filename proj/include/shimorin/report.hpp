#ifndef SHIMORIN_REPORT_HPP
#define SHIMORIN_REPORT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "shimorin/charfit.hpp"
#include "shimorin/measure.hpp"
#include "shimorin/weight.hpp"

namespace shimorin {

/**
 * One batch run: a measure and/or a weight, a task list, and the numeric
 * knobs shared by the tasks.  Tasks:
 *
 *   classify        PRW divergence -> Bergman-kernel verdict
 *   coefficients    kernel coefficients c_0..c_{max_n} -> CSV
 *   kernel-eval     series vs integral kernel values at eval_points -> CSV
 *   weight-moments  omega_0..omega_{max_n} of the weight -> CSV
 *   dhat            moment-ratio and tail doubling checks on the weight
 *   fit-h           log-convex Laplace-moment feasibility solve
 *   certify         independent certificate for a profile (config "h" or
 *                   the profile fitted earlier in the same run)
 *   round-trip      classify -> omega moments -> kernel match -> fit -> certify
 */
struct RunConfig {
  std::optional<Measure> measure;
  std::optional<RadialWeightProfile> weight;
  std::optional<HProfile> h;
  std::vector<std::string> tasks;
  long max_n = 24;
  double tol = 1e-8;
  int grid_points = 48;
  std::vector<double> eval_points;  // kernel-eval x values; empty -> {0.25}
  bool emit_timings = false;        // include timings in report.json

  static RunConfig from_json(const nlohmann::json& j);
};

struct RunReport {
  std::string schema_version = "1.0";
  nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
  std::vector<std::pair<std::string, double>> timings_ms;
  bool ok = true;  // false iff some task raised a process error

  /// Report document; timings are attached only on request so that the
  /// default serialization is byte-identical across runs.
  nlohmann::ordered_json to_json(bool include_timings) const;
};

/// Executes the tasks in declared order, writes CSV tables, the fitted
/// profile (if any), and report.json into out_dir, and returns the report.
/// Mathematical failures (mismatch, infeasibility, failed checks) are data
/// in the report; only exceptions inside a task clear RunReport::ok.
RunReport run(const RunConfig& config, const std::string& out_dir);

}  // namespace shimorin

#endif
