// Timing harness for the serial reference paths vs the OpenMP paths.
// Every workload is run both ways and the results are compared bitwise:
// the parallel code writes each index into its own slot and reduces in a
// fixed order, so any difference at all is a bug, not noise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "shimorin/bernstein.hpp"
#include "shimorin/kernel.hpp"
#include "shimorin/measure.hpp"
#include "shimorin/moments.hpp"
#include "shimorin/parallel.hpp"

using namespace shimorin;

namespace {

double time_ms(const std::function<void()>& fn) {
  fn();  // warm caches and quadrature tables
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i] && !(std::isnan(a[i]) && std::isnan(b[i]))) return false;
  return true;
}

struct Row {
  const char* name;
  double serial_ms, openmp_ms;
  bool match;
};

}  // namespace

int main() {
  std::printf("openmp compiled: %s, max threads: %d\n\n",
              par::compiled_with_openmp() ? "yes" : "no", par::max_threads());

  std::vector<Row> rows;
  auto run_both = [&](const char* name,
                      const std::function<std::vector<double>()>& work) {
    par::set_enabled(false);
    std::vector<double> serial_out;
    const double s_ms = time_ms([&] { serial_out = work(); });
    par::set_enabled(true);
    std::vector<double> par_out;
    const double p_ms = time_ms([&] { par_out = work(); });
    rows.push_back({name, s_ms, p_ms, bitwise_equal(serial_out, par_out)});
  };

  const Measure mixed = Measure::lebesgue() + Measure::jacobi(1.0, 0.5, 0.25);
  run_both("moment batch (N=50000)", [&] { return mixed.moments(50000); });

  const Measure jac = Measure::jacobi(1.0, 1.0, 0.0) + Measure::dirac(1.0, 0.5);
  run_both("omega moments (N=256)",
           [&] { return omega_moments_from_nu(jac, 256).moments.values; });

  // Kernel panel: one long coefficient list, many evaluation points.
  BernsteinFunction f(Measure::lebesgue());
  const KernelSeries ks(f.kernel_coefficients(4000), 1.0);
  const std::size_t npts = 100000;
  run_both("series panel (100k points)", [&] {
    return par::map_indexed<double>(npts, [&](std::size_t i) {
      const double x = 0.9 * static_cast<double>(i) / (npts - 1);
      const double s = std::sqrt(x);
      return eval_series(ks, DiskPoint{s, s}, 1e-6).value.real();
    });
  });

  std::printf("%-28s %12s %12s %9s %s\n", "workload", "serial ms", "openmp ms",
              "speedup", "bitwise");
  bool all_match = true;
  for (const Row& r : rows) {
    std::printf("%-28s %12.2f %12.2f %8.2fx %s\n", r.name, r.serial_ms,
                r.openmp_ms, r.serial_ms / r.openmp_ms, r.match ? "match" : "MISMATCH");
    all_match = all_match && r.match;
  }
  return all_match ? 0 : 1;
}
