#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "shimorin/report.hpp"

namespace {

double parse_eval_point(const std::string& s) {
  std::string v = s;
  if (v.rfind("x=", 0) == 0) v = v.substr(2);
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size())
    throw std::invalid_argument("--eval expects x=<real>, got '" + s + "'");
  return x;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shimorin-type kernels from measures on [0,1]: classification, "
               "moments, and log-convex feasibility"};
  app.require_subcommand(1);

  CLI::App* cmd = app.add_subcommand("run", "execute the tasks listed in a config file");
  std::string config_path, out_dir;
  long max_n = -1;
  double tol = 0.0;
  int grid_points = 0;
  std::vector<std::string> eval_args;
  bool timings = false;
  cmd->add_option("--config", config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", out_dir, "output directory for report.json and tables")
      ->required();
  cmd->add_option("--max-n", max_n, "override the coefficient/moment count");
  cmd->add_option("--tol", tol, "override the tolerance knob");
  cmd->add_option("--grid-points", grid_points, "override the t-grid size");
  cmd->add_option("--eval", eval_args,
                  "kernel evaluation point x=<real>; repeatable, replaces config points");
  cmd->add_flag("--timings", timings, "include per-task timings in report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad arguments are config errors, same as a malformed file
  }

  try {
    std::ifstream in(config_path);
    const nlohmann::json j = nlohmann::json::parse(in);
    shimorin::RunConfig cfg = shimorin::RunConfig::from_json(j);
    if (max_n >= 0) cfg.max_n = max_n;
    if (tol > 0.0) cfg.tol = tol;
    if (grid_points > 0) cfg.grid_points = grid_points;
    if (!eval_args.empty()) {
      cfg.eval_points.clear();
      for (const std::string& s : eval_args) cfg.eval_points.push_back(parse_eval_point(s));
    }
    if (timings) cfg.emit_timings = true;
    const shimorin::RunReport rep = shimorin::run(cfg, out_dir);
    if (!rep.ok) {
      std::cerr << "one or more tasks raised errors; see report.json\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
