// rfm: benchmark driver.
//   rfm bench --config run.ini [--override key=val]...
//   rfm sweep --config sweep.ini --compare ipn,amipn
//   rfm list-problems
//   rfm selftest
// Exit codes: 0 success, 1 a row or check failed, 2 configuration error.

#include <CLI11.hpp>
#include <boost/algorithm/string.hpp>
#include <iostream>

#include "rfm/bench.hpp"
#include "rfm/error.hpp"

namespace {

using namespace rfm;
using namespace rfm::bench;

constexpr int kConfigExit = 2;

struct RunOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string problem, solver, out, plot;
  std::optional<long long> j, seed;
  std::string compare;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "INI experiment file")->check(CLI::ExistingFile);
  cmd->add_option("--override", o.overrides, "key=value applied to every experiment")->take_all();
  cmd->add_option("--problem", o.problem, "catalog problem name");
  cmd->add_option("--J", o.j, "features per subdomain");
  cmd->add_option("--solver", o.solver, "ipn, amipn, lm or gauss_newton");
  cmd->add_option("--seed", o.seed, "feature and sketch seed");
  cmd->add_option("--out", o.out, "results CSV path (stdout when absent)");
  cmd->add_option("--emit-plot-data", o.plot, "write (J, error) series CSV");
}

std::vector<ExperimentConfig> build_configs(const RunOptions& o) {
  std::vector<KeyValues> files = o.config.empty() ? std::vector<KeyValues>{{}} : read_config_file(o.config);
  KeyValues extra;
  for (const auto& ov : o.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorCode::ConfigError, "override '" + ov + "' is not key=value");
    extra[boost::trim_copy(ov.substr(0, eq))] = ov.substr(eq + 1);
  }
  if (!o.problem.empty()) extra["problem"] = o.problem;
  if (o.j) extra["J"] = std::to_string(*o.j);
  if (!o.solver.empty()) extra["solver"] = o.solver;
  if (o.seed) extra["seed"] = std::to_string(*o.seed);
  std::vector<ExperimentConfig> out;
  for (const auto& kv : files) {
    auto c = apply_keys(apply_keys(ExperimentConfig{}, kv), extra);
    c.validate();
    out.push_back(std::move(c));
  }
  return out;
}

int run(const RunOptions& o, bool compare_mode) {
  std::vector<ExperimentConfig> configs;
  std::vector<SolverKind> compare;
  try {
    configs = build_configs(o);
    if (compare_mode) {
      std::vector<std::string> names;
      boost::split(names, o.compare, boost::is_any_of(","));
      for (const auto& n : names) compare.push_back(parse_solver(n));
      if (compare.size() < 2) throw Error(ErrorCode::ConfigError, "--compare needs at least two solvers");
    }
  } catch (const Error& e) {
    std::cerr << "rfm: " << e.what() << '\n';
    return kConfigExit;
  }

  const auto rows = run_sweep(configs, compare);
  std::string path = o.out;
  if (path.empty() && !configs.empty()) path = configs.front().output;
  try {
    if (path.empty()) write_csv(std::cout, rows);
    else write_csv_file(path, rows);
    if (!o.plot.empty()) write_plot_data(o.plot, rows);
  } catch (const Error& e) {
    std::cerr << "rfm: " << e.what() << '\n';
    return 1;
  }
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.ok();
  return ok ? 0 : 1;
}

int list() {
  for (const auto& name : list_problems()) {
    const auto pb = make_problem(name);
    std::cout << name << "  (" << pb.dim << "D, " << pb.components << " component" << (pb.components > 1 ? "s" : "")
              << (pb.has_exact() ? ", exact" : "") << ")  " << pb.description << '\n';
  }
  return 0;
}

int selftest() {
  bool ok = true;
  for (const auto& c : run_property_checks()) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << c.detail << '\n';
    ok = ok && c.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random feature PDE benchmarks with sketch-preconditioned Newton solvers"};
  app.require_subcommand(1);
  RunOptions bench_opts, sweep_opts;
  auto* bench_cmd = app.add_subcommand("bench", "run the experiments of a config file");
  add_run_options(bench_cmd, bench_opts);
  auto* sweep_cmd = app.add_subcommand("sweep", "run every experiment once per compared solver");
  add_run_options(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--compare", sweep_opts.compare, "comma-separated solvers, e.g. ipn,amipn")->required();
  auto* list_cmd = app.add_subcommand("list-problems", "print the problem catalog");
  auto* self_cmd = app.add_subcommand("selftest", "run the property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigExit;
  }

  try {
    if (bench_cmd->parsed()) return run(bench_opts, false);
    if (sweep_cmd->parsed()) return run(sweep_opts, true);
    if (list_cmd->parsed()) return list();
    if (self_cmd->parsed()) return selftest();
  } catch (const std::exception& e) {
    std::cerr << "rfm: " << e.what() << '\n';
    return 1;
  }
  return kConfigExit;
}
