#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rfm/discretize.hpp"
#include "rfm/nls.hpp"
#include "rfm/problem.hpp"

namespace rfm::bench {

enum class SolverKind { ipn, amipn, lm, gauss_newton };
const char* solver_name(SolverKind s);
/// Throws ConfigError for unknown names.
SolverKind parse_solver(const std::string& name);

struct ExperimentConfig {
  std::string problem = "cubic_elliptic_3d";
  ProblemParams params;
  std::array<int, 3> n{2, 2, 2};
  std::array<int, 3> q{10, 10, 10};
  std::size_t j = 100;
  SolverKind solver = SolverKind::amipn;
  nls::SolverConfig solver_params;
  nls::Scaling scaling = nls::Scaling::row_scale_c100;
  double feature_range = 0.0;  // 0 keeps the problem default
  disc::Pou pou = disc::Pou::a;
  std::uint64_t seed = 0;
  std::array<int, 3> eval_grid{50, 50, 50};
  std::string output;

  /// Throws ConfigError on invalid values.
  void validate() const;
  disc::DiscretizationConfig discretization() const;
};

/// Key/value view of one experiment. Keys mirror the ExperimentConfig fields:
/// problem, N, Q, J, solver, seed, feature_range, pou, eval_grid, out, scaling,
/// gamma, eta, epsilon, max_outer, m_max, tau_rel, lsqr_max_iter, alpha_tol,
/// ls_max_evals, and param.<name> for problem parameters.
using KeyValues = std::map<std::string, std::string>;

/// Applies key/value pairs on top of `base`. Throws ConfigError for unknown keys
/// or unparsable values.
ExperimentConfig apply_keys(ExperimentConfig base, const KeyValues& kv);

/// INI-style text: top-level keys are shared defaults, every section whose name
/// starts with "experiment" is one experiment in file order. A file without
/// experiment sections describes a single experiment.
std::vector<KeyValues> parse_config_text(const std::string& text);
std::vector<KeyValues> read_config_file(const std::string& path);

struct ErrorReport {
  std::string problem;
  SolverKind solver = SolverKind::amipn;
  ExperimentConfig config;
  std::vector<double> relative_l2;  // per component, NaN without an exact solution
  std::vector<double> relative_h1;
  double residual_norm = 0.0;       // unscaled ||F(u)||_2 at the final iterate
  int iterations = 0;
  int jacobian_evaluations = 0;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
  double precondition_seconds = 0.0;
  std::size_t lsqr_iterations = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t interior_rows = 0, continuity_rows = 0, boundary_rows = 0;
  std::size_t eval_points = 0;
  std::vector<double> residual_history;
  std::string termination;
  std::string status = "ok";
  std::optional<double> speedup;  // set on the second row of a compared pair

  bool ok() const { return status == "ok"; }
};

/// sqrt(sum (a - b)^2) / sqrt(sum b^2). Throws ZeroReference when b vanishes.
double relative_l2_error(std::span<const double> numerical, std::span<const double> exact);
/// Entries are grouped per point as [value, partial_0, ...]; `stride` entries per point.
double relative_h1_error(std::span<const double> numerical, std::span<const double> exact, std::size_t stride);

/// Evaluation points of a uniform grid (endpoints included) classified interior.
std::vector<geo::Point> evaluation_points(const PdeProblem& problem, const std::array<int, 3>& grid);

/// Assemble, solve from u0 = 0 and measure errors. Failures are captured in `status`.
ErrorReport run_experiment(const ExperimentConfig& config);

/// Runs configs in order. With `compare` set, every config runs once per listed solver
/// and the last row of each group carries solve_s(first) / solve_s(last).
std::vector<ErrorReport> run_sweep(const std::vector<ExperimentConfig>& configs,
                                   const std::vector<SolverKind>& compare = {});

/// Header `problem,solver,Nx,...,status`, with error columns for `components` components
/// and a trailing speedup column when `with_speedup`.
std::string csv_header(int components, bool with_speedup);
std::string csv_row(const ErrorReport& r, int components, bool with_speedup);
void write_csv(std::ostream& out, const std::vector<ErrorReport>& rows);
void write_csv_file(const std::string& path, const std::vector<ErrorReport>& rows);
/// (J, error) series per problem and solver, for external plotting.
void write_plot_data(const std::string& path, const std::vector<ErrorReport>& rows);

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Fast property suites shared by `rfm selftest` and the acceptance binary.
std::vector<CheckResult> run_property_checks();

}  // namespace rfm::bench
