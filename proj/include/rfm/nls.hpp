#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rfm/linalg.hpp"

namespace rfm::nls {

enum class Scaling { none, row_scale_c100 };

/// Residual/Jacobian pair for F: R^n -> R^m.
struct NlsSystem {
  std::size_t n_unknowns = 0;
  std::size_t m_residuals = 0;
  std::function<void(std::span<const double> u, std::span<double> f)> residual_eval;
  /// Must resize `j` to m x n and fill it.
  std::function<void(std::span<const double> u, linalg::DenseMatrix& j)> jacobian_eval;
  Scaling scaling = Scaling::none;
};

struct LineSearchConfig {
  double lo = 0.0;
  double hi = 2.0;
  double alpha_tol = 1e-3;
  int max_evals = 40;
};

struct SolverConfig {
  double gamma = 3.0;
  double eta = 1e-6;
  double epsilon = 1e-10;
  int max_outer = 20;
  int m_max = 3;
  double tau_rel = 1e-3;
  LineSearchConfig line_search;
  std::uint64_t seed = 0;
  /// 0 selects 2n.
  std::size_t lsqr_max_iter = 0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

enum class Termination { stagnation, max_outer, line_search_failure, gradient_tolerance };
const char* termination_name(Termination t);

struct SolverReport {
  int outer_iterations = 0;
  int jacobian_evaluations = 0;
  std::vector<double> residual_history;
  std::vector<std::vector<std::size_t>> inner_lsqr_counts;
  std::vector<double> precondition_seconds;
  double total_seconds = 0.0;
  std::vector<double> final_u;
  Termination termination = Termination::max_outer;
  int sketch_retries = 0;
  int residual_evaluations = 0;
};

struct GoldenResult {
  double alpha;
  double phi;
  int evaluations;
};

/// Golden-section minimization on [lo, hi]; returns the best evaluated point.
GoldenResult golden_section(const std::function<double(double)>& phi, double lo, double hi,
                            double alpha_tol, int max_evals);

SolverReport ipn_solve(const NlsSystem& system, std::span<const double> u0, const SolverConfig& config);
SolverReport amipn_solve(const NlsSystem& system, std::span<const double> u0, const SolverConfig& config);

/// Levenberg-Marquardt with lambda_k = ||F_k||. `damping_override` >= 0 replaces lambda_k.
SolverReport lm_solve(const NlsSystem& system, std::span<const double> u0, int max_iter, double grad_tol,
                      double damping_override = -1.0);

/// Full Gauss-Newton steps from a dense least-squares solve.
SolverReport gauss_newton_solve(const NlsSystem& system, std::span<const double> u0, int max_iter,
                                double grad_tol);

/// Worst relative column error of the Jacobian against central differences of
/// the residual, over `samples` random columns, step 1e-6 * (1 + |u_j|).
double jacobian_fd_check(const NlsSystem& system, std::span<const double> u, int samples, std::uint64_t seed);

}  // namespace rfm::nls
