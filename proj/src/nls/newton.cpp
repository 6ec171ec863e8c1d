#include <chrono>
#include <cmath>
#include <iostream>

#include "rfm/error.hpp"
#include "rfm/nls.hpp"

namespace rfm::nls {

using linalg::DenseMatrix;

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::stagnation: return "stagnation";
    case Termination::max_outer: return "max_outer";
    case Termination::line_search_failure: return "line_search_failure";
    case Termination::gradient_tolerance: return "gradient_tolerance";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  auto bad = [](const char* what) { throw Error(ErrorCode::ConfigError, what); };
  if (!(gamma > 1.0)) bad("gamma must exceed 1");
  if (!(eta > 0.0)) bad("eta must be positive");
  if (!(epsilon > 0.0)) bad("epsilon must be positive");
  if (max_outer < 1) bad("max_outer must be at least 1");
  if (m_max < 1) bad("m_max must be at least 1");
  if (!(tau_rel >= 0.0)) bad("tau_rel must be non-negative");
  if (!(line_search.lo < line_search.hi)) bad("line search bracket is empty");
  if (!(line_search.alpha_tol > 0.0)) bad("alpha_tol must be positive");
  if (line_search.max_evals < 2) bad("line search needs at least two evaluations");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Retained preconditioned Jacobian J R^{-1}, its factor R and the row scaling.
struct Preconditioner {
  DenseMatrix jt;
  linalg::UpperTriangular r;
  std::vector<double> lambda;  // empty when unscaled
};

void apply_scaling(const std::vector<double>& lambda, std::span<const double> f, std::span<double> out) {
  if (lambda.empty()) {
    std::copy(f.begin(), f.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = lambda[i] * f[i];
}

constexpr std::uint64_t kRetrySalt = 0xA5A5A5A5DEADBEEFULL;

void refresh(const NlsSystem& sys, std::span<const double> u, std::span<const double> f,
             const SolverConfig& cfg, std::uint64_t seed, Preconditioner& pc, SolverReport& rep) {
  sys.jacobian_eval(u, pc.jt);
  ++rep.jacobian_evaluations;
  if (pc.jt.rows() != sys.m_residuals || pc.jt.cols() != sys.n_unknowns)
    throw Error(ErrorCode::DimensionMismatch, "jacobian shape");
  const auto t0 = Clock::now();
  if (sys.scaling == Scaling::row_scale_c100) {
    std::vector<double> fs(f.begin(), f.end());
    auto sc = linalg::row_scale(pc.jt, fs, 100.0);
    if (sc.zero_rows > 0)
      std::clog << "warning: " << sc.zero_rows << " zero Jacobian rows left unscaled\n";
    pc.lambda = std::move(sc.lambda);
  } else {
    pc.lambda.clear();
  }
  const std::size_t m = sys.m_residuals;
  const std::size_t n = sys.n_unknowns;
  try {
    auto plan = linalg::make_sketch_plan(m, n, cfg.gamma, seed);
    pc.r = linalg::thin_qr(linalg::apply_count_sketch(plan, pc.jt));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
    ++rep.sketch_retries;
    auto plan = linalg::make_sketch_plan(m, n, cfg.gamma, seed ^ kRetrySalt);
    pc.r = linalg::thin_qr(linalg::apply_count_sketch(plan, pc.jt));
  }
  linalg::right_precondition_in_place(pc.jt, pc.r);
  rep.precondition_seconds.push_back(seconds_since(t0));
}

enum class StepStatus { accepted, stationary, failed };

struct Step {
  StepStatus status;
  std::size_t lsqr_iterations;
};

/// One preconditioned inexact Newton step from z. On acceptance z, f (unscaled)
/// and fs (scaled) are overwritten with the new iterate.
Step newton_step(const NlsSystem& sys, const Preconditioner& pc, const SolverConfig& cfg,
                 std::vector<double>& z, std::vector<double>& f, std::vector<double>& fs,
                 SolverReport& rep) {
  const std::size_t m = sys.m_residuals;
  const std::size_t n = sys.n_unknowns;
  const double phi0 = linalg::norm2(fs);

  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = -fs[i];
  const auto ls = linalg::lsqr(linalg::DenseOperator(pc.jt), rhs, cfg.eta, cfg.lsqr_max_iter);
  const std::vector<double> d = linalg::solve_upper(pc.r, ls.solution);

  // Merit function with memo of the best trial point.
  std::vector<double> trial(n), ftrial(m), fstrial(m);
  std::vector<double> best_f, best_fs;
  double best_alpha = 0.0;
  double best_phi = phi0;
  auto phi = [&](double alpha) {
    for (std::size_t j = 0; j < n; ++j) trial[j] = z[j] + alpha * d[j];
    sys.residual_eval(trial, ftrial);
    ++rep.residual_evaluations;
    apply_scaling(pc.lambda, ftrial, fstrial);
    const double v = linalg::norm2(fstrial);
    if (std::isfinite(v) && v < best_phi) {
      best_phi = v;
      best_alpha = alpha;
      best_f = ftrial;
      best_fs = fstrial;
    }
    return std::isfinite(v) ? v : INFINITY;
  };

  phi(1.0);  // full Newton step
  const auto& lsc = cfg.line_search;
  golden_section(phi, lsc.lo, lsc.hi, lsc.alpha_tol, lsc.max_evals);
  if (!(best_phi < phi0)) {
    for (double alpha = 0.5; alpha >= 0x1.0p-10; alpha *= 0.5) {
      phi(alpha);
      if (best_phi < phi0) break;
    }
  }
  if (best_phi < phi0) {
    for (std::size_t j = 0; j < n; ++j) z[j] += best_alpha * d[j];
    f = std::move(best_f);
    fs = std::move(best_fs);
    return {StepStatus::accepted, ls.iterations};
  }
  // No reduction: a genuine failure only if the linear model promised one.
  const double predicted_gain = phi0 - ls.residual_norm;
  if (predicted_gain > 1e-6 * phi0 + cfg.epsilon) return {StepStatus::failed, ls.iterations};
  return {StepStatus::stationary, ls.iterations};
}

void check_inputs(const NlsSystem& sys, std::span<const double> u0) {
  if (u0.size() != sys.n_unknowns) throw Error(ErrorCode::DimensionMismatch, "initial guess length");
  if (!sys.residual_eval || !sys.jacobian_eval)
    throw Error(ErrorCode::DimensionMismatch, "system has no evaluators");
}

}  // namespace

SolverReport ipn_solve(const NlsSystem& sys, std::span<const double> u0, const SolverConfig& cfg) {
  cfg.validate();
  check_inputs(sys, u0);
  const auto t_start = Clock::now();
  SolverReport rep;
  std::vector<double> u(u0.begin(), u0.end());
  std::vector<double> f(sys.m_residuals), fs(sys.m_residuals);
  sys.residual_eval(u, f);
  ++rep.residual_evaluations;
  Preconditioner pc;

  for (int k = 0; k < cfg.max_outer; ++k) {
    refresh(sys, u, f, cfg, cfg.seed + static_cast<std::uint64_t>(k), pc, rep);
    apply_scaling(pc.lambda, f, fs);
    const double phi_k = linalg::norm2(fs);
    if (k == 0) rep.residual_history.push_back(phi_k);

    const Step st = newton_step(sys, pc, cfg, u, f, fs, rep);
    ++rep.outer_iterations;
    rep.inner_lsqr_counts.push_back({st.lsqr_iterations});
    const double phi_next = linalg::norm2(fs);
    rep.residual_history.push_back(phi_next);
    if (st.status == StepStatus::failed) {
      rep.termination = Termination::line_search_failure;
      break;
    }
    if (std::abs(phi_next - phi_k) < cfg.epsilon) {
      rep.termination = Termination::stagnation;
      break;
    }
  }
  rep.final_u = std::move(u);
  rep.total_seconds = seconds_since(t_start);
  return rep;
}

SolverReport amipn_solve(const NlsSystem& sys, std::span<const double> u0, const SolverConfig& cfg) {
  cfg.validate();
  check_inputs(sys, u0);
  const auto t_start = Clock::now();
  const std::size_t m = sys.m_residuals;
  SolverReport rep;
  std::vector<double> u(u0.begin(), u0.end());
  std::vector<double> f(m), fs(m);
  sys.residual_eval(u, f);
  ++rep.residual_evaluations;

  Preconditioner pc;
  refresh(sys, u, f, cfg, cfg.seed, pc, rep);
  bool fresh = true;  // preconditioner was built at the current u

  for (int k = 0; k < cfg.max_outer; ++k) {
    apply_scaling(pc.lambda, f, fs);
    const double phi_k0 = linalg::norm2(fs);
    if (k == 0) rep.residual_history.push_back(phi_k0);

    bool flag = true;
    bool failed = false;
    bool stale_failure = false;
    std::vector<std::size_t> counts;
    std::vector<double> prev_fs;
    for (int i = 0; i < cfg.m_max; ++i) {
      prev_fs = fs;
      const Step st = newton_step(sys, pc, cfg, u, f, fs, rep);
      counts.push_back(st.lsqr_iterations);
      if (st.status == StepStatus::failed) {
        if (i == 0 && fresh) {
          failed = true;
        } else {
          stale_failure = (i == 0);
        }
        break;  // flag stays true: refresh before continuing
      }
      double diff2 = 0.0;
      for (std::size_t r = 0; r < m; ++r) diff2 += (fs[r] - prev_fs[r]) * (fs[r] - prev_fs[r]);
      if (std::sqrt(diff2) < cfg.tau_rel * phi_k0) {
        flag = false;
        break;
      }
      if (st.status == StepStatus::stationary) break;
    }
    ++rep.outer_iterations;
    rep.inner_lsqr_counts.push_back(std::move(counts));
    const double phi_next = linalg::norm2(fs);
    rep.residual_history.push_back(phi_next);
    if (failed) {
      rep.termination = Termination::line_search_failure;
      break;
    }
    if (!stale_failure && std::abs(phi_next - phi_k0) < cfg.epsilon) {
      rep.termination = Termination::stagnation;
      break;
    }
    if (k + 1 == cfg.max_outer) break;
    if (flag) {
      refresh(sys, u, f, cfg, cfg.seed + static_cast<std::uint64_t>(k + 1), pc, rep);
      fresh = true;
    } else {
      fresh = false;
    }
  }
  rep.final_u = std::move(u);
  rep.total_seconds = seconds_since(t_start);
  return rep;
}

}  // namespace rfm::nls
