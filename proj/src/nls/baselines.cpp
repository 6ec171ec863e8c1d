#include <Eigen/Dense>
#include <chrono>
#include <cmath>

#include "rfm/error.hpp"
#include "rfm/nls.hpp"

namespace rfm::nls {

namespace {

using Clock = std::chrono::steady_clock;
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Linearization {
  linalg::DenseMatrix j;
  std::vector<double> f;
  double fnorm = 0.0;
};

void linearize(const NlsSystem& sys, const std::vector<double>& u, Linearization& lin, SolverReport& rep) {
  lin.f.resize(sys.m_residuals);
  sys.residual_eval(u, lin.f);
  ++rep.residual_evaluations;
  sys.jacobian_eval(u, lin.j);
  ++rep.jacobian_evaluations;
  if (sys.scaling == Scaling::row_scale_c100) linalg::row_scale(lin.j, lin.f, 100.0);
  lin.fnorm = linalg::norm2(lin.f);
}

template <class StepFn>
SolverReport run(const NlsSystem& sys, std::span<const double> u0, int max_iter, double grad_tol, StepFn step) {
  if (u0.size() != sys.n_unknowns) throw Error(ErrorCode::DimensionMismatch, "initial guess length");
  const auto t0 = Clock::now();
  SolverReport rep;
  std::vector<double> u(u0.begin(), u0.end());
  Linearization lin;
  for (int k = 0; k <= max_iter; ++k) {
    linearize(sys, u, lin, rep);
    rep.residual_history.push_back(lin.fnorm);
    Eigen::Map<const RowMajor> j(lin.j.data(), static_cast<Eigen::Index>(lin.j.rows()),
                                 static_cast<Eigen::Index>(lin.j.cols()));
    Eigen::Map<const Eigen::VectorXd> f(lin.f.data(), static_cast<Eigen::Index>(lin.f.size()));
    const Eigen::VectorXd g = j.transpose() * f;
    if (g.norm() < grad_tol) {
      rep.termination = Termination::gradient_tolerance;
      break;
    }
    if (k == max_iter) {
      rep.termination = Termination::max_outer;
      break;
    }
    const Eigen::VectorXd delta = step(j, f, g, lin.fnorm);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += delta(static_cast<Eigen::Index>(i));
    ++rep.outer_iterations;
  }
  // The last linearization counted toward NJ only to test the gradient.
  rep.final_u = std::move(u);
  rep.total_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

}  // namespace

SolverReport lm_solve(const NlsSystem& sys, std::span<const double> u0, int max_iter, double grad_tol,
                      double damping_override) {
  return run(sys, u0, max_iter, grad_tol,
             [&](const auto& j, const auto&, const Eigen::VectorXd& g, double fnorm) -> Eigen::VectorXd {
               const double lam = damping_override >= 0.0 ? damping_override : fnorm;
               Eigen::MatrixXd a = Eigen::MatrixXd::Zero(j.cols(), j.cols());
               a.selfadjointView<Eigen::Lower>().rankUpdate(j.transpose());
               a.diagonal().array() += lam;
               Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(a);
               if (llt.info() != Eigen::Success)
                 throw Error(ErrorCode::FactorizationFailure, "damped normal matrix is not positive definite");
               return -llt.solve(g);
             });
}

SolverReport gauss_newton_solve(const NlsSystem& sys, std::span<const double> u0, int max_iter,
                                double grad_tol) {
  return run(sys, u0, max_iter, grad_tol,
             [&](const auto& j, const auto& f, const Eigen::VectorXd&, double) -> Eigen::VectorXd {
               Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(j);
               qr.setThreshold(linalg::kRankTolerance);
               if (qr.rank() < j.cols())
                 throw Error(ErrorCode::RankDeficient, "Gauss-Newton Jacobian is rank deficient");
               return -qr.solve(f);
             });
}

}  // namespace rfm::nls
