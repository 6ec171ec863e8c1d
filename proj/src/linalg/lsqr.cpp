#include <cmath>

#include "rfm/error.hpp"
#include "rfm/linalg.hpp"

namespace rfm::linalg {

namespace {

void scale(std::vector<double>& v, double a) {
  for (double& x : v) x *= a;
}

}  // namespace

LsqrResult lsqr(const LinearOperator& a, std::span<const double> b, double eta, std::size_t max_iter) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::DimensionMismatch, "lsqr right-hand side");
  if (!(eta > 0.0)) throw Error(ErrorCode::DimensionMismatch, "lsqr tolerance must be positive");
  if (max_iter == 0) max_iter = 2 * n;
  const double atol = eta;
  const double btol = eta;

  LsqrResult res;
  res.solution.assign(n, 0.0);
  std::vector<double>& x = res.solution;

  std::vector<double> u(b.begin(), b.end());
  double beta = norm2(u);
  const double bnorm = beta;
  if (beta == 0.0) return res;
  scale(u, 1.0 / beta);

  std::vector<double> v(n);
  a.apply_transpose(u, v);
  double alpha = norm2(v);
  res.residual_norm = bnorm;
  res.final_relative_residual = 1.0;
  if (alpha == 0.0) return res;  // b is orthogonal to range(A)
  scale(v, 1.0 / alpha);

  std::vector<double> w = v;
  std::vector<double> tmp_m(m);
  std::vector<double> tmp_n(n);
  double phibar = beta;
  double rhobar = alpha;
  double anorm2 = 0.0;
  double rnorm = beta;

  res.termination = LsqrTermination::max_iterations;
  for (std::size_t itn = 1; itn <= max_iter; ++itn) {
    // Bidiagonalization step.
    a.apply(v, tmp_m);
    for (std::size_t i = 0; i < m; ++i) u[i] = tmp_m[i] - alpha * u[i];
    beta = norm2(u);
    if (beta > 0.0) {
      scale(u, 1.0 / beta);
      anorm2 += alpha * alpha + beta * beta;
      a.apply_transpose(u, tmp_n);
      for (std::size_t j = 0; j < n; ++j) v[j] = tmp_n[j] - beta * v[j];
      alpha = norm2(v);
      if (alpha > 0.0) scale(v, 1.0 / alpha);
    } else {
      anorm2 += alpha * alpha;
    }

    // Plane rotation eliminating the subdiagonal.
    const double rho = std::hypot(rhobar, beta);
    const double cs = rhobar / rho;
    const double sn = beta / rho;
    const double theta = sn * alpha;
    rhobar = -cs * alpha;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const double t1 = phi / rho;
    const double t2 = -theta / rho;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] += t1 * w[j];
      w[j] = v[j] + t2 * w[j];
    }

    rnorm = phibar;
    const double arnorm = alpha * std::abs(sn * phi);
    const double anorm = std::sqrt(anorm2);
    const double xnorm = norm2(x);
    res.iterations = itn;

    const double test1 = rnorm / bnorm;
    const double test2 = (anorm * rnorm) > 0.0 ? arnorm / (anorm * rnorm) : 0.0;
    const double rtol = btol + atol * anorm * xnorm / bnorm;
    if (test1 <= rtol || test2 <= atol) {
      res.termination = LsqrTermination::tolerance_met;
      break;
    }
  }
  res.residual_norm = rnorm;
  res.final_relative_residual = rnorm / bnorm;
  return res;
}

}  // namespace rfm::linalg
