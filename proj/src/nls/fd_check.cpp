#include <algorithm>
#include <cmath>

#include "rfm/error.hpp"
#include "rfm/nls.hpp"
#include "rfm/random.hpp"

namespace rfm::nls {

double jacobian_fd_check(const NlsSystem& sys, std::span<const double> u, int samples, std::uint64_t seed) {
  if (u.size() != sys.n_unknowns) throw Error(ErrorCode::DimensionMismatch, "fd check point");
  const std::size_t m = sys.m_residuals;
  linalg::DenseMatrix j;
  sys.jacobian_eval(u, j);
  std::vector<double> up(u.begin(), u.end()), fp(m), fm(m);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto col = static_cast<std::size_t>(bounded(hash_combine(seed, static_cast<std::uint64_t>(s)), sys.n_unknowns));
    const double h = 1e-6 * (1.0 + std::abs(u[col]));
    up[col] = u[col] + h;
    sys.residual_eval(up, fp);
    up[col] = u[col] - h;
    sys.residual_eval(up, fm);
    up[col] = u[col];
    double diff = 0.0, ref = 0.0, fdn = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double fd = (fp[i] - fm[i]) / (2.0 * h);
      diff += (j(i, col) - fd) * (j(i, col) - fd);
      ref += j(i, col) * j(i, col);
      fdn += fd * fd;
    }
    const double denom = std::max({std::sqrt(ref), std::sqrt(fdn), 1e-12});
    worst = std::max(worst, std::sqrt(diff) / denom);
  }
  return worst;
}

}  // namespace rfm::nls
