#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rfm/error.hpp"
#include "rfm/linalg.hpp"

namespace rfm::linalg {

RowScaling row_scale(DenseMatrix& j, std::span<double> f, double c) {
  if (f.size() != j.rows()) throw Error(ErrorCode::DimensionMismatch, "row_scale residual length");
  if (!(c > 0.0)) throw Error(ErrorCode::DimensionMismatch, "row_scale constant must be positive");
  RowScaling out;
  out.lambda.assign(j.rows(), 1.0);
  const std::size_t n = j.cols();
  for (std::size_t i = 0; i < j.rows(); ++i) {
    double* r = j.row(i);
    double mx = 0.0;
    for (std::size_t k = 0; k < n; ++k) mx = std::max(mx, std::abs(r[k]));
    if (mx == 0.0) {
      ++out.zero_rows;
      continue;
    }
    const double lam = c / mx;
    out.lambda[i] = lam;
    for (std::size_t k = 0; k < n; ++k) r[k] *= lam;
    f[i] *= lam;
  }
  return out;
}

double estimate_condition(const DenseMatrix& a) {
  if (a.rows() < a.cols() || a.cols() == 0)
    throw Error(ErrorCode::DimensionMismatch, "condition estimate needs rows >= cols");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd m = Eigen::Map<const RowMajor>(a.data(), static_cast<Eigen::Index>(a.rows()),
                                                 static_cast<Eigen::Index>(a.cols()));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double floor = smax * std::numeric_limits<double>::epsilon() *
                       static_cast<double>(std::max(a.rows(), a.cols()));
  if (!(smin > floor)) throw Error(ErrorCode::RankDeficient, "matrix is numerically rank deficient");
  return smax / smin;
}

}  // namespace rfm::linalg
