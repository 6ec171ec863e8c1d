#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rfm/error.hpp"
#include "rfm/linalg.hpp"

namespace rfm::linalg {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_diagonal(const UpperTriangular& r, double rank_tol) {
  double lo = INFINITY;
  double hi = 0.0;
  for (std::size_t i = 0; i < r.order(); ++i) {
    const double d = std::abs(r(i, i));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(lo >= rank_tol * hi) || hi == 0.0)
    throw Error(ErrorCode::RankDeficient,
                "diagonal ratio " + std::to_string(hi > 0 ? lo / hi : 0.0) + " below tolerance");
}

}  // namespace

UpperTriangular thin_qr(const DenseMatrix& b, double rank_tol) {
  const std::size_t s = b.rows();
  const std::size_t n = b.cols();
  if (s < n || n == 0) throw Error(ErrorCode::DimensionMismatch, "thin QR needs rows >= cols");

  Eigen::MatrixXd work = Eigen::Map<const RowMajor>(b.data(), static_cast<Eigen::Index>(s),
                                                    static_cast<Eigen::Index>(n));
  Eigen::HouseholderQR<Eigen::Ref<Eigen::MatrixXd>> qr(work);
  const auto& packed = qr.matrixQR();

  UpperTriangular r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double flip = packed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) < 0 ? -1.0 : 1.0;
    for (std::size_t j = i; j < n; ++j)
      r(i, j) = flip * packed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  check_diagonal(r, rank_tol);
  return r;
}

void right_precondition_in_place(DenseMatrix& j, const UpperTriangular& r) {
  const std::size_t n = r.order();
  if (j.cols() != n) throw Error(ErrorCode::DimensionMismatch, "preconditioner order");
  for (std::size_t i = 0; i < n; ++i)
    if (r(i, i) == 0.0) throw Error(ErrorCode::RankDeficient, "zero pivot in preconditioner");

  Eigen::Map<const RowMajor> rm(r.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  // Row blocks are independent, so the split does not affect the result.
  constexpr std::size_t kBlock = 1024;
  const auto blocks = static_cast<std::ptrdiff_t>((j.rows() + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bl = 0; bl < blocks; ++bl) {
    const std::size_t r0 = static_cast<std::size_t>(bl) * kBlock;
    const std::size_t r1 = std::min(j.rows(), r0 + kBlock);
    Eigen::Map<RowMajor> rows(j.row(r0), static_cast<Eigen::Index>(r1 - r0), static_cast<Eigen::Index>(n));
    rm.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(rows);
  }
}

std::vector<double> solve_upper(const UpperTriangular& r, std::span<const double> y) {
  const std::size_t n = r.order();
  if (y.size() != n) throw Error(ErrorCode::DimensionMismatch, "solve_upper");
  std::vector<double> x(y.begin(), y.end());
  for (std::size_t ii = n; ii-- > 0;) {
    const double* row = r.data() + ii * n;
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= row[k] * x[k];
    x[ii] = s / row[ii];
  }
  return x;
}

}  // namespace rfm::linalg
