#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rfm::linalg {

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  /// Reshape without preserving contents; reuses storage when possible.
  void resize(std::size_t rows, std::size_t cols);
  void fill(double value);
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Binary dump: "RFMM", u64 rows, u64 cols, little-endian f64 payload.
void write_matrix(const DenseMatrix& a, const std::string& path);
DenseMatrix read_matrix(const std::string& path);

/// y = A x and v = A^T u with a fixed reduction order.
void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> y);
void matvec_transpose(const DenseMatrix& a, std::span<const double> u, std::span<double> v);

double norm2(std::span<const double> x);

// ---------------------------------------------------------------------------
// Count sketch

struct SketchPlan {
  std::size_t input_rows = 0;
  std::size_t output_rows = 0;
  std::vector<std::uint32_t> bucket;
  std::vector<std::int8_t> sign;
  std::uint64_t seed = 0;
};

/// s = ceil(gamma * n) buckets; bucket/sign are a pure function of (seed, m, s).
SketchPlan make_sketch_plan(std::size_t m, std::size_t n, double gamma, std::uint64_t seed);

/// B[b] = sum over rows i with bucket(i) == b of sign(i) * J[i].
DenseMatrix apply_count_sketch(const SketchPlan& plan, const DenseMatrix& j);

// ---------------------------------------------------------------------------
// Thin QR and triangular solves

/// Upper-triangular factor with positive diagonal, stored as a full n x n
/// row-major block whose strictly lower part is zero.
class UpperTriangular {
 public:
  UpperTriangular() = default;
  explicit UpperTriangular(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t order() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

constexpr double kRankTolerance = 1e-12;

/// R factor of B = QR (Householder), diagonal made positive.
/// Throws RankDeficient when min|R_ii| < rank_tol * max|R_jj|.
UpperTriangular thin_qr(const DenseMatrix& b, double rank_tol = kRankTolerance);

/// J <- J R^{-1}, row by row, without a second m x n buffer.
void right_precondition_in_place(DenseMatrix& j, const UpperTriangular& r);

/// Solves R x = y.
std::vector<double> solve_upper(const UpperTriangular& r, std::span<const double> y);

// ---------------------------------------------------------------------------
// LSQR

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  /// y = A x
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
  /// v = A^T u
  virtual void apply_transpose(std::span<const double> u, std::span<double> v) const = 0;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(const DenseMatrix& a) : a_(a) {}
  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.cols(); }
  void apply(std::span<const double> x, std::span<double> y) const override { matvec(a_, x, y); }
  void apply_transpose(std::span<const double> u, std::span<double> v) const override {
    matvec_transpose(a_, u, v);
  }

 private:
  const DenseMatrix& a_;
};

enum class LsqrTermination { tolerance_met, max_iterations };

struct LsqrResult {
  std::vector<double> solution;
  std::size_t iterations = 0;
  double final_relative_residual = 0.0;
  /// Estimate of ||b - A x||.
  double residual_norm = 0.0;
  LsqrTermination termination = LsqrTermination::tolerance_met;
};

/// Minimizes ||A x - b|| by Golub-Kahan bidiagonalization with atol = btol = eta.
/// max_iter = 0 selects the default 2n.
LsqrResult lsqr(const LinearOperator& a, std::span<const double> b, double eta,
                std::size_t max_iter = 0);

// ---------------------------------------------------------------------------
// Row scaling and diagnostics

struct RowScaling {
  std::vector<double> lambda;
  std::size_t zero_rows = 0;
};

/// Multiplies row i of J (and F_i) by c / max_j |J_ij|. Zero rows keep lambda = 1.
RowScaling row_scale(DenseMatrix& j, std::span<double> f, double c);

/// sigma_max / sigma_min from a full SVD.
double estimate_condition(const DenseMatrix& a);

}  // namespace rfm::linalg
