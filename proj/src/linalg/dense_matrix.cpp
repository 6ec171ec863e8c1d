#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "rfm/error.hpp"
#include "rfm/linalg.hpp"

namespace rfm::linalg {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

void DenseMatrix::resize(std::size_t rows, std::size_t cols) {
  rows_ = rows;
  cols_ = cols;
  data_.resize(rows * cols);
}

void DenseMatrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary dump assumes little-endian host");

constexpr char kMagic[4] = {'R', 'F', 'M', 'M'};

}  // namespace

void write_matrix(const DenseMatrix& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  const std::uint64_t dims[2] = {a.rows(), a.cols()};
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(a.rows() * a.cols() * sizeof(double)));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  char magic[4];
  std::uint64_t dims[2];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::IoError, "bad header in " + path);
  DenseMatrix a(dims[0], dims[1]);
  in.read(reinterpret_cast<char*>(a.data()),
          static_cast<std::streamsize>(dims[0] * dims[1] * sizeof(double)));
  if (!in) throw Error(ErrorCode::IoError, "truncated payload in " + path);
  return a;
}

void matvec(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.cols() || y.size() != a.rows())
    throw Error(ErrorCode::DimensionMismatch, "matvec");
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  const double* xp = x.data();
  // Four rows per pass so every load of x feeds four products.
  const auto quads = static_cast<std::ptrdiff_t>(m / 4);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < quads; ++q) {
    const std::size_t i = 4 * static_cast<std::size_t>(q);
    const double *r0 = a.row(i), *r1 = a.row(i + 1), *r2 = a.row(i + 2), *r3 = a.row(i + 3);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
#pragma omp simd reduction(+ : s0, s1, s2, s3)
    for (std::size_t j = 0; j < n; ++j) {
      s0 += r0[j] * xp[j];
      s1 += r1[j] * xp[j];
      s2 += r2[j] * xp[j];
      s3 += r3[j] * xp[j];
    }
    y[i] = s0;
    y[i + 1] = s1;
    y[i + 2] = s2;
    y[i + 3] = s3;
  }
  for (std::size_t i = 4 * static_cast<std::size_t>(quads); i < m; ++i) {
    const double* r = a.row(i);
    double s = 0.0;
#pragma omp simd reduction(+ : s)
    for (std::size_t j = 0; j < n; ++j) s += r[j] * xp[j];
    y[i] = s;
  }
}

void matvec_transpose(const DenseMatrix& a, std::span<const double> u, std::span<double> v) {
  if (u.size() != a.rows() || v.size() != a.cols())
    throw Error(ErrorCode::DimensionMismatch, "matvec_transpose");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  // One column slab per thread. Each output entry accumulates row quads in
  // increasing order, so the result does not depend on the slab width.
#ifdef _OPENMP
  const std::size_t threads = static_cast<std::size_t>(omp_get_max_threads());
#else
  const std::size_t threads = 1;
#endif
  const std::size_t slab = std::max<std::size_t>(64, ((n + threads - 1) / threads + 7) / 8 * 8);
  const auto slabs = static_cast<std::ptrdiff_t>((n + slab - 1) / slab);
  const double* up = u.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t sl = 0; sl < slabs; ++sl) {
    const std::size_t c0 = static_cast<std::size_t>(sl) * slab;
    const std::size_t c1 = std::min(n, c0 + slab);
    double* out = v.data();
    for (std::size_t j = c0; j < c1; ++j) out[j] = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      const double *r0 = a.row(i), *r1 = a.row(i + 1), *r2 = a.row(i + 2), *r3 = a.row(i + 3);
      const double u0 = up[i], u1 = up[i + 1], u2 = up[i + 2], u3 = up[i + 3];
#pragma omp simd
      for (std::size_t j = c0; j < c1; ++j) out[j] += u0 * r0[j] + u1 * r1[j] + u2 * r2[j] + u3 * r3[j];
    }
    for (; i < m; ++i) {
      const double* r = a.row(i);
      const double ui = up[i];
#pragma omp simd
      for (std::size_t j = c0; j < c1; ++j) out[j] += ui * r[j];
    }
  }
}

double norm2(std::span<const double> x) {
  // Scaled accumulation avoids overflow for very large residuals.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

}  // namespace rfm::linalg
