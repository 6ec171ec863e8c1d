#include <algorithm>
#include <cmath>

#include "rfm/error.hpp"
#include "rfm/linalg.hpp"
#include "rfm/random.hpp"

namespace rfm::linalg {

SketchPlan make_sketch_plan(std::size_t m, std::size_t n, double gamma, std::uint64_t seed) {
  if (m == 0 || n == 0) throw Error(ErrorCode::DimensionMismatch, "empty sketch input");
  if (!(gamma > 1.0)) throw Error(ErrorCode::DimensionMismatch, "oversampling factor must exceed 1");
  const auto s = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n)));
  if (m < s)
    throw Error(ErrorCode::SketchTooWide,
                std::to_string(m) + " rows cannot be compressed to " + std::to_string(s));

  SketchPlan plan;
  plan.input_rows = m;
  plan.output_rows = s;
  plan.seed = seed;
  plan.bucket.resize(m);
  plan.sign.resize(m);
  const std::uint64_t key = hash_combine(hash_combine(seed, m), s);
  for (std::size_t i = 0; i < m; ++i) {
    plan.bucket[i] = static_cast<std::uint32_t>(bounded(hash_combine(key, 2 * i), s));
    plan.sign[i] = (hash_combine(key, 2 * i + 1) >> 63) ? std::int8_t{-1} : std::int8_t{1};
  }
  return plan;
}

DenseMatrix apply_count_sketch(const SketchPlan& plan, const DenseMatrix& j) {
  if (j.rows() != plan.input_rows || plan.bucket.size() != plan.input_rows)
    throw Error(ErrorCode::DimensionMismatch, "sketch plan does not match matrix rows");
  const std::size_t n = j.cols();
  DenseMatrix b(plan.output_rows, n, 0.0);
  constexpr std::size_t kSlab = 512;
  const auto slabs = static_cast<std::ptrdiff_t>((n + kSlab - 1) / kSlab);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t sl = 0; sl < slabs; ++sl) {
    const std::size_t c0 = static_cast<std::size_t>(sl) * kSlab;
    const std::size_t c1 = std::min(n, c0 + kSlab);
    for (std::size_t i = 0; i < plan.input_rows; ++i) {
      const double* src = j.row(i);
      double* dst = b.row(plan.bucket[i]);
      if (plan.sign[i] > 0) {
#pragma omp simd
        for (std::size_t c = c0; c < c1; ++c) dst[c] += src[c];
      } else {
#pragma omp simd
        for (std::size_t c = c0; c < c1; ++c) dst[c] -= src[c];
      }
    }
  }
  return b;
}

}  // namespace rfm::linalg
