#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "rfm/error.hpp"
#include "rfm/linalg.hpp"
#include "test_support.hpp"

using namespace rfm;
using namespace rfm::linalg;
using rfm::testing::max_abs_diff;
using rfm::testing::naive_product;
using rfm::testing::orthonormality_defect;
using rfm::testing::random_matrix;
using rfm::testing::random_vector;

namespace {

/// Explicit s x m sign matrix for a plan; oracle for the scatter kernel.
DenseMatrix explicit_sketch(const SketchPlan& plan) {
  DenseMatrix s(plan.output_rows, plan.input_rows, 0.0);
  for (std::size_t i = 0; i < plan.input_rows; ++i) s(plan.bucket[i], i) = plan.sign[i];
  return s;
}

/// Modified Gram-Schmidt R factor with positive diagonal.
DenseMatrix mgs_r(DenseMatrix a) {
  const std::size_t n = a.cols();
  DenseMatrix r(n, n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double nrm = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) nrm += a(i, k) * a(i, k);
    nrm = std::sqrt(nrm);
    r(k, k) = nrm;
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, k) /= nrm;
    for (std::size_t j = k + 1; j < n; ++j) {
      double d = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) d += a(i, k) * a(i, j);
      r(k, j) = d;
      for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) -= d * a(i, k);
    }
  }
  return r;
}

DenseMatrix to_dense(const UpperTriangular& r) {
  DenseMatrix d(r.order(), r.order());
  for (std::size_t i = 0; i < r.order(); ++i)
    for (std::size_t j = 0; j < r.order(); ++j) d(i, j) = r(i, j);
  return d;
}

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

}  // namespace

TEST_CASE("sketch plan dimensions") {
  CHECK(make_sketch_plan(100, 10, 3.0, 7).output_rows == 30);
  auto p = make_sketch_plan(4, 1, 2.0, 0);
  CHECK(p.output_rows == 2);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(p.bucket[i] < 2);
    CHECK((p.sign[i] == 1 || p.sign[i] == -1));
  }
  CHECK_THROWS_AS(make_sketch_plan(5, 3, 3.0, 0), Error);
  try {
    make_sketch_plan(5, 3, 3.0, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SketchTooWide);
  }
}

TEST_CASE("sketch plan is a pure function of its key") {
  auto a = make_sketch_plan(1000, 50, 3.0, 42);
  auto b = make_sketch_plan(1000, 50, 3.0, 42);
  auto c = make_sketch_plan(1000, 50, 3.0, 43);
  CHECK(a.bucket == b.bucket);
  CHECK(a.sign == b.sign);
  CHECK(a.bucket != c.bucket);
  // Buckets are spread over the whole range.
  std::vector<int> hits(a.output_rows, 0);
  for (auto v : a.bucket) hits[v]++;
  int empty = 0;
  for (int h : hits) empty += (h == 0);
  CHECK(empty < 10);
}

TEST_CASE("count sketch matches explicit sign matrix") {
  SketchPlan plan;
  plan.input_rows = 4;
  plan.output_rows = 2;
  plan.bucket = {0, 1, 0, 1};
  plan.sign = {1, -1, 1, 1};
  DenseMatrix eye(4, 4, 0.0);
  for (int i = 0; i < 4; ++i) eye(i, i) = 1.0;
  auto b = apply_count_sketch(plan, eye);
  DenseMatrix expected{{1, 0, 1, 0}, {0, -1, 0, 1}};
  CHECK(max_abs_diff(b, expected) == 0.0);

  std::mt19937_64 rng(3);
  auto j = random_matrix(700, 40, rng);
  auto p = make_sketch_plan(700, 40, 3.0, 11);
  CHECK(max_abs_diff(apply_count_sketch(p, j), naive_product(explicit_sketch(p), j)) < 1e-12);

  SketchPlan ident;
  ident.input_rows = ident.output_rows = 5;
  ident.bucket = {0, 1, 2, 3, 4};
  ident.sign = {1, 1, 1, 1, 1};
  auto k = random_matrix(5, 3, rng);
  CHECK(max_abs_diff(apply_count_sketch(ident, k), k) == 0.0);
}

TEST_CASE("count sketch is linear") {
  std::mt19937_64 rng(5);
  auto j1 = random_matrix(400, 30, rng);
  auto j2 = random_matrix(400, 30, rng);
  const double al = 0.37, be = -1.9;
  DenseMatrix mix(400, 30);
  for (std::size_t i = 0; i < 400; ++i)
    for (std::size_t c = 0; c < 30; ++c) mix(i, c) = al * j1(i, c) + be * j2(i, c);
  auto p = make_sketch_plan(400, 30, 3.0, 9);
  auto s1 = apply_count_sketch(p, j1);
  auto s2 = apply_count_sketch(p, j2);
  auto sm = apply_count_sketch(p, mix);
  double worst = 0.0;
  for (std::size_t i = 0; i < sm.rows(); ++i)
    for (std::size_t c = 0; c < 30; ++c) {
      const double ref = al * s1(i, c) + be * s2(i, c);
      worst = std::max(worst, std::abs(sm(i, c) - ref) / (1.0 + std::abs(ref)));
    }
  CHECK(worst < 1e-13);
}

TEST_CASE("count sketch is an isometry in expectation") {
  std::mt19937_64 rng(17);
  auto x = random_matrix(1000, 1, rng);
  double xx = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) xx += x(i, 0) * x(i, 0);
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto sx = apply_count_sketch(make_sketch_plan(1000, 1, 100.0, seed), x);
    double s = 0.0;
    for (std::size_t i = 0; i < sx.rows(); ++i) s += sx(i, 0) * sx(i, 0);
    mean += s / 200.0;
  }
  CHECK(std::abs(mean - xx) <= 0.05 * xx);
}

TEST_CASE("thin QR examples") {
  DenseMatrix eye{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK(max_abs_diff(to_dense(thin_qr(eye)), eye) < 1e-15);

  DenseMatrix b{{3, 0}, {4, 0}, {0, 1}};
  DenseMatrix r_expected{{5, 0}, {0, 1}};
  CHECK(max_abs_diff(to_dense(thin_qr(b)), r_expected) < 1e-14);

  DenseMatrix dup{{1, 1, 2}, {2, 2, 0}, {3, 3, 1}, {4, 4, 5}};
  try {
    thin_qr(dup);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("thin QR agrees with Gram-Schmidt and reconstructs B") {
  std::mt19937_64 rng(23);
  auto b = random_matrix(120, 25, rng);
  auto r = thin_qr(b);
  CHECK(max_abs_diff(to_dense(r), mgs_r(b)) < 1e-11);
  for (std::size_t i = 0; i < r.order(); ++i) {
    CHECK(r(i, i) > 0.0);
    for (std::size_t j = 0; j < i; ++j) CHECK(r(i, j) == 0.0);
  }
  DenseMatrix q = b;
  right_precondition_in_place(q, r);
  CHECK(orthonormality_defect(q) < 1e-12);
  CHECK(max_abs_diff(naive_product(q, to_dense(r)), b) < 1e-10 * b.max_abs());
}

TEST_CASE("right preconditioning examples") {
  UpperTriangular eye(2);
  eye(0, 0) = eye(1, 1) = 1.0;
  DenseMatrix j{{1.5, -2}, {3, 4}};
  DenseMatrix j0 = j;
  right_precondition_in_place(j, eye);
  CHECK(max_abs_diff(j, j0) == 0.0);

  UpperTriangular d(2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  DenseMatrix k{{2, 2}};
  right_precondition_in_place(k, d);
  CHECK(k(0, 0) == doctest::Approx(1.0));
  CHECK(k(0, 1) == doctest::Approx(2.0));

  DenseMatrix wrong(3, 3);
  CHECK_THROWS_AS(right_precondition_in_place(wrong, d), Error);
}

TEST_CASE("sketched QR orthogonalizes the sketch") {
  std::mt19937_64 rng(29);
  auto j = random_matrix(300, 60, rng);
  auto plan = make_sketch_plan(300, 60, 3.0, 1);
  auto r = thin_qr(apply_count_sketch(plan, j));
  right_precondition_in_place(j, r);
  CHECK(orthonormality_defect(apply_count_sketch(plan, j)) < 1e-10);
}

TEST_CASE("solve_upper inverts R") {
  std::mt19937_64 rng(31);
  auto r = thin_qr(random_matrix(40, 10, rng));
  auto y = random_vector(10, rng);
  auto x = solve_upper(r, y);
  for (std::size_t i = 0; i < 10; ++i) {
    double s = 0.0;
    for (std::size_t k = i; k < 10; ++k) s += r(i, k) * x[k];
    CHECK(s == doctest::Approx(y[i]).epsilon(1e-12));
  }
}

TEST_CASE("lsqr examples") {
  DenseMatrix eye{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<double> b{1, 2, 3};
  auto r = lsqr(DenseOperator(eye), b, 1e-10);
  CHECK(r.iterations <= 2);
  for (int i = 0; i < 3; ++i) CHECK(r.solution[i] == doctest::Approx(b[i]).epsilon(1e-12));
  CHECK(r.termination == LsqrTermination::tolerance_met);

  DenseMatrix a{{1, 0}, {0, 1}, {1, 1}};
  std::vector<double> ones{1, 1, 1};
  auto s = lsqr(DenseOperator(a), ones, 1e-12);
  CHECK(s.solution[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(s.solution[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  std::vector<double> zero(3, 0.0);
  auto z = lsqr(DenseOperator(a), zero, 1e-6);
  CHECK(z.iterations == 0);
  CHECK(z.solution == std::vector<double>{0.0, 0.0});
}

TEST_CASE("lsqr respects the iteration cap") {
  std::mt19937_64 rng(37);
  auto a = random_matrix(80, 30, rng);
  for (std::size_t i = 0; i < 80; ++i) a(i, 0) *= 1e6;  // badly scaled column
  auto b = random_vector(80, rng);
  auto r = lsqr(DenseOperator(a), b, 1e-14, 5);
  CHECK(r.iterations == 5);
  CHECK(r.termination == LsqrTermination::max_iterations);
}

TEST_CASE("lsqr agrees with the pseudoinverse") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 60 + 14 * t, n = 5 + 4 * t;
    auto a = random_matrix(m, n, rng);
    auto b = random_vector(m, rng);
    Eigen::VectorXd eb = Eigen::Map<Eigen::VectorXd>(b.data(), m);
    Eigen::VectorXd ref = to_eigen(a).bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(eb);
    auto r = lsqr(DenseOperator(a), b, 1e-12);
    double num = 0.0;
    for (std::size_t j = 0; j < n; ++j) num += std::pow(r.solution[j] - ref(j), 2);
    CHECK(std::sqrt(num) / ref.norm() <= 1e-8);
  }
}

TEST_CASE("row_scale examples") {
  DenseMatrix j{{0.5, -2, 1}};
  std::vector<double> f{4.0};
  auto s = row_scale(j, f, 100.0);
  CHECK(s.lambda[0] == doctest::Approx(50.0));
  CHECK(j(0, 0) == doctest::Approx(25.0));
  CHECK(j(0, 1) == doctest::Approx(-100.0));
  CHECK(j(0, 2) == doctest::Approx(50.0));
  CHECK(f[0] == doctest::Approx(200.0));

  DenseMatrix fixed{{100, -3}, {-100, 100}};
  DenseMatrix before = fixed;
  std::vector<double> g{1, 2};
  row_scale(fixed, g, 100.0);
  CHECK(max_abs_diff(fixed, before) == 0.0);

  DenseMatrix with_zero{{0, 0}, {1, 2}};
  std::vector<double> h{3, 4};
  auto z = row_scale(with_zero, h, 100.0);
  CHECK(z.zero_rows == 1);
  CHECK(z.lambda[0] == 1.0);
  CHECK(h[0] == 3.0);
}

TEST_CASE("row scaling solves the weighted least-squares problem") {
  std::mt19937_64 rng(43);
  auto j = random_matrix(20, 5, rng);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t c = 0; c < 5; ++c) j(i, c) *= std::pow(10.0, static_cast<double>(i % 4));
  auto f = random_vector(20, rng);

  // Oracle: weighted normal equations with w_i = 100 / max|J_i|.
  Eigen::MatrixXd ej = to_eigen(j);
  Eigen::VectorXd ef = Eigen::Map<Eigen::VectorXd>(f.data(), 20);
  Eigen::VectorXd w(20);
  for (int i = 0; i < 20; ++i) w(i) = 100.0 / ej.row(i).cwiseAbs().maxCoeff();
  Eigen::MatrixXd w2 = w.array().square().matrix().asDiagonal();
  Eigen::VectorXd ref = (ej.transpose() * w2 * ej).ldlt().solve(ej.transpose() * w2 * ef);

  DenseMatrix js = j;
  std::vector<double> fs = f;
  row_scale(js, fs, 100.0);
  auto sol = lsqr(DenseOperator(js), fs, 1e-14, 500);
  for (int c = 0; c < 5; ++c) CHECK(sol.solution[c] == doctest::Approx(ref(c)).epsilon(1e-10));

  // The unweighted optimum differs.
  Eigen::VectorXd plain = ej.colPivHouseholderQr().solve(ef);
  CHECK((plain - ref).norm() > 1e-6);
}

TEST_CASE("condition estimates") {
  DenseMatrix eye{{1, 0}, {0, 1}};
  CHECK(estimate_condition(eye) == doctest::Approx(1.0));
  DenseMatrix padded{{10, 0}, {0, 1}, {0, 0}, {0, 0}};
  CHECK(estimate_condition(padded) == doctest::Approx(10.0));

  std::mt19937_64 rng(47);
  auto u = random_matrix(30, 2, rng);
  auto v = random_matrix(2, 2, rng);
  Eigen::MatrixXd uq = Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(u)).householderQ() *
                       Eigen::MatrixXd::Identity(30, 2);
  Eigen::MatrixXd vq = Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(v)).householderQ();
  Eigen::MatrixXd a = uq * Eigen::Vector2d(1.0, 1e-8).asDiagonal() * vq.transpose();
  DenseMatrix ad(30, 2);
  for (int i = 0; i < 30; ++i)
    for (int c = 0; c < 2; ++c) ad(i, c) = a(i, c);
  CHECK(estimate_condition(ad) == doctest::Approx(1e8).epsilon(0.01));
}

TEST_CASE("matrix dump round trip") {
  std::mt19937_64 rng(53);
  auto a = random_matrix(7, 4, rng);
  const auto path = (std::filesystem::temp_directory_path() / "rfm_dump_test.bin").string();
  write_matrix(a, path);
  auto b = read_matrix(path);
  CHECK(b.rows() == 7);
  CHECK(b.cols() == 4);
  CHECK(max_abs_diff(a, b) == 0.0);
  std::FILE* fh = std::fopen(path.c_str(), "rb");
  char magic[5] = {0};
  REQUIRE(std::fread(magic, 1, 4, fh) == 4);
  std::fclose(fh);
  CHECK(std::string(magic) == "RFMM");
  std::filesystem::remove(path);
}
