#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rfm/discretize.hpp"
#include "rfm/error.hpp"
#include "test_support.hpp"

using namespace rfm;
using namespace rfm::disc;
using std::numbers::pi;

namespace {

const std::array<geo::Interval, 3> kUnitCube{geo::Interval{0, 1}, geo::Interval{0, 1}, geo::Interval{0, 1}};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no rfm::Error thrown");
  return ErrorCode::IoError;
}

/// Central difference of g along the axes in `m`, applied recursively.
double fd_partial(const std::function<double(const Point&)>& g, Point x, MultiIndex m, double h) {
  for (int a = 0; a < 3; ++a) {
    if (m.a[a] == 0) continue;
    --m.a[a];
    Point xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    return (fd_partial(g, xp, m, h) - fd_partial(g, xm, m, h)) / (2.0 * h);
  }
  return g(x);
}

DiscretizationConfig small_config(std::array<int, 3> n, int q, std::size_t j, Pou pou = Pou::a) {
  DiscretizationConfig c;
  c.n = n;
  c.q = {q, q, q};
  c.j = j;
  c.pou = pou;
  c.seed = 7;
  return c;
}

std::vector<double> random_coefficients(std::size_t n, std::uint64_t seed, double scale = 0.1) {
  std::mt19937_64 rng(seed);
  auto u = testing::random_vector(n, rng);
  for (auto& v : u) v *= scale;
  return u;
}

const ProblemParams kLight{{"boundary_points", 200}, {"time_slices", 5}};

}  // namespace

TEST_CASE("partition tiles the box") {
  auto p = build_partition(3, kUnitCube, {2, 2, 2});
  REQUIRE(p.size() == 8);
  for (const auto& s : p.subdomains)
    for (int a = 0; a < 3; ++a) CHECK(s.half_width[a] == 0.25);

  auto line = build_partition(1, kUnitCube, {1, 1, 1});
  REQUIRE(line.size() == 1);
  CHECK(line.subdomains[0].center[0] == 0.5);
  CHECK(line.subdomains[0].half_width[0] == 0.5);

  auto st = build_partition(3, {geo::Interval{-1, 1}, geo::Interval{-1, 1}, geo::Interval{0, 2}}, {2, 2, 2});
  for (const auto& s : st.subdomains)
    for (int a = 0; a < 3; ++a) CHECK(s.half_width[a] == 0.5);

  // Neighbours share edges exactly.
  auto odd = build_partition(2, {geo::Interval{0.1, 0.8}, geo::Interval{-3, 7}, {}}, {3, 7, 1});
  for (std::size_t i = 0; i < odd.size(); ++i) {
    const auto c = odd.coords(i);
    CHECK(odd.index(c) == i);
    if (c[0] + 1 < 3) CHECK(odd.bounds(i, 0).hi == odd.bounds(odd.index({c[0] + 1, c[1], 0}), 0).lo);
  }
  CHECK(odd.bounds(odd.size() - 1, 1).hi == 7.0);
  CHECK(odd.locate({0.8, 7.0, 0}) == odd.size() - 1);
  CHECK(odd.locate({0.1, -3.0, 0}) == 0);

  CHECK(code_of([] { build_partition(2, {geo::Interval{1, 1}, geo::Interval{0, 1}, {}}, {1, 1, 1}); }) ==
        ErrorCode::EmptyInterval);
  CHECK(code_of([] { build_partition(2, kUnitCube, {0, 1, 1}); }) == ErrorCode::EmptyInterval);
}

TEST_CASE("affine map to the reference cell") {
  Subdomain s{{0.25, 0.25, 0.25}, {0.25, 0.25, 0.25}};
  auto y = affine_map(s, {0.25, 0.25, 0.25}, 3);
  CHECK(y == Point{0, 0, 0});
  y = affine_map(s, {0.5, 0.0, 0.25}, 3);
  CHECK(y == Point{1, -1, 0});
  Subdomain id{{0, 0, 0}, {1, 1, 1}};
  CHECK(affine_map(id, {0.3, 0, 0}, 1)[0] == 0.3);
}

TEST_CASE("partition-of-unity profiles") {
  CHECK(pou_eval(Pou::b, 0.0) == 1.0);
  CHECK(pou_eval(Pou::b, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(pou_eval(Pou::b, 1.25)) <= 1e-16);
  CHECK(pou_eval(Pou::b, -1.3) == 0.0);
  CHECK(pou_eval(Pou::a, 1.0) == 1.0);
  CHECK(pou_eval(Pou::a, 1.0001) == 0.0);

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double y = 0.75 + 0.5 * i / 999.0;
    worst = std::max(worst, std::abs(pou_eval(Pou::b, y) + pou_eval(Pou::b, 2.0 - y) - 1.0));
  }
  CHECK(worst <= 1e-15);

  // Analytic derivatives against differences, away from the kinks at 3/4 and 5/4.
  for (double y : {-1.2, -1.0, -0.9, 0.8, 0.95, 1.1, 1.2}) {
    const double h = 1e-5;
    for (int r = 1; r <= 3; ++r) {
      const double fd =
          (pou_derivative(Pou::b, y + h, r - 1) - pou_derivative(Pou::b, y - h, r - 1)) / (2.0 * h);
      CHECK(pou_derivative(Pou::b, y, r) == doctest::Approx(fd).epsilon(1e-7).scale(std::pow(2 * pi, r)));
    }
  }
}

TEST_CASE("psi_a sums to one at interior collocation points") {
  auto pb = make_problem("allen_cahn_moving_hole", kLight);
  auto part = build_partition(3, pb.geometry.box, {2, 2, 2});
  auto sets = generate_collocation(part, {8, 8, 8}, pb, true);
  REQUIRE(!sets.interior.empty());
  double worst = 0.0;
  for (const auto& p : sets.interior) {
    double sum = 0.0;
    for (std::size_t s = 0; s < part.size(); ++s) sum += pou_weight(part, Pou::a, s, p.x);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  CHECK(worst == 0.0);
}

TEST_CASE("feature sampling is deterministic and bounded") {
  auto part = build_partition(3, kUnitCube, {1, 1, 1});
  auto a = sample_features(part, 25000, 0.7, 11);
  auto b = sample_features(part, 25000, 0.7, 11);
  CHECK(a.weights == b.weights);
  CHECK(a.biases == b.biases);
  REQUIRE(a.weights.size() == 75000);
  double mk = 0.0;
  for (double w : a.weights) mk = std::max(mk, std::abs(w));
  for (double w : a.biases) mk = std::max(mk, std::abs(w));
  CHECK(mk <= 0.7);
  CHECK(mk > 0.69);
  auto c = sample_features(part, 10, 0.7, 12);
  CHECK(c.weights[0] != a.weights[0]);
  CHECK(code_of([&] { sample_features(part, 10, 0.0, 1); }) == ErrorCode::ConfigError);
  CHECK(code_of([&] { sample_features(part, 0, 1.0, 1); }) == ErrorCode::ConfigError);

  // A tiny range collapses every feature to tanh(0): the basis has rank one numerically.
  auto part2 = build_partition(2, kUnitCube, {1, 1, 1});
  auto tiny = sample_features(part2, 8, 1e-9, 3);
  Eigen::MatrixXd m(30, 8);
  for (int i = 0; i < 30; ++i) {
    auto e = eval_basis(part2, tiny, 0, {i / 29.0, 1.0 - i / 29.0, 0}, {mi::V});
    for (int j = 0; j < 8; ++j) m(i, j) = e.values[0][j] + 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  CHECK(svd.singularValues()(1) / svd.singularValues()(0) < 1e-8);
}

TEST_CASE("basis partials at the subdomain center") {
  auto part = build_partition(3, kUnitCube, {2, 2, 2});
  FeatureBank bank;
  bank.dim = 3;
  bank.per_subdomain = 1;
  bank.subdomains = 8;
  bank.weights.assign(24, 0.0);
  bank.biases.assign(8, 0.0);
  bank.weights[0] = 1.0;
  auto e = eval_basis(part, bank, 0, part.subdomains[0].center, {mi::V, mi::X, mi::XX, mi::Y});
  CHECK(e.values[0][0] == 0.0);
  CHECK(e.values[1][0] == doctest::Approx(1.0 / 0.25));
  CHECK(e.values[2][0] == 0.0);
  CHECK(e.values[3][0] == 0.0);
  CHECK(code_of([&] { eval_basis(part, bank, 0, {0.1, 0.1, 0.1}, {{2, 1, 1}}); }) == ErrorCode::OrderTooHigh);
}

TEST_CASE("basis partials match finite differences") {
  auto part = build_partition(3, kUnitCube, {1, 1, 1});
  auto bank = sample_features(part, 30, 1.0, 5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const std::vector<MultiIndex> orders{mi::X, mi::Y, mi::Z, mi::XX, mi::YY, mi::ZZ, mi::XY, mi::XZ, mi::YZ,
                                       mi::XXX, mi::YYY, {0, 0, 3}, {1, 1, 1}, {2, 1, 0}, {0, 1, 2}};
  double worst12 = 0.0, worst3 = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Point x{u(rng), u(rng), u(rng)};
    auto e = eval_basis(part, bank, 0, x, orders);
    for (std::size_t j = 0; j < bank.per_subdomain; ++j) {
      auto g = [&](const Point& p) { return eval_basis(part, bank, 0, p, {mi::V}).values[0][j]; };
      for (std::size_t o = 0; o < orders.size(); ++o) {
        const int ord = orders[o].order();
        const double h = ord == 1 ? 1e-5 : ord == 2 ? 1e-4 : 2e-3;
        // Third partials use one Richardson step to cancel the h^2 term.
        const double fd = ord < 3 ? fd_partial(g, x, orders[o], h)
                                  : (4.0 * fd_partial(g, x, orders[o], h / 2) - fd_partial(g, x, orders[o], h)) / 3.0;
        // Scale: |d^a phi| <= prod (k/sigma)^a, at most 2^order here.
        const double err = std::abs(fd - e.values[o][j]) / std::pow(2.0, ord);
        (ord == 3 ? worst3 : worst12) = std::max(ord == 3 ? worst3 : worst12, err);
      }
    }
  }
  CHECK(worst12 <= 1e-7);
  CHECK(worst3 <= 1e-5);
}

TEST_CASE("collocation on the unit cube") {
  auto pb = make_problem("cubic_elliptic_3d");
  auto part = build_partition(3, pb.geometry.box, {2, 2, 2});
  auto sets = generate_collocation(part, {20, 20, 20}, pb, true);
  CHECK(sets.interior.size() == 64000);
  // 6 faces, 4 subdomains each, 20x20 points.
  CHECK(sets.boundary.size() == 6 * 4 * 400);
  // 3 axes, 4 shared faces each.
  CHECK(sets.interface.size() == 12 * 400);
  for (const auto& b : sets.boundary) {
    bool on_face = false;
    for (int a = 0; a < 3; ++a) on_face = on_face || b.x[a] == 0.0 || b.x[a] == 1.0;
    CHECK(on_face);
  }
  CHECK(code_of([&] { generate_collocation(part, {1, 5, 5}, pb, false); }) == ErrorCode::ConfigError);
}

TEST_CASE("collocation drops points inside the moving hole") {
  auto pb = make_problem("allen_cahn_moving_hole", kLight);
  auto part = build_partition(3, pb.geometry.box, {1, 1, 1});
  auto sets = generate_collocation(part, {11, 11, 11}, pb, false);
  auto present = [&](double x, double y, double t) {
    return std::any_of(sets.interior.begin(), sets.interior.end(), [&](const InteriorPoint& p) {
      return std::abs(p.x[0] - x) < 1e-12 && std::abs(p.x[1] - y) < 1e-12 && std::abs(p.x[2] - t) < 1e-12;
    });
  };
  CHECK_FALSE(present(0.7, 0.5, 0.0));
  CHECK(present(0.1, 0.1, 0.0));
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    const double cx = 0.5 + 0.2 * std::cos(pi * t), cy = 0.5 + 0.2 * std::sin(pi * t);
    const double d = std::hypot(0.7 - cx, 0.5 - cy);
    CHECK(present(0.7, 0.5, t) == (d >= 0.1));
  }
  for (const auto& p : sets.interior) {
    const double cx = 0.5 + 0.2 * std::cos(pi * p.x[2]), cy = 0.5 + 0.2 * std::sin(pi * p.x[2]);
    CHECK(std::hypot(p.x[0] - cx, p.x[1] - cy) >= 0.1 - 1e-10);
  }
  std::size_t curved = 0;
  for (const auto& b : sets.boundary) {
    if (b.curved) {
      ++curved;
      CHECK(std::abs(pb.geometry.excised[0]->level(b.x)) <= 1e-10);
    } else {
      CHECK((b.x[0] == 0.0 || b.x[0] == 1.0 || b.x[1] == 0.0 || b.x[1] == 1.0 || b.x[2] == 0.0));
    }
  }
  CHECK(curved == 5 * 200);
}

TEST_CASE("a subdomain emptied by the geometry is an error") {
  auto pb = make_problem("cubic_elliptic_2d");
  pb.geometry.excised.push_back(std::make_shared<geo::Disk>(geo::Vec2{0.25, 0.25}, 0.4));
  auto part = build_partition(2, pb.geometry.box, {2, 2, 1});
  CHECK(code_of([&] { generate_collocation(part, {6, 6, 6}, pb, true); }) == ErrorCode::EmptyInterior);
}

TEST_CASE("row bookkeeping") {
  auto pb = make_problem("cubic_elliptic_3d");
  RfmSystem sys(pb, small_config({2, 2, 2}, 4, 10));
  CHECK(sys.unknowns() == 80);
  CHECK(sys.interior_rows() == 512);
  CHECK(sys.continuity_rows() == 12 * 16 * 2);
  CHECK(sys.boundary_rows() == 6 * 4 * 16);
  CHECK(sys.residuals() == 512 + 384 + 384);

  auto kdv = make_problem("kdv_2d");
  RfmSystem k(kdv, small_config({2, 2, 2}, 4, 10));
  // x and y interfaces carry C2 continuity, t interfaces C0.
  CHECK(k.continuity_rows() == 4 * 16 * 3 + 4 * 16 * 3 + 4 * 16 * 1);
  // x0 and y0 carry two conditions, x1, y1 and t0 one.
  CHECK(k.boundary_rows() == 2 * 64 + 2 * 64 + 64 + 64 + 64);

  auto ns = make_problem("navier_stokes_2d");
  RfmSystem n(ns, small_config({1, 1, 1}, 4, 10));
  CHECK(n.unknowns() == 30);
  CHECK(n.interior_rows() == 3 * 64);
  CHECK(n.continuity_rows() == 0);
  CHECK(n.boundary_rows() == 5 * 16 * 3);

  CHECK(code_of([&] { RfmSystem(kdv, small_config({2, 2, 2}, 4, 10, Pou::b)); }) == ErrorCode::ConfigError);
}

TEST_CASE("residual at zero coefficients") {
  auto pb = make_problem("cubic_elliptic_3d");
  RfmSystem sys(pb, small_config({2, 2, 2}, 5, 10));
  std::vector<double> u(sys.unknowns(), 0.0), f(sys.residuals());
  sys.residual(u, f);
  const auto& c = sys.collocation();
  for (std::size_t p = 0; p < c.interior.size(); ++p) {
    const auto& x = c.interior[p].x;
    const double expect = -(3.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]) +
                            std::pow(std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]), 3));
    CHECK(f[p] == doctest::Approx(expect).epsilon(1e-13).scale(1.0));
  }
  for (std::size_t r = 0; r < sys.continuity_rows(); ++r) CHECK(f[sys.interior_rows() + r] == 0.0);
  const std::size_t bb = sys.interior_rows() + sys.continuity_rows();
  for (std::size_t b = 0; b < c.boundary.size(); ++b) {
    const auto& x = c.boundary[b].x;
    CHECK(f[bb + b] == doctest::Approx(-std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2])).scale(1.0));
  }
  std::vector<double> wrong(3);
  CHECK(code_of([&] { sys.residual(wrong, f); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("jacobian matches finite differences of the residual") {
  struct Case {
    const char* name;
    std::array<int, 3> n;
    Pou pou;
  };
  for (const Case& cs : {Case{"cubic_elliptic_3d", {2, 2, 2}, Pou::a}, Case{"kdv_2d", {2, 2, 2}, Pou::a},
                         Case{"schrodinger_2d", {2, 1, 2}, Pou::a}, Case{"cubic_elliptic_2d", {2, 2, 1}, Pou::b},
                         Case{"navier_stokes_2d", {1, 2, 1}, Pou::a}, Case{"gray_scott_3d", {2, 1, 1}, Pou::b}}) {
    CAPTURE(cs.name);
    auto pb = make_problem(cs.name);
    RfmSystem sys(pb, small_config(cs.n, 5, 12, cs.pou));
    const auto u = random_coefficients(sys.unknowns(), 3);
    auto ns = sys.nls_system();
    CHECK(nls::jacobian_fd_check(ns, u, 40, 9) <= 1e-6);
  }
}

TEST_CASE("linear operators give a constant jacobian") {
  auto pb = make_problem("cubic_elliptic_2d");
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    r[0] = -(s[1] + s[2]);
    if (!dr) return;
    dr[1] = dr[2] = -1.0;
  };
  RfmSystem sys(pb, small_config({2, 2, 1}, 6, 15));
  linalg::DenseMatrix a, b;
  sys.jacobian(random_coefficients(sys.unknowns(), 1, 3.0), a);
  sys.jacobian(random_coefficients(sys.unknowns(), 2, 3.0), b);
  CHECK(testing::max_abs_diff(a, b) == 0.0);
}

TEST_CASE("assembly is deterministic") {
  auto pb = make_problem("gray_scott_3d");
  RfmSystem s1(pb, small_config({2, 2, 2}, 4, 10));
  RfmSystem s2(pb, small_config({2, 2, 2}, 4, 10));
  const auto u = random_coefficients(s1.unknowns(), 4);
  std::vector<double> f1(s1.residuals()), f2(s2.residuals());
  s1.residual(u, f1);
  s2.residual(u, f2);
  CHECK(f1 == f2);
  linalg::DenseMatrix j1, j2;
  s1.jacobian(u, j1);
  s2.jacobian(u, j2);
  CHECK(testing::max_abs_diff(j1, j2) == 0.0);
}

TEST_CASE("continuity rows compare the two one-sided expansions") {
  auto pb = make_problem("cubic_elliptic_2d");
  RfmSystem sys(pb, small_config({3, 2, 1}, 5, 8));
  const auto u = random_coefficients(sys.unknowns(), 5);
  std::vector<double> f(sys.residuals());
  sys.residual(u, f);
  const auto& part = sys.partition();
  const auto& bank = sys.features();
  std::size_t row = sys.interior_rows();
  for (const auto& ip : sys.collocation().interface) {
    for (int s = 0; s < 2; ++s) {
      MultiIndex m;
      m.a[ip.axis] = s;
      auto l = eval_basis(part, bank, ip.left, ip.x, {m});
      auto r = eval_basis(part, bank, ip.right, ip.x, {m});
      double expect = 0.0;
      for (std::size_t j = 0; j < 8; ++j)
        expect += l.values[0][j] * u[ip.left * 8 + j] - r.values[0][j] * u[ip.right * 8 + j];
      CHECK(f[row++] == doctest::Approx(expect).epsilon(1e-13).scale(1.0));
    }
  }
  CHECK(row == sys.interior_rows() + sys.continuity_rows());

  // Mirrored banks describe the same global functions on both sides; identical
  // coefficients then make every continuity residual vanish.
  FeatureBank mirror = bank;
  const std::size_t right = 1, left = 0;
  for (std::size_t j = 0; j < 8; ++j) {
    double shift = 0.0;
    for (int a = 0; a < 2; ++a) {
      mirror.weights[(right * 8 + j) * 2 + a] = bank.weights[(left * 8 + j) * 2 + a];
      shift += bank.weights[(left * 8 + j) * 2 + a] *
               (part.subdomains[right].center[a] - part.subdomains[left].center[a]) / part.subdomains[left].half_width[a];
    }
    mirror.biases[right * 8 + j] = bank.biases[left * 8 + j] + shift;
  }
  double worst = 0.0;
  for (const auto& ip : sys.collocation().interface) {
    if (ip.left != left || ip.right != right) continue;
    for (const auto& m : {mi::V, mi::X}) {
      auto l = eval_basis(part, mirror, left, ip.x, {m});
      auto r = eval_basis(part, mirror, right, ip.x, {m});
      double diff = 0.0;
      for (std::size_t j = 0; j < 8; ++j) diff += (l.values[0][j] - r.values[0][j]) * u[j];
      worst = std::max(worst, std::abs(diff));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("least-squares fits of the exact solution shrink the residual as J grows") {
  auto pb = make_problem("cubic_elliptic_2d");
  std::vector<double> norms;
  for (std::size_t j : {50, 100, 200}) {
    RfmSystem sys(pb, small_config({2, 2, 1}, 12, j));
    const auto& part = sys.partition();
    std::vector<double> u(sys.unknowns());
    // Independent per-subdomain fit to exact values on a denser grid.
    for (std::size_t s = 0; s < part.size(); ++s) {
      const int g = 30;
      Eigen::MatrixXd a(g * g, j);
      Eigen::VectorXd b(g * g);
      const auto bx = part.bounds(s, 0), by = part.bounds(s, 1);
      for (int i = 0; i < g; ++i)
        for (int k = 0; k < g; ++k) {
          const Point x{bx.lo + (bx.hi - bx.lo) * i / (g - 1), by.lo + (by.hi - by.lo) * k / (g - 1), 0};
          auto e = eval_basis(part, sys.features(), s, x, {mi::V});
          for (std::size_t f = 0; f < j; ++f) a(i * g + k, f) = e.values[0][f];
          b(i * g + k) = std::sin(pi * x[0]) * std::sin(pi * x[1]);
        }
      Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(b);
      for (std::size_t f = 0; f < j; ++f) u[s * j + f] = c(f);
    }
    std::vector<double> f(sys.residuals());
    sys.residual(u, f);
    norms.push_back(linalg::norm2(f));
  }
  MESSAGE("fit residual norms " << norms[0] << " " << norms[1] << " " << norms[2]);
  CHECK(norms[1] < norms[0]);
  CHECK(norms[2] < norms[1]);
}

TEST_CASE("solution evaluation") {
  auto pb = make_problem("cubic_elliptic_2d");
  RfmSystem sys(pb, small_config({1, 1, 1}, 5, 6));
  std::vector<Point> pts;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 50; ++i) pts.push_back({d(rng), d(rng), 0});
  std::vector<double> u(sys.unknowns(), 0.0);
  for (double v : sys.evaluate(u, pts, {mi::V, mi::X})) CHECK(v == 0.0);

  u[3] = 1.0;
  auto vals = sys.evaluate(u, pts, {mi::V});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double* k = sys.features().weight(0, 3);
    const auto y = affine_map(sys.partition().subdomains[0], pts[i], 2);
    CHECK(vals[i] == doctest::Approx(std::tanh(k[0] * y[0] + k[1] * y[1] + sys.features().bias(0, 3))).epsilon(1e-15));
  }

  CHECK(code_of([&] { sys.evaluate(u, {{1.5, 0.5, 0}}, {mi::V}); }) == ErrorCode::OutsideDomain);

  // Blended fields: gradient against differences of the value output.
  RfmSystem blended(pb, small_config({2, 2, 1}, 5, 10, Pou::b));
  const auto c = random_coefficients(blended.unknowns(), 8, 1.0);
  std::uniform_real_distribution<double> inner(0.01, 0.99);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Point x{inner(rng), inner(rng), 0};
    const auto g = blended.evaluate(c, {x}, {mi::X, mi::Y});
    for (int a = 0; a < 2; ++a) {
      const double h = 1e-6;
      Point xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      const double fd = (blended.evaluate(c, {xp}, {mi::V})[0] - blended.evaluate(c, {xm}, {mi::V})[0]) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[a]) / std::max(1.0, std::abs(g[a])));
    }
  }
  CHECK(worst <= 1e-7);
}
