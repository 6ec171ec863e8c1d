// Property suites behind `rfm selftest` and acceptance criteria 1-9. Every check
// compares library output against an independent reference (SVD, explicit loops,
// finite differences, closed forms).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "rfm/bench.hpp"
#include "rfm/error.hpp"

namespace rfm::bench {

namespace {

using linalg::DenseMatrix;

DenseMatrix gaussian(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  DenseMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = g(rng);
  return a;
}

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix a(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  return a;
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(3) << v;
  return o.str();
}

CheckResult sketch_qr_identity() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    auto j = gaussian(300, 60, rng);
    const auto plan = linalg::make_sketch_plan(300, 60, 3.0, 17 + t);
    auto b = linalg::apply_count_sketch(plan, j);
    const auto r = linalg::thin_qr(b);
    linalg::right_precondition_in_place(b, r);
    const Eigen::MatrixXd q = to_eigen(b);
    const Eigen::MatrixXd g = q.transpose() * q - Eigen::MatrixXd::Identity(60, 60);
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return {1, "sketch/QR identity", worst <= 1e-10, "max |Q^T Q - I| = " + fmt(worst) + " over 20 matrices"};
}

CheckResult preconditioning_bound() {
  std::mt19937_64 rng(1002);
  int good = 0;
  std::vector<double> kappas;
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd u = Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(gaussian(500, 100, rng))).householderQ() *
                              Eigen::MatrixXd::Identity(500, 100);
    const Eigen::MatrixXd v = Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(gaussian(100, 100, rng))).householderQ();
    Eigen::VectorXd s(100);
    for (int i = 0; i < 100; ++i) s(i) = std::pow(10.0, -8.0 * i / 99.0);
    DenseMatrix j = from_eigen(u * s.asDiagonal() * v.transpose());
    const auto plan = linalg::make_sketch_plan(500, 100, 3.0, 300 + t);
    const auto r = linalg::thin_qr(linalg::apply_count_sketch(plan, j));
    linalg::right_precondition_in_place(j, r);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(j)).singularValues();
    const double kappa = sv(0) / sv(sv.size() - 1);
    kappas.push_back(kappa);
    if (kappa <= 3.0) ++good;
  }
  std::sort(kappas.begin(), kappas.end());
  return {2, "preconditioning bound", good >= 18,
          std::to_string(good) + "/20 seeds with kappa(J R^-1) <= 3; min " + fmt(kappas.front()) + ", median " +
              fmt(kappas[10]) + ", max " + fmt(kappas.back())};
}

CheckResult lsqr_vs_pseudoinverse() {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> nd(1, 50);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = nd(rng);
    const int m = std::uniform_int_distribution<int>(n, 200)(rng);
    auto a = gaussian(m, n, rng);
    std::normal_distribution<double> g;
    std::vector<double> b(m);
    for (auto& x : b) x = g(rng);
    const Eigen::VectorXd ref = to_eigen(a).completeOrthogonalDecomposition().pseudoInverse() *
                                Eigen::Map<const Eigen::VectorXd>(b.data(), m);
    const auto r = linalg::lsqr(linalg::DenseOperator(a), b, 1e-14, 4 * static_cast<std::size_t>(n));
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(r.solution.data(), n);
    worst = std::max(worst, (x - ref).norm() / ref.norm());
  }
  return {3, "LSQR vs pseudoinverse", worst <= 1e-8, "max relative error " + fmt(worst) + " over 50 systems"};
}

CheckResult jacobian_fd() {
  double worst = 0.0;
  std::string at;
  for (const auto& name : list_problems()) {
    const auto pb = make_problem(name);
    disc::DiscretizationConfig c;
    c.n = {2, 2, 2};
    c.q = {6, 6, 6};
    c.j = 20;
    c.seed = 3;
    disc::RfmSystem sys(pb, c);
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 0.1);
    std::vector<double> u(sys.unknowns());
    for (auto& v : u) v = g(rng);
    const double e = nls::jacobian_fd_check(sys.nls_system(), u, 100, 5);
    if (e > worst) worst = e, at = name;
  }
  return {4, "Jacobian finite-difference check", worst <= 1e-5,
          "worst relative error " + fmt(worst) + " (" + at + ")"};
}

CheckResult source_consistency() {
  double worst = 0.0;
  std::string at;
  int count = 0;
  for (const auto& name : list_problems()) {
    const auto pb = make_problem(name);
    if (!pb.has_exact()) continue;
    ++count;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
      geo::Point p{};
      for (int a = 0; a < pb.dim; ++a)
        p[a] = std::uniform_real_distribution<double>(pb.geometry.box[a].lo, pb.geometry.box[a].hi)(rng);
      const double e = source_consistency_residual(pb, p);
      if (e > worst) worst = e, at = name;
    }
  }
  return {5, "manufactured-source consistency", worst <= 1e-10,
          std::to_string(count) + " problems, worst " + fmt(worst) + (at.empty() ? "" : " (" + at + ")")};
}

CheckResult amipn_degeneracy() {
  const auto pb = make_problem("cubic_elliptic_2d");
  disc::DiscretizationConfig c;
  c.n = {2, 2, 1};
  c.q = {20, 20, 1};
  c.j = 100;
  c.seed = 9;
  disc::RfmSystem sys(pb, c);
  const auto ns = sys.nls_system();
  const std::vector<double> u0(sys.unknowns(), 0.0);
  nls::SolverConfig s;
  s.seed = 9;
  const auto ipn = nls::ipn_solve(ns, u0, s);
  s.m_max = 1;
  s.tau_rel = 0.0;
  const auto ami = nls::amipn_solve(ns, u0, s);
  const bool same = ipn.residual_history == ami.residual_history && ipn.final_u == ami.final_u &&
                    ipn.jacobian_evaluations == ami.jacobian_evaluations;
  return {6, "AMIPN(m_max=1, tau=0) equals IPN", same,
          "IT " + std::to_string(ipn.outer_iterations) + " vs " + std::to_string(ami.outer_iterations) +
              (same ? ", identical histories and iterates" : ", histories differ")};
}

CheckResult affine_exactness() {
  std::mt19937_64 rng(1007);
  const auto a = gaussian(500, 100, rng);
  std::normal_distribution<double> g;
  std::vector<double> b(500);
  for (auto& x : b) x = g(rng);
  const Eigen::MatrixXd ea = to_eigen(a);
  const Eigen::VectorXd eb = Eigen::Map<const Eigen::VectorXd>(b.data(), 500);
  const double opt = (ea * ea.colPivHouseholderQr().solve(eb) - eb).norm();

  nls::NlsSystem sys;
  sys.m_residuals = 500;
  sys.n_unknowns = 100;
  sys.residual_eval = [&](std::span<const double> u, std::span<double> f) {
    linalg::matvec(a, u, f);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= b[i];
  };
  sys.jacobian_eval = [&](std::span<const double>, DenseMatrix& j) { j = a; };
  const std::vector<double> u0(100, 0.0);
  nls::SolverConfig cfg;
  cfg.seed = 4;
  cfg.eta = 1e-12;  // exact inner solves, so the Newton step is the LS solution
  bool pass = true;
  std::ostringstream d;
  for (int k = 0; k < 2; ++k) {
    const auto rep = k == 0 ? nls::ipn_solve(sys, u0, cfg) : nls::amipn_solve(sys, u0, cfg);
    const double after_one = rep.residual_history.at(1);
    const double gap = (after_one - opt) / rep.residual_history.front();
    const bool ok = gap <= 10 * cfg.eta && rep.termination == nls::Termination::stagnation &&
                    rep.outer_iterations <= 2;
    pass = pass && ok;
    d << (k == 0 ? "ipn" : "amipn") << ": gap after first iteration " << fmt(gap) << ", IT " << rep.outer_iterations
      << (k == 0 ? "; " : "");
  }
  return {7, "affine exactness", pass, d.str()};
}

CheckResult klein_gordon_topology() {
  const auto pb = make_problem("klein_gordon_flowers");
  auto overlap = [&](double t) {
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < 200; ++j) {
        const geo::Point p{-1.0 + 2.0 * i / 199.0, -1.0 + 2.0 * j / 199.0, t};
        if (pb.geometry.excised[0]->level(p) < 0.0 && pb.geometry.excised[1]->level(p) < 0.0) return true;
      }
    return false;
  };
  const bool o0 = overlap(0.0), o1 = overlap(1.0), o2 = overlap(2.0);
  return {8, "Klein-Gordon topology", !o0 && o1 && !o2,
          std::string("overlap at t=0: ") + (o0 ? "yes" : "no") + ", t=1: " + (o1 ? "yes" : "no") +
              ", t=2: " + (o2 ? "yes" : "no")};
}

CheckResult pou_identities() {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double y = 0.75 + 0.5 * i / 999.0;
    worst = std::max(worst, std::abs(disc::pou_eval(disc::Pou::b, y) + disc::pou_eval(disc::Pou::b, 2.0 - y) - 1.0));
  }
  double sum_defect = 0.0;
  std::size_t points = 0;
  for (const char* name : {"cubic_elliptic_3d", "allen_cahn_moving_hole"}) {
    const auto pb = make_problem(name);
    const auto part = disc::build_partition(pb.dim, pb.geometry.box, {2, 2, 2});
    const auto sets = disc::generate_collocation(part, {10, 10, 10}, pb, true);
    for (const auto& p : sets.interior) {
      double s = 0.0;
      for (std::size_t k = 0; k < part.size(); ++k) s += disc::pou_weight(part, disc::Pou::a, k, p.x);
      sum_defect = std::max(sum_defect, std::abs(s - 1.0));
    }
    points += sets.interior.size();
  }
  return {9, "partition-of-unity identities", worst <= 1e-15 && sum_defect == 0.0,
          "phi_b symmetry defect " + fmt(worst) + ", psi_a sum defect " + fmt(sum_defect) + " at " +
              std::to_string(points) + " points"};
}

}  // namespace

std::vector<CheckResult> run_property_checks() {
  using Check = CheckResult (*)();
  const Check checks[] = {sketch_qr_identity, preconditioning_bound, lsqr_vs_pseudoinverse,
                          jacobian_fd,        source_consistency,    amipn_degeneracy,
                          affine_exactness,   klein_gordon_topology, pou_identities};
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < std::size(checks); ++i) {
    try {
      out.push_back(checks[i]());
    } catch (const std::exception& e) {
      out.push_back({static_cast<int>(i) + 1, "criterion " + std::to_string(i + 1), false,
                     std::string("exception: ") + e.what()});
    }
  }
  return out;
}

}  // namespace rfm::bench
