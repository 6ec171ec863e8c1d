#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "rfm/bench.hpp"
#include "rfm/error.hpp"

namespace rfm::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double relative_l2_error(std::span<const double> numerical, std::span<const double> exact) {
  if (numerical.size() != exact.size()) throw Error(ErrorCode::DimensionMismatch, "error sample lengths differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double d = numerical[i] - exact[i];
    num += d * d;
    den += exact[i] * exact[i];
  }
  if (!(den > 0.0)) throw Error(ErrorCode::ZeroReference, "reference field vanishes on the evaluation grid");
  return std::sqrt(num / den);
}

double relative_h1_error(std::span<const double> numerical, std::span<const double> exact, std::size_t stride) {
  if (stride == 0 || exact.size() % stride != 0) throw Error(ErrorCode::DimensionMismatch, "bad H1 sample stride");
  // Values and partials enter the sums the same way, so this is the l2 formula over all entries.
  return relative_l2_error(numerical, exact);
}

std::vector<geo::Point> evaluation_points(const PdeProblem& pb, const std::array<int, 3>& grid) {
  std::array<int, 3> g{1, 1, 1};
  for (int a = 0; a < pb.dim; ++a) g[a] = grid[a];
  std::vector<geo::Point> pts;
  for (int k = 0; k < g[2]; ++k)
    for (int j = 0; j < g[1]; ++j)
      for (int i = 0; i < g[0]; ++i) {
        const std::array<int, 3> idx{i, j, k};
        geo::Point p{};
        for (int a = 0; a < pb.dim; ++a) {
          const auto& iv = pb.geometry.box[a];
          p[a] = g[a] == 1 ? 0.5 * (iv.lo + iv.hi) : iv.lo + (iv.hi - iv.lo) * idx[a] / (g[a] - 1);
        }
        if (pb.geometry.classify(p) == geo::PointClass::interior) pts.push_back(p);
      }
  return pts;
}

ErrorReport run_experiment(const ExperimentConfig& cfg) {
  ErrorReport rep;
  rep.problem = cfg.problem;
  rep.solver = cfg.solver;
  rep.config = cfg;
  try {
    cfg.validate();
    const PdeProblem pb = make_problem(cfg.problem, cfg.params);
    const std::size_t kc = static_cast<std::size_t>(pb.components);
    rep.relative_l2.assign(kc, kNaN);
    rep.relative_h1.assign(kc, kNaN);

    const auto t0 = Clock::now();
    disc::RfmSystem sys(pb, cfg.discretization());
    rep.assemble_seconds = seconds_since(t0);
    rep.rows = sys.residuals();
    rep.cols = sys.unknowns();
    rep.interior_rows = sys.interior_rows();
    rep.continuity_rows = sys.continuity_rows();
    rep.boundary_rows = sys.boundary_rows();

    const auto nsys = sys.nls_system(cfg.scaling);
    const std::vector<double> u0(sys.unknowns(), 0.0);
    nls::SolverConfig sp = cfg.solver_params;
    sp.seed = cfg.seed;
    nls::SolverReport sr;
    switch (cfg.solver) {
      case SolverKind::ipn: sr = nls::ipn_solve(nsys, u0, sp); break;
      case SolverKind::amipn: sr = nls::amipn_solve(nsys, u0, sp); break;
      case SolverKind::lm: sr = nls::lm_solve(nsys, u0, sp.max_outer, sp.epsilon); break;
      case SolverKind::gauss_newton: sr = nls::gauss_newton_solve(nsys, u0, sp.max_outer, sp.epsilon); break;
    }
    rep.iterations = sr.outer_iterations;
    rep.jacobian_evaluations = sr.jacobian_evaluations;
    rep.solve_seconds = sr.total_seconds;
    for (double s : sr.precondition_seconds) rep.precondition_seconds += s;
    for (const auto& v : sr.inner_lsqr_counts)
      for (auto c : v) rep.lsqr_iterations += c;
    rep.residual_history = sr.residual_history;
    rep.termination = nls::termination_name(sr.termination);

    std::vector<double> f(sys.residuals());
    sys.residual(sr.final_u, f);
    rep.residual_norm = linalg::norm2(f);

    if (pb.has_exact()) {
      const auto pts = evaluation_points(pb, cfg.eval_grid);
      rep.eval_points = pts.size();
      if (pts.empty()) throw Error(ErrorCode::ZeroReference, "no interior evaluation point");
      const std::size_t d = static_cast<std::size_t>(pb.dim);
      std::vector<MultiIndex> orders{mi::V};
      for (std::size_t a = 0; a < d; ++a) {
        MultiIndex m;
        m.a[a] = 1;
        orders.push_back(m);
      }
      const auto num = sys.evaluate(sr.final_u, pts, orders);
      const std::size_t stride = d + 1;
      std::vector<double> ex(num.size());
      for (std::size_t p = 0; p < pts.size(); ++p) {
        const auto g = pb.exact_gradient(pts[p]);
        for (std::size_t c = 0; c < kc; ++c)
          for (std::size_t o = 0; o < stride; ++o) ex[(p * kc + c) * stride + o] = g[c][o];
      }
      for (std::size_t c = 0; c < kc; ++c) {
        std::vector<double> nv, ev, nh, eh;
        for (std::size_t p = 0; p < pts.size(); ++p) {
          const std::size_t base = (p * kc + c) * stride;
          nv.push_back(num[base]);
          ev.push_back(ex[base]);
          nh.insert(nh.end(), num.begin() + base, num.begin() + base + stride);
          eh.insert(eh.end(), ex.begin() + base, ex.begin() + base + stride);
        }
        rep.relative_l2[c] = relative_l2_error(nv, ev);
        rep.relative_h1[c] = relative_h1_error(nh, eh, stride);
      }
    }
    if (sr.termination == nls::Termination::line_search_failure) rep.status = "line_search_failure";
  } catch (const Error& e) {
    rep.status = error_code_name(e.code());
    std::clog << "experiment " << cfg.problem << " failed: " << e.what() << '\n';
  } catch (const std::bad_alloc&) {
    rep.status = "OutOfMemory";
    std::clog << "experiment " << cfg.problem << " failed: out of memory\n";
  }
  return rep;
}

std::vector<ErrorReport> run_sweep(const std::vector<ExperimentConfig>& configs,
                                   const std::vector<SolverKind>& compare) {
  std::vector<ErrorReport> rows;
  for (const auto& c : configs) {
    if (compare.empty()) {
      rows.push_back(run_experiment(c));
      continue;
    }
    const std::size_t first = rows.size();
    for (SolverKind s : compare) {
      ExperimentConfig cc = c;
      cc.solver = s;
      rows.push_back(run_experiment(cc));
    }
    auto& last = rows.back();
    if (compare.size() > 1 && rows[first].ok() && last.ok() && last.solve_seconds > 0.0)
      last.speedup = rows[first].solve_seconds / last.solve_seconds;
  }
  return rows;
}

std::string csv_header(int components, bool with_speedup) {
  std::ostringstream h;
  h << "problem,solver,Nx,Ny,Nz,Qx,Qy,Qz,J,seed,IT,NJ,assemble_s,solve_s,precond_s,residual";
  for (int c = 0; c < components; ++c) h << ",err_l2_c" << c;
  for (int c = 0; c < components; ++c) h << ",err_h1_c" << c;
  h << ",status";
  if (with_speedup) h << ",speedup";
  return h.str();
}

std::string csv_row(const ErrorReport& r, int components, bool with_speedup) {
  std::ostringstream o;
  o << std::setprecision(6);
  const auto& c = r.config;
  o << r.problem << ',' << solver_name(r.solver) << ',' << c.n[0] << ',' << c.n[1] << ',' << c.n[2] << ',' << c.q[0]
    << ',' << c.q[1] << ',' << c.q[2] << ',' << c.j << ',' << c.seed << ',' << r.iterations << ','
    << r.jacobian_evaluations << ',' << r.assemble_seconds << ',' << r.solve_seconds << ','
    << r.precondition_seconds << ',' << r.residual_norm;
  auto cell = [&](const std::vector<double>& v, int i) {
    o << ',';
    if (i < static_cast<int>(v.size()) && !std::isnan(v[i])) o << v[i];
  };
  for (int i = 0; i < components; ++i) cell(r.relative_l2, i);
  for (int i = 0; i < components; ++i) cell(r.relative_h1, i);
  o << ',' << r.status;
  if (with_speedup) {
    o << ',';
    if (r.speedup) o << *r.speedup;
  }
  return o.str();
}

void write_csv(std::ostream& out, const std::vector<ErrorReport>& rows) {
  int comps = 1;
  bool speed = false;
  for (const auto& r : rows) {
    comps = std::max(comps, static_cast<int>(r.relative_l2.size()));
    speed = speed || r.speedup.has_value();
  }
  out << csv_header(comps, speed) << '\n';
  for (const auto& r : rows) out << csv_row(r, comps, speed) << '\n';
}

void write_csv_file(const std::string& path, const std::vector<ErrorReport>& rows) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_csv(f, rows);
}

void write_plot_data(const std::string& path, const std::vector<ErrorReport>& rows) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  f << "problem,solver,J,component,err_l2,err_h1\n" << std::setprecision(10);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.relative_l2.size(); ++c)
      f << r.problem << ',' << solver_name(r.solver) << ',' << r.config.j << ',' << c << ',' << r.relative_l2[c]
        << ',' << r.relative_h1[c] << '\n';
}

}  // namespace rfm::bench
