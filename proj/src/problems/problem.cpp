#include <algorithm>
#include <cmath>
#include <utility>

#include "catalog_internal.hpp"

namespace rfm {

double Jet3::d(const MultiIndex& m) const {
  std::array<int, 3> axes{};
  int n = 0;
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < m.a[a]; ++k) {
      if (n == 3) throw Error(ErrorCode::OrderTooHigh, "jet holds derivatives up to order 3");
      axes[n++] = a;
    }
  switch (n) {
    case 0: return v;
    case 1: return g[axes[0]];
    case 2: return h[axes[0]][axes[1]];
    default: return t[axes[0]][axes[1]][axes[2]];
  }
}

Jet3 Jet3::from(const Dual3& r) {
  Jet3 j;
  j.v = r.v.v.v;
  for (int i = 0; i < 3; ++i) {
    j.g[i] = r.d[i].v.v;
    for (int k = 0; k < 3; ++k) {
      j.h[i][k] = r.d[i].d[k].v;
      for (int l = 0; l < 3; ++l) j.t[i][k][l] = r.d[i].d[k].d[l];
    }
  }
  return j;
}

int PdeProblem::max_axis_order() const { return *std::max_element(axis_orders.begin(), axis_orders.begin() + dim); }

std::vector<Jet3> PdeProblem::exact_jet(const geo::Point& p) const {
  if (!exact) throw Error(ErrorCode::NoExactSolution, name + " has no closed-form solution");
  return exact(p);
}

namespace {

using Builder = PdeProblem (*)(catalog::Params&);

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> r{
      {"cubic_elliptic_2d", catalog::cubic_elliptic_2d},
      {"cubic_elliptic_3d", catalog::cubic_elliptic_3d},
      {"quasilinear_elliptic_3d", catalog::quasilinear_elliptic_3d},
      {"strongly_nonlinear_elliptic_3d", catalog::strongly_nonlinear_elliptic_3d},
      {"helmholtz_cosh_3d", catalog::helmholtz_cosh_3d},
      {"diffusion_reaction_ball", catalog::diffusion_reaction_ball},
      {"gray_scott_3d", catalog::gray_scott_3d},
      {"allen_cahn_moving_hole", catalog::allen_cahn_moving_hole},
      {"klein_gordon_flowers", catalog::klein_gordon_flowers},
      {"rdc_advected_hole", catalog::rdc_advected_hole},
      {"lotka_volterra_star", catalog::lotka_volterra_star},
      {"nonlinear_diffusion_complex", catalog::nonlinear_diffusion_complex},
      {"self_convergence_elliptic_3d", catalog::self_convergence_elliptic_3d},
      {"kdv_2d", catalog::kdv_2d},
      {"schrodinger_2d", catalog::schrodinger_2d},
      {"burgers_2d", catalog::burgers_2d},
      {"navier_stokes_2d", catalog::navier_stokes_2d},
  };
  return r;
}

}  // namespace

std::vector<std::string> list_problems() {
  std::vector<std::string> names;
  for (const auto& [n, b] : registry()) names.push_back(n);
  return names;
}

PdeProblem make_problem(const std::string& name, const ProblemParams& params) {
  const auto& reg = registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == name; });
  if (it == reg.end()) throw Error(ErrorCode::UnknownProblem, "unknown problem '" + name + "'");
  catalog::Params prm(params);
  PdeProblem pb = it->second(prm);
  pb.name = name;
  pb.feature_range = prm.get("feature_range", pb.feature_range);
  const double bp = prm.get("boundary_points", 0.0);
  const double ts = prm.get("time_slices", static_cast<double>(pb.geometry.time_slices));
  prm.reject_unused(name);
  if (!(pb.feature_range > 0.0)) throw Error(ErrorCode::ConfigError, "feature_range must be positive");
  if (bp < 0.0 || ts < 1.0) throw Error(ErrorCode::ConfigError, "boundary sampling counts must be positive");
  pb.geometry.boundary_points = static_cast<std::size_t>(bp);
  pb.geometry.time_slices = static_cast<std::size_t>(ts);

  if (!pb.boundary_value) {
    if (!pb.exact) throw Error(ErrorCode::NoExactSolution, name + " needs explicit boundary data");
    pb.boundary_value = [groups = pb.boundary_groups, exact = pb.exact](int g, int c, const geo::Point& p) {
      const BoundaryCondition& bc = groups.at(static_cast<std::size_t>(g)).at(static_cast<std::size_t>(c));
      return exact(p)[static_cast<std::size_t>(bc.component)].d(bc.derivative);
    };
  }
  return pb;
}

std::vector<double> manufactured_source(const PdeProblem& problem, const geo::Point& p) { return problem.source(p); }

std::vector<double> exact_slot_values(const PdeProblem& problem, const geo::Point& p) {
  const auto jets = problem.exact_jet(p);
  const int s_count = problem.slot_count();
  std::vector<double> s(static_cast<std::size_t>(problem.components * s_count));
  for (int c = 0; c < problem.components; ++c)
    for (int k = 0; k < s_count; ++k) s[static_cast<std::size_t>(c * s_count + k)] = jets[c].d(problem.slots[k]);
  return s;
}

double source_consistency_residual(const PdeProblem& problem, const geo::Point& p) {
  const auto s = exact_slot_values(problem, p);
  std::vector<double> res(static_cast<std::size_t>(problem.components));
  problem.interior_operator(p, s.data(), res.data(), nullptr);
  const auto f = problem.source(p);
  double worst = 0.0;
  for (int q = 0; q < problem.components; ++q) worst = std::max(worst, std::abs(res[q] - f[q]));
  return worst;
}

}  // namespace rfm
