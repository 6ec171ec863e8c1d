#pragma once

#include <set>
#include <string>

#include "rfm/error.hpp"
#include "rfm/problem.hpp"

namespace rfm::catalog {

using geo::Point;

/// Parameter lookup that remembers which keys were consumed.
class Params {
 public:
  explicit Params(const ProblemParams& p) : p_(p) {}
  double get(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = p_.find(key);
    return it == p_.end() ? fallback : it->second;
  }
  /// Throws ConfigError naming the first key nobody asked for.
  void reject_unused(const std::string& problem) const {
    for (const auto& [k, v] : p_)
      if (!used_.count(k)) throw Error(ErrorCode::ConfigError, "unknown parameter '" + k + "' for " + problem);
  }

 private:
  const ProblemParams& p_;
  std::set<std::string> used_;
};

/// Wires exact, exact_gradient and source from a generic exact-solution functor
/// `f(std::array<S,3>) -> std::array<S,K>` and a natural-form operator
/// `nat(Point, std::vector<Jet3>) -> std::vector<double>`.
template <int K, class F, class Natural>
void attach_exact(PdeProblem& pb, F f, Natural nat) {
  pb.exact = [f](const Point& p) {
    const std::array<Dual3, 3> x{seed_dual3(p[0], 0), seed_dual3(p[1], 1), seed_dual3(p[2], 2)};
    const std::array<Dual3, K> r = f(x);
    std::vector<Jet3> out(K);
    for (int c = 0; c < K; ++c) out[c] = Jet3::from(r[c]);
    return out;
  };
  pb.exact_gradient = [f](const Point& p) {
    const std::array<Dual1, 3> x{seed_dual1(p[0], 0), seed_dual1(p[1], 1), seed_dual1(p[2], 2)};
    const std::array<Dual1, K> r = f(x);
    std::vector<std::array<double, 4>> out(K);
    for (int c = 0; c < K; ++c) out[c] = {r[c].v, r[c].d[0], r[c].d[1], r[c].d[2]};
    return out;
  };
  pb.source = [exact = pb.exact, nat](const Point& p) { return nat(p, exact(p)); };
}

/// div(coef(u, grad u) grad u) over the first n coordinates, from a jet.
template <class Coef>
double divergence_form(const Jet3& j, int n, Coef coef) {
  const std::array<Dual1, 3> grad{j.dual(0), j.dual(1), j.dual(2)};
  const Dual1 lam = coef(j.dual(), grad);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (lam * grad[i]).d[i];
  return s;
}

inline double laplacian(const Jet3& j, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += j.h[i][i];
  return s;
}

inline std::vector<BoundaryCondition> values_of(int components) {
  std::vector<BoundaryCondition> g;
  for (int c = 0; c < components; ++c) g.push_back({c, mi::V});
  return g;
}

/// Every face of a dim-dimensional box.
inline std::vector<FaceCondition> all_faces(int dim, int group) {
  std::vector<FaceCondition> f;
  for (int a = 0; a < dim; ++a)
    for (int s = 0; s < 2; ++s) f.push_back({a, s, group});
  return f;
}

/// Lateral faces x = lo/hi, y = lo/hi of a space-time box, plus t = lo with `initial_group`.
inline std::vector<FaceCondition> lateral_and_initial(int group, int initial_group) {
  auto f = all_faces(2, group);
  f.push_back({2, 0, initial_group});
  return f;
}

inline geo::Geometry box_geometry(int dim, std::array<geo::Interval, 3> box, bool space_time) {
  geo::Geometry g;
  g.dim = dim;
  g.box = box;
  g.space_time = space_time;
  return g;
}

// Builders, one per catalog entry.
PdeProblem cubic_elliptic_2d(Params&);
PdeProblem cubic_elliptic_3d(Params&);
PdeProblem quasilinear_elliptic_3d(Params&);
PdeProblem strongly_nonlinear_elliptic_3d(Params&);
PdeProblem helmholtz_cosh_3d(Params&);
PdeProblem diffusion_reaction_ball(Params&);
PdeProblem gray_scott_3d(Params&);
PdeProblem self_convergence_elliptic_3d(Params&);
PdeProblem allen_cahn_moving_hole(Params&);
PdeProblem klein_gordon_flowers(Params&);
PdeProblem rdc_advected_hole(Params&);
PdeProblem lotka_volterra_star(Params&);
PdeProblem nonlinear_diffusion_complex(Params&);
PdeProblem kdv_2d(Params&);
PdeProblem schrodinger_2d(Params&);
PdeProblem burgers_2d(Params&);
PdeProblem navier_stokes_2d(Params&);

}  // namespace rfm::catalog
