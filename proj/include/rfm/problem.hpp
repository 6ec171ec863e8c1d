#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rfm/dual.hpp"
#include "rfm/geometry.hpp"

namespace rfm {

/// Partial derivative orders per coordinate, e.g. {2,0,0} is d^2/dx^2.
struct MultiIndex {
  std::array<int, 3> a{};
  constexpr MultiIndex() = default;
  constexpr MultiIndex(int x, int y, int z) : a{x, y, z} {}
  constexpr int order() const { return a[0] + a[1] + a[2]; }
  friend constexpr bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

namespace mi {
inline constexpr MultiIndex V{0, 0, 0};
inline constexpr MultiIndex X{1, 0, 0};
inline constexpr MultiIndex Y{0, 1, 0};
inline constexpr MultiIndex Z{0, 0, 1};
inline constexpr MultiIndex XX{2, 0, 0};
inline constexpr MultiIndex YY{0, 2, 0};
inline constexpr MultiIndex ZZ{0, 0, 2};
inline constexpr MultiIndex XY{1, 1, 0};
inline constexpr MultiIndex XZ{1, 0, 1};
inline constexpr MultiIndex YZ{0, 1, 1};
inline constexpr MultiIndex XXX{3, 0, 0};
inline constexpr MultiIndex YYY{0, 3, 0};
}  // namespace mi

/// Value and all partials up to order three of a scalar field at a point.
struct Jet3 {
  double v = 0.0;
  std::array<double, 3> g{};
  std::array<std::array<double, 3>, 3> h{};
  std::array<std::array<std::array<double, 3>, 3>, 3> t{};

  double d(const MultiIndex& m) const;
  /// Value with gradient, for composing flux expressions.
  Dual1 dual() const { return {v, g}; }
  /// Partial i with its gradient.
  Dual1 dual(int i) const { return {g[i], h[i]}; }
  static Jet3 from(const Dual3& r);
};

/// Boundary row: the `derivative` of `component` equals prescribed data.
struct BoundaryCondition {
  int component = 0;
  MultiIndex derivative{};
};

/// Box face (axis, side 0 = lower / 1 = upper) carrying a boundary group.
struct FaceCondition {
  int axis = 0;
  int side = 0;
  int group = 0;
};

/// One catalog entry. Interior operator works on "slots": the values at a point of
/// each component's partial derivatives listed in `slots`.
struct PdeProblem {
  std::string name;
  std::string description;
  int dim = 3;
  int components = 1;
  std::array<int, 3> axis_orders{2, 2, 2};
  std::vector<MultiIndex> slots;

  /// res[q] = P_q(slots) - 0 (no source); partials[(q*K + c)*S + s] = dP_q / d slot(c, s).
  /// `partials` may be null; when given it arrives zero-filled.
  using Operator = std::function<void(const geo::Point& x, const double* slot_values, double* res, double* partials)>;
  Operator interior_operator;

  std::vector<std::vector<BoundaryCondition>> boundary_groups;
  std::vector<FaceCondition> faces;
  int curved_group = -1;  // group applied on curved boundaries, -1 if none
  geo::Geometry geometry;
  double feature_range = 1.0;

  /// Exact solution jets per component; empty for problems without a closed form.
  std::function<std::vector<Jet3>(const geo::Point&)> exact;
  /// Values and gradients only: entries [c] = {u, u_0, u_1, u_2}.
  std::function<std::vector<std::array<double, 4>>(const geo::Point&)> exact_gradient;
  std::function<std::vector<double>(const geo::Point&)> source;
  std::function<double(int group, int condition, const geo::Point&)> boundary_value;

  bool has_exact() const { return static_cast<bool>(exact); }
  int slot_count() const { return static_cast<int>(slots.size()); }
  int max_axis_order() const;
  /// Exact jets, throwing NoExactSolution when absent.
  std::vector<Jet3> exact_jet(const geo::Point& p) const;
};

using ProblemParams = std::map<std::string, double>;

std::vector<std::string> list_problems();
/// Throws UnknownProblem for unknown names and ConfigError for unknown parameters.
PdeProblem make_problem(const std::string& name, const ProblemParams& params = {});

/// Source f(p) per component, from the operator applied to the exact solution.
std::vector<double> manufactured_source(const PdeProblem& problem, const geo::Point& p);
/// Slot vector [c*S + s] of the exact solution at p.
std::vector<double> exact_slot_values(const PdeProblem& problem, const geo::Point& p);
/// max_q |P_q(exact) - f_q| at p.
double source_consistency_residual(const PdeProblem& problem, const geo::Point& p);

}  // namespace rfm
