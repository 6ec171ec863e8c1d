// Space-time problems in (x, y, t) on perforated, moving or deforming domains.

#include <cmath>
#include <numbers>
#include <string>

#include "catalog_internal.hpp"

namespace rfm::catalog {

namespace {

using std::numbers::pi;

PdeProblem space_time_box(int components, geo::Interval x, geo::Interval y, geo::Interval t) {
  PdeProblem pb;
  pb.dim = 3;
  pb.components = components;
  pb.axis_orders = {2, 2, 1};
  pb.geometry = box_geometry(3, {x, y, t}, true);
  pb.boundary_groups = {values_of(components)};
  pb.faces = lateral_and_initial(0, 0);
  pb.curved_group = 0;
  return pb;
}

/// Slot layout u, u_t, u_xx, u_yy.
const std::vector<MultiIndex> kParabolicSlots{mi::V, mi::Z, mi::XX, mi::YY};
/// Slot layout u, u_x, u_y, u_t, u_xx, u_yy.
const std::vector<MultiIndex> kTransportSlots{mi::V, mi::X, mi::Y, mi::Z, mi::XX, mi::YY};

geo::Vec2 swirl(const geo::Vec2& p, double t) {
  const double s = std::cos(pi * t / 10.0);
  const double sx = std::sin(pi * p[0]), sy = std::sin(pi * p[1]);
  return {s * sx * sx * std::sin(2.0 * pi * p[1]), -s * sy * sy * std::sin(2.0 * pi * p[0])};
}

}  // namespace

PdeProblem allen_cahn_moving_hole(Params&) {
  PdeProblem pb = space_time_box(1, {0, 1}, {0, 1}, {0, 1});
  pb.description = "u_t - lap u + u^3 - u = f around a circular hole moving on a circle";
  pb.geometry.excised.push_back(std::make_shared<geo::Disk>(
      [](double t) { return geo::Vec2{0.5 + 0.2 * std::cos(pi * t), 0.5 + 0.2 * std::sin(pi * t)}; }, 0.1));
  pb.slots = kParabolicSlots;
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0];
    r[0] = s[1] - (s[2] + s[3]) + u * u * u - u;
    if (!dr) return;
    dr[0] = 3.0 * u * u - 1.0;
    dr[1] = 1.0;
    dr[2] = dr[3] = -1.0;
  };
  attach_exact<1>(
      pb,
      [](const auto& x) {
        using std::exp;
        using std::sin;
        return std::array{2.0 * sin(x[0] * (1.0 - x[0])) * sin(x[1] * (1.0 - x[1])) * exp(x[2] + 1.0)};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        const double u = j[0].v;
        return std::vector<double>{j[0].g[2] - laplacian(j[0], 2) + u * u * u - u};
      });
  return pb;
}

PdeProblem klein_gordon_flowers(Params& prm) {
  const double beta = prm.get("beta", 1.0);
  PdeProblem pb = space_time_box(1, {-1, 1}, {-1, 1}, {0, 2});
  pb.description = "u_tt - lap u + u + beta u^2 = f around two flower obstacles that merge and split";
  pb.axis_orders = {2, 2, 2};
  pb.boundary_groups = {values_of(1), {{0, mi::V}, {0, mi::Z}}};
  pb.faces = lateral_and_initial(0, 1);
  auto petal = [](double th) { return 0.3 + 0.1 * std::cos(4.0 * th); };
  auto dpetal = [](double th) { return -0.4 * std::sin(4.0 * th); };
  pb.geometry.excised.push_back(std::make_shared<geo::PolarCurve>(
      [](double t) { return geo::Vec2{0.0, 0.5 - 0.4 * t}; }, petal, dpetal));
  pb.geometry.excised.push_back(std::make_shared<geo::PolarCurve>(
      [](double t) { return geo::Vec2{0.0, -0.5 + 0.4 * t}; }, petal, dpetal));
  pb.slots = {mi::V, mi::XX, mi::YY, mi::ZZ};
  pb.interior_operator = [beta](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0];
    r[0] = s[3] - (s[1] + s[2]) + u + beta * u * u;
    if (!dr) return;
    dr[0] = 1.0 + 2.0 * beta * u;
    dr[1] = dr[2] = -1.0;
    dr[3] = 1.0;
  };
  attach_exact<1>(
      pb, [](const auto& x) { return std::array{(x[0] + x[1] + x[2] + 2.0) / (1.0 + x[0] * x[0] + x[1] * x[1])}; },
      [beta](const Point&, const std::vector<Jet3>& j) {
        const double u = j[0].v;
        return std::vector<double>{j[0].h[2][2] - laplacian(j[0], 2) + u + beta * u * u};
      });
  return pb;
}

PdeProblem rdc_advected_hole(Params& prm) {
  const double alpha = prm.get("alpha", 1.0);
  const double beta = prm.get("beta", 1.0);
  const auto count = static_cast<std::size_t>(prm.get("boundary_points", 2000.0));
  if (count < 3) throw Error(ErrorCode::ConfigError, "advected hole needs at least 3 boundary points");
  PdeProblem pb = space_time_box(2, {0, 1}, {0, 1}, {0, 1});
  pb.description = "advection-reaction-diffusion pair around a hole deformed by a swirling flow";
  std::vector<geo::Vec2> ring(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double th = 2.0 * pi * static_cast<double>(i) / static_cast<double>(count);
    ring[i] = {0.5 + 0.15 * std::cos(th), 0.75 + 0.15 * std::sin(th)};
  }
  pb.geometry.excised.push_back(
      std::make_shared<geo::AdvectedPolygon>(geo::BoundaryTrajectory(std::move(ring), swirl, 1e-10)));
  pb.slots = kTransportSlots;
  pb.interior_operator = [alpha, beta](const Point& x, const double* s, double* r, double* dr) {
    const geo::Vec2 w = swirl({x[0], x[1]}, x[2]);
    const double u = s[0], v = s[6];
    const double eu = std::exp(u);
    r[0] = s[3] + w[0] * s[1] + w[1] * s[2] - (s[4] + s[5]) + alpha * u * v;
    r[1] = s[9] + w[0] * s[7] + w[1] * s[8] - (s[10] + s[11]) + beta * eu * v * v;
    if (!dr) return;
    // (q*2 + c)*6 + s
    for (int q = 0; q < 2; ++q) {
      double* d = dr + (q * 2 + q) * 6;
      d[1] = w[0];
      d[2] = w[1];
      d[3] = 1.0;
      d[4] = d[5] = -1.0;
    }
    dr[0] = alpha * v;
    dr[6] = alpha * u;
    dr[12] = beta * eu * v * v;
    dr[18] = 2.0 * beta * eu * v;
  };
  attach_exact<2>(
      pb,
      [](const auto& x) {
        using std::exp;
        using std::sin;
        return std::array{sin(x[0] * (1.0 - x[0])) * sin(x[1] * (1.0 - x[1])) * exp(x[2]),
                          sin(pi * x[0]) * sin(pi * x[1]) * sin(pi * x[2])};
      },
      [alpha, beta](const Point& x, const std::vector<Jet3>& j) {
        const geo::Vec2 w = swirl({x[0], x[1]}, x[2]);
        const double u = j[0].v, v = j[1].v;
        auto transport = [&](const Jet3& f) { return f.g[2] + w[0] * f.g[0] + w[1] * f.g[1] - laplacian(f, 2); };
        return std::vector<double>{transport(j[0]) + alpha * u * v, transport(j[1]) + beta * std::exp(u) * v * v};
      });
  return pb;
}

PdeProblem lotka_volterra_star(Params&) {
  PdeProblem pb = space_time_box(2, {-1, 1}, {-1, 1}, {0, 2});
  pb.description = "diffusive Lotka-Volterra pair on a square with a 20-petal star removed";
  const double c = 0.02 * std::sqrt(5.0);
  pb.geometry.excised.push_back(std::make_shared<geo::PolarCurve>(
      [c](double) { return geo::Vec2{c, c}; }, [](double th) { return 0.4 + 0.2 * std::sin(20.0 * th); },
      [](double th) { return 4.0 * std::cos(20.0 * th); }));
  pb.slots = kParabolicSlots;
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0], v = s[4];
    r[0] = s[1] - (s[2] + s[3]) - u + u * v;
    r[1] = s[5] - (s[6] + s[7]) + v - u * v;
    if (!dr) return;
    // (q*2 + c)*4 + s
    dr[0] = -1.0 + v;
    dr[1] = 1.0;
    dr[2] = dr[3] = -1.0;
    dr[4] = u;
    dr[8] = -v;
    dr[12] = 1.0 - u;
    dr[13] = 1.0;
    dr[14] = dr[15] = -1.0;
  };
  attach_exact<2>(
      pb,
      [](const auto& x) {
        using std::exp;
        using std::sin;
        return std::array{sin(pi * x[0]) * sin(pi * x[1]) * exp(x[2]),
                          (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + 2.0) / (x[2] + 1.0)};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        const double u = j[0].v, v = j[1].v;
        return std::vector<double>{j[0].g[2] - laplacian(j[0], 2) - u + u * v,
                                   j[1].g[2] - laplacian(j[1], 2) + v - u * v};
      });
  return pb;
}

PdeProblem nonlinear_diffusion_complex(Params& prm) {
  PdeProblem pb = space_time_box(1, {1.5, 2.5}, {1.0, 2.0}, {0, 1});
  pb.description = "u_t - div((1+u^2) grad u) = f on a square with three holes and four inclusions";
  // Default circles: holes 0 and 1 leave a 5e-4 gap whose midpoint is near (1.935, 1.78).
  struct Circle {
    double x, y, r;
  };
  const Circle holes[3] = {{1.8, 1.6, 0.225}, {1.9953, 1.8604, 0.1}, {2.25, 1.3, 0.12}};
  const Circle incl[4] = {{1.8, 1.6, 0.08}, {2.25, 1.3, 0.05}, {1.62, 1.45, 0.07}, {2.08, 1.9, 0.05}};
  auto add = [&](const char* prefix, int i, const Circle& d, auto& list) {
    const std::string k = prefix + std::to_string(i) + "_";
    list.push_back(std::make_shared<geo::Disk>(geo::Vec2{prm.get(k + "x", d.x), prm.get(k + "y", d.y)},
                                               prm.get(k + "r", d.r)));
  };
  for (int i = 0; i < 3; ++i) add("hole", i, holes[i], pb.geometry.excised);
  for (int i = 0; i < 4; ++i) add("incl", i, incl[i], pb.geometry.inclusions);
  pb.slots = kTransportSlots;
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0];
    const double lap = s[4] + s[5];
    const double g2 = s[1] * s[1] + s[2] * s[2];
    r[0] = s[3] - (1.0 + u * u) * lap - 2.0 * u * g2;
    if (!dr) return;
    dr[0] = -2.0 * u * lap - 2.0 * g2;
    dr[1] = -4.0 * u * s[1];
    dr[2] = -4.0 * u * s[2];
    dr[3] = 1.0;
    dr[4] = dr[5] = -(1.0 + u * u);
  };
  attach_exact<1>(
      pb,
      [](const auto& x) {
        using std::cos;
        using std::exp;
        using std::sin;
        using std::tanh;
        return std::array{2.0 * (x[0] + x[1] + x[2]) / (1.0 + x[0] * x[0] + x[1] * x[1]) *
                          (tanh(sin(pi * x[0]) * cos(pi * x[1]) * exp(-x[2])) + 1.0)};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        const double div = divergence_form(j[0], 2, [](const Dual1& u, const auto&) { return 1.0 + u * u; });
        return std::vector<double>{j[0].g[2] - div};
      });
  return pb;
}

}  // namespace rfm::catalog
