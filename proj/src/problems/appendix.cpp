// Space-time problems on the unit cube (x, y, t): dispersive, Schroedinger and flow equations.

#include <cmath>
#include <complex>
#include <numbers>

#include "catalog_internal.hpp"

namespace rfm::catalog {

namespace {

using std::numbers::pi;

const std::vector<MultiIndex> kFlowSlots{mi::V, mi::X, mi::Y, mi::Z, mi::XX, mi::YY};

PdeProblem unit_space_time(int components) {
  PdeProblem pb;
  pb.dim = 3;
  pb.components = components;
  pb.axis_orders = {2, 2, 1};
  pb.geometry = box_geometry(3, {geo::Interval{0, 1}, geo::Interval{0, 1}, geo::Interval{0, 1}}, true);
  pb.boundary_groups = {values_of(components)};
  pb.faces = lateral_and_initial(0, 0);
  return pb;
}

}  // namespace

PdeProblem kdv_2d(Params&) {
  PdeProblem pb = unit_space_time(1);
  pb.description = "u_t - u u_x - u u_y + u_xxx + u_yyy = f with derivative data on x = 0 and y = 0";
  pb.axis_orders = {3, 3, 1};
  pb.boundary_groups = {{{0, mi::V}, {0, mi::X}}, {{0, mi::V}, {0, mi::Y}}, values_of(1)};
  pb.faces = {{0, 0, 0}, {1, 0, 1}, {0, 1, 2}, {1, 1, 2}, {2, 0, 2}};
  pb.slots = {mi::V, mi::X, mi::Y, mi::Z, mi::XXX, mi::YYY};
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0];
    r[0] = s[3] - u * s[1] - u * s[2] + s[4] + s[5];
    if (!dr) return;
    dr[0] = -s[1] - s[2];
    dr[1] = dr[2] = -u;
    dr[3] = dr[4] = dr[5] = 1.0;
  };
  attach_exact<1>(
      pb, [](const auto& x) { return std::array{10.0 - (x[0] * x[0] * x[0] + x[1] * x[1] * x[1] + x[2] * x[2] * x[2])}; },
      [](const Point&, const std::vector<Jet3>& j) {
        const Jet3& u = j[0];
        return std::vector<double>{u.g[2] - u.v * u.g[0] - u.v * u.g[1] + u.t[0][0][0] + u.t[1][1][1]};
      });
  return pb;
}

PdeProblem schrodinger_2d(Params&) {
  PdeProblem pb = unit_space_time(2);
  pb.description = "i h_t + lap h / 2 + |h|^2 h = f for h = u + iv, split into real and imaginary rows";
  pb.slots = {mi::V, mi::Z, mi::XX, mi::YY};
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0], v = s[4];
    const double m = u * u + v * v;
    r[0] = -s[5] + 0.5 * (s[2] + s[3]) + m * u;
    r[1] = s[1] + 0.5 * (s[6] + s[7]) + m * v;
    if (!dr) return;
    // (q*2 + c)*4 + s
    dr[0] = 3.0 * u * u + v * v;
    dr[2] = dr[3] = 0.5;
    dr[4] = 2.0 * u * v;
    dr[5] = -1.0;
    dr[8] = 2.0 * u * v;
    dr[9] = 1.0;
    dr[12] = u * u + 3.0 * v * v;
    dr[14] = dr[15] = 0.5;
  };
  attach_exact<2>(
      pb,
      [](const auto& x) {
        using std::exp;
        using std::sin;
        auto c = [](const auto& a) { return a * a * a; };
        return std::array{c(x[0] - 1.0) + c(x[1] - 1.0) + c(x[2] - 1.0),
                          2.0 * sin(x[0] * (1.0 - x[0])) * sin(x[1] * (1.0 - x[1])) * exp(x[2])};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        using C = std::complex<double>;
        const C h(j[0].v, j[1].v);
        const C ht(j[0].g[2], j[1].g[2]);
        const C lap(laplacian(j[0], 2), laplacian(j[1], 2));
        const C res = C(0.0, 1.0) * ht + 0.5 * lap + std::norm(h) * h;
        return std::vector<double>{res.real(), res.imag()};
      });
  return pb;
}

PdeProblem burgers_2d(Params& prm) {
  const double re = prm.get("Re", 100.0);
  if (!(re > 0.0)) throw Error(ErrorCode::ConfigError, "Re must be positive");
  const double nu = 1.0 / re;
  PdeProblem pb = unit_space_time(2);
  pb.description = "coupled viscous Burgers equations with a travelling front, Dirichlet everywhere";
  pb.slots = kFlowSlots;
  pb.interior_operator = [nu](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0], v = s[6];
    r[0] = s[3] + u * s[1] + v * s[2] - nu * (s[4] + s[5]);
    r[1] = s[9] + u * s[7] + v * s[8] - nu * (s[10] + s[11]);
    if (!dr) return;
    // (q*2 + c)*6 + s
    dr[0] = s[1];
    dr[1] = u;
    dr[2] = v;
    dr[3] = 1.0;
    dr[4] = dr[5] = -nu;
    dr[6] = s[2];
    dr[12] = s[7];
    dr[18] = s[8];
    dr[19] = u;
    dr[20] = v;
    dr[21] = 1.0;
    dr[22] = dr[23] = -nu;
  };
  attach_exact<2>(
      pb,
      [re](const auto& x) {
        using std::exp;
        const auto front = 1.0 / (4.0 * (1.0 + exp((-4.0 * x[0] + 4.0 * x[1] - x[2]) * (re / 32.0))));
        return std::array{0.75 - front, 0.75 + front};
      },
      [nu](const Point&, const std::vector<Jet3>& j) {
        std::vector<double> out(2);
        for (int q = 0; q < 2; ++q)
          out[q] = j[q].g[2] + j[0].v * j[q].g[0] + j[1].v * j[q].g[1] - nu * laplacian(j[q], 2);
        return out;
      });
  return pb;
}

PdeProblem navier_stokes_2d(Params&) {
  PdeProblem pb = unit_space_time(3);
  pb.description = "incompressible Navier-Stokes (u, v, p) with a decaying vortex solution, Dirichlet everywhere";
  pb.slots = kFlowSlots;
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    const double* u = s;
    const double* v = s + 6;
    const double* p = s + 12;
    r[0] = u[3] + u[0] * u[1] + v[0] * u[2] + p[1] - (u[4] + u[5]);
    r[1] = v[3] + u[0] * v[1] + v[0] * v[2] + p[2] - (v[4] + v[5]);
    r[2] = u[1] + v[2];
    if (!dr) return;
    // (q*3 + c)*6 + s
    dr[0] = u[1];
    dr[1] = u[0];
    dr[2] = v[0];
    dr[3] = 1.0;
    dr[4] = dr[5] = -1.0;
    dr[6] = u[2];
    dr[13] = 1.0;
    dr[18] = v[1];
    dr[24] = v[2];
    dr[25] = u[0];
    dr[26] = v[0];
    dr[27] = 1.0;
    dr[28] = dr[29] = -1.0;
    dr[32] = 1.0;
    dr[37] = 1.0;
    dr[44] = 1.0;
  };
  attach_exact<3>(
      pb,
      [](const auto& x) {
        using std::cos;
        using std::exp;
        using std::sin;
        const auto decay = exp(-2.0 * pi * pi * x[2]);
        return std::array{-cos(pi * x[0]) * sin(pi * x[1]) * decay, sin(pi * x[0]) * cos(pi * x[1]) * decay,
                          -(cos(2.0 * pi * x[0]) + cos(2.0 * pi * x[1])) / 4.0 * decay * decay};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        const Jet3 &u = j[0], &v = j[1], &p = j[2];
        return std::vector<double>{u.g[2] + u.v * u.g[0] + v.v * u.g[1] + p.g[0] - laplacian(u, 2),
                                   v.g[2] + u.v * v.g[0] + v.v * v.g[1] + p.g[1] - laplacian(v, 2),
                                   u.g[0] + v.g[1]};
      });
  return pb;
}

}  // namespace rfm::catalog
