// Steady elliptic benchmarks on boxes and the unit ball.

#include <cmath>
#include <numbers>

#include "catalog_internal.hpp"

namespace rfm::catalog {

namespace {

using std::numbers::pi;

/// Slot layout shared by the semilinear problems: u, u_xx, u_yy[, u_zz].
std::vector<MultiIndex> value_and_pure_seconds(int dim) {
  std::vector<MultiIndex> s{mi::V, mi::XX, mi::YY};
  if (dim == 3) s.push_back(mi::ZZ);
  return s;
}

/// Slot layout u, grad u, pure second derivatives (3D).
const std::vector<MultiIndex> kQuasilinearSlots{mi::V, mi::X, mi::Y, mi::Z, mi::XX, mi::YY, mi::ZZ};

PdeProblem steady_box(int dim, int components) {
  PdeProblem pb;
  pb.dim = dim;
  pb.components = components;
  pb.axis_orders = {2, 2, dim == 3 ? 2 : 0};
  pb.geometry = box_geometry(dim, {geo::Interval{0, 1}, geo::Interval{0, 1}, geo::Interval{0, dim == 3 ? 1.0 : 0.0}},
                             false);
  pb.boundary_groups = {values_of(components)};
  pb.faces = all_faces(dim, 0);
  return pb;
}

/// -(1+u^2) lap u - 2u |grad u|^2 on slots u, u_x, u_y, u_z, u_xx, u_yy, u_zz, plus
/// `extra(u)` with derivative `dextra(u)` added to the value.
template <class Extra, class DExtra>
PdeProblem::Operator quasilinear_operator(Extra extra, DExtra dextra) {
  return [extra, dextra](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0];
    const double lap = s[4] + s[5] + s[6];
    const double g2 = s[1] * s[1] + s[2] * s[2] + s[3] * s[3];
    r[0] = -(1.0 + u * u) * lap - 2.0 * u * g2 + extra(u);
    if (!dr) return;
    dr[0] = -2.0 * u * lap - 2.0 * g2 + dextra(u);
    for (int i = 0; i < 3; ++i) {
      dr[1 + i] = -4.0 * u * s[1 + i];
      dr[4 + i] = -(1.0 + u * u);
    }
  };
}

}  // namespace

PdeProblem cubic_elliptic_3d(Params&) {
  PdeProblem pb = steady_box(3, 1);
  pb.description = "-lap u + u^3 = f on (0,1)^3, Dirichlet";
  pb.slots = value_and_pure_seconds(3);
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    r[0] = -(s[1] + s[2] + s[3]) + s[0] * s[0] * s[0];
    if (!dr) return;
    dr[0] = 3.0 * s[0] * s[0];
    dr[1] = dr[2] = dr[3] = -1.0;
  };
  attach_exact<1>(
      pb,
      [](const auto& x) {
        using std::sin;
        return std::array{sin(pi * x[0]) * sin(pi * x[1]) * sin(pi * x[2])};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        return std::vector<double>{-laplacian(j[0], 3) + j[0].v * j[0].v * j[0].v};
      });
  return pb;
}

PdeProblem cubic_elliptic_2d(Params&) {
  PdeProblem pb = steady_box(2, 1);
  pb.description = "-lap u + u^3 = f on (0,1)^2, Dirichlet";
  pb.slots = value_and_pure_seconds(2);
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    r[0] = -(s[1] + s[2]) + s[0] * s[0] * s[0];
    if (!dr) return;
    dr[0] = 3.0 * s[0] * s[0];
    dr[1] = dr[2] = -1.0;
  };
  attach_exact<1>(
      pb,
      [](const auto& x) {
        using std::sin;
        return std::array{sin(pi * x[0]) * sin(pi * x[1])};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        return std::vector<double>{-laplacian(j[0], 2) + j[0].v * j[0].v * j[0].v};
      });
  return pb;
}

PdeProblem quasilinear_elliptic_3d(Params&) {
  PdeProblem pb = steady_box(3, 1);
  pb.description = "-div((1+u^2) grad u) = f on (0,1)^3, Dirichlet";
  pb.slots = kQuasilinearSlots;
  pb.interior_operator = quasilinear_operator([](double) { return 0.0; }, [](double) { return 0.0; });
  attach_exact<1>(
      pb,
      [](const auto& x) {
        using std::cos;
        using std::sin;
        return std::array{(x[0] + x[1] + x[2]) * sin(pi * x[0]) * sin(pi * x[1]) * cos(pi * x[2])};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        return std::vector<double>{-divergence_form(j[0], 3, [](const Dual1& u, const auto&) { return 1.0 + u * u; })};
      });
  return pb;
}

PdeProblem strongly_nonlinear_elliptic_3d(Params&) {
  PdeProblem pb = steady_box(3, 1);
  pb.description = "-div((1+|grad u|^2) grad u) = f on (0,1)^3, Dirichlet";
  // Gradient, pure and mixed second derivatives.
  pb.slots = {mi::X, mi::Y, mi::Z, mi::XX, mi::YY, mi::ZZ, mi::XY, mi::XZ, mi::YZ};
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    const double* g = s;
    const double hm[3][3] = {{s[3], s[6], s[7]}, {s[6], s[4], s[8]}, {s[7], s[8], s[5]}};
    const double lam = 1.0 + g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    const double lap = s[3] + s[4] + s[5];
    double quad = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) quad += g[i] * g[k] * hm[i][k];
    r[0] = -lam * lap - 2.0 * quad;
    if (!dr) return;
    for (int k = 0; k < 3; ++k) {
      double hg = 0.0;
      for (int i = 0; i < 3; ++i) hg += hm[k][i] * g[i];
      dr[k] = -2.0 * g[k] * lap - 4.0 * hg;
      dr[3 + k] = -lam - 2.0 * g[k] * g[k];
    }
    dr[6] = -4.0 * g[0] * g[1];
    dr[7] = -4.0 * g[0] * g[2];
    dr[8] = -4.0 * g[1] * g[2];
  };
  attach_exact<1>(
      pb,
      [](const auto& x) {
        using std::exp;
        using std::sin;
        return std::array{sin(x[0] * (1.0 - x[0])) * sin(x[1] * (1.0 - x[1])) * exp(x[2] + 0.5)};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        return std::vector<double>{-divergence_form(j[0], 3, [](const Dual1&, const std::array<Dual1, 3>& g) {
          return 1.0 + g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
        })};
      });
  return pb;
}

PdeProblem helmholtz_cosh_3d(Params&) {
  PdeProblem pb = steady_box(3, 1);
  pb.description = "lap u - 100u + 10cosh(u) = f on (0,1)^3, Dirichlet";
  pb.slots = value_and_pure_seconds(3);
  pb.interior_operator = [](const Point&, const double* s, double* r, double* dr) {
    r[0] = s[1] + s[2] + s[3] - 100.0 * s[0] + 10.0 * std::cosh(s[0]);
    if (!dr) return;
    dr[0] = -100.0 + 10.0 * std::sinh(s[0]);
    dr[1] = dr[2] = dr[3] = 1.0;
  };
  attach_exact<1>(
      pb,
      [](const auto& x) {
        using std::sin;
        return std::array{(2.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * sin(pi * x[0]) * sin(pi * x[1]) *
                          sin(pi * x[2])};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        return std::vector<double>{laplacian(j[0], 3) - 100.0 * j[0].v + 10.0 * std::cosh(j[0].v)};
      });
  return pb;
}

PdeProblem diffusion_reaction_ball(Params&) {
  PdeProblem pb;
  pb.description = "-div((1+u^2) grad u) + u^3 - u + e^u = f on the unit ball, Dirichlet on the sphere";
  pb.dim = 3;
  pb.components = 1;
  pb.axis_orders = {2, 2, 2};
  pb.geometry = box_geometry(3, {geo::Interval{-1, 1}, geo::Interval{-1, 1}, geo::Interval{-1, 1}}, false);
  pb.geometry.excised.push_back(std::make_shared<geo::BallExterior>(30000));
  pb.boundary_groups = {values_of(1)};
  pb.curved_group = 0;
  pb.slots = kQuasilinearSlots;
  pb.interior_operator = quasilinear_operator([](double u) { return u * u * u - u + std::exp(u); },
                                              [](double u) { return 3.0 * u * u - 1.0 + std::exp(u); });
  attach_exact<1>(
      pb,
      [](const auto& x) {
        using std::sin;
        return std::array{(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * sin(pi * x[0]) * sin(pi * x[1]) *
                          sin(pi * x[2])};
      },
      [](const Point&, const std::vector<Jet3>& j) {
        const double u = j[0].v;
        const double div = divergence_form(j[0], 3, [](const Dual1& w, const auto&) { return 1.0 + w * w; });
        return std::vector<double>{-div + u * u * u - u + std::exp(u)};
      });
  return pb;
}

PdeProblem gray_scott_3d(Params& prm) {
  const double feed = prm.get("F", 0.060);
  const double kill = prm.get("k", 0.062);
  PdeProblem pb = steady_box(3, 2);
  pb.description = "steady Gray-Scott with diffusivities 1+u^2, 1+v^2 on (0,1)^3, Dirichlet";
  pb.slots = value_and_pure_seconds(3);
  // Slot block for v starts at 4; partials indexed (q*2 + c)*4 + s.
  pb.interior_operator = [feed, kill](const Point&, const double* s, double* r, double* dr) {
    const double u = s[0], lu = s[1] + s[2] + s[3];
    const double v = s[4], lv = s[5] + s[6] + s[7];
    r[0] = (1.0 + u * u) * lu - u * v * v + feed * (1.0 - u);
    r[1] = (1.0 + v * v) * lv + u * v * v - (feed + kill) * v;
    if (!dr) return;
    dr[0] = 2.0 * u * lu - v * v - feed;
    dr[1] = dr[2] = dr[3] = 1.0 + u * u;
    dr[4] = -2.0 * u * v;
    dr[8] = v * v;
    dr[12] = 2.0 * v * lv + 2.0 * u * v - (feed + kill);
    dr[13] = dr[14] = dr[15] = 1.0 + v * v;
  };
  attach_exact<2>(
      pb,
      [](const auto& x) {
        using std::exp;
        using std::sin;
        return std::array{sin(x[0] * (1.0 - x[0])) * sin(x[1] * (1.0 - x[1])) * exp(x[2]),
                          sin(pi * x[0]) * sin(pi * x[1]) * sin(pi * x[2])};
      },
      [feed, kill](const Point&, const std::vector<Jet3>& j) {
        const double u = j[0].v, v = j[1].v;
        return std::vector<double>{(1.0 + u * u) * laplacian(j[0], 3) - u * v * v + feed * (1.0 - u),
                                   (1.0 + v * v) * laplacian(j[1], 3) + u * v * v - (feed + kill) * v};
      });
  return pb;
}

PdeProblem self_convergence_elliptic_3d(Params&) {
  PdeProblem pb = steady_box(3, 1);
  pb.description = "-div((1+u^2) grad u) = 1 on (0,1)^3, u = 0 on the boundary; no closed form";
  pb.slots = kQuasilinearSlots;
  pb.interior_operator = quasilinear_operator([](double) { return 0.0; }, [](double) { return 0.0; });
  pb.source = [](const Point&) { return std::vector<double>{1.0}; };
  pb.boundary_value = [](int, int, const Point&) { return 0.0; };
  return pb;
}

}  // namespace rfm::catalog
