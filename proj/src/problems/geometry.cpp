#include "rfm/geometry.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "rfm/error.hpp"

namespace rfm::geo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec2 unit(double x, double y) {
  const double n = std::hypot(x, y);
  return {x / n, y / n};
}

}  // namespace

Disk::Disk(Vec2 center, double radius) : Disk(Center([center](double) { return center; }), radius) {}

Disk::Disk(Center center, double radius) : center_(std::move(center)), radius_(radius) {}

double Disk::level(const Point& p) const {
  const Vec2 c = center_(p[2]);
  return std::hypot(p[0] - c[0], p[1] - c[1]) - radius_;
}

std::vector<BoundarySample> Disk::sample(double t, std::size_t count) const {
  const Vec2 c = center_(t);
  std::vector<BoundarySample> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
    const double cs = std::cos(th), sn = std::sin(th);
    out[i].p = {c[0] + radius_ * cs, c[1] + radius_ * sn, t};
    out[i].normal = {cs, sn, 0.0};
  }
  return out;
}

PolarCurve::PolarCurve(Disk::Center center, Radius r, Radius dr)
    : center_(std::move(center)), r_(std::move(r)), dr_(std::move(dr)) {}

double PolarCurve::level(const Point& p) const {
  const Vec2 c = center_(p[2]);
  const double dx = p[0] - c[0], dy = p[1] - c[1];
  return std::hypot(dx, dy) - r_(std::atan2(dy, dx));
}

std::vector<BoundarySample> PolarCurve::sample(double t, std::size_t count) const {
  const Vec2 c = center_(t);
  std::vector<BoundarySample> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
    const double cs = std::cos(th), sn = std::sin(th);
    const double r = r_(th), dr = dr_(th);
    out[i].p = {c[0] + r * cs, c[1] + r * sn, t};
    const Vec2 n = unit(dr * sn + r * cs, -(dr * cs - r * sn));
    out[i].normal = {n[0], n[1], 0.0};
  }
  return out;
}

double BallExterior::level(const Point& p) const { return 1.0 - std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); }

std::vector<BoundarySample> BallExterior::sample(double, std::size_t count) const {
  auto pts = fibonacci_sphere(count);
  std::vector<BoundarySample> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].p = pts[i];
    out[i].normal = {-pts[i][0], -pts[i][1], -pts[i][2]};  // into the ball
  }
  return out;
}

std::vector<Point> fibonacci_sphere(std::size_t n) {
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    pts[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return pts;
}

BoundaryTrajectory::BoundaryTrajectory(std::vector<Vec2> initial, Velocity w, double tolerance)
    : initial_(std::move(initial)), w_(std::move(w)), tol_(tolerance) {}

std::vector<Vec2> BoundaryTrajectory::advect(double t) const {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;
  if (t < 0.0) throw Error(ErrorCode::IntegrationFailure, "negative advection time");
  const std::size_t n = initial_.size();
  State x(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    x[2 * i] = initial_[i][0];
    x[2 * i + 1] = initial_[i][1];
  }
  if (t > 0.0) {
    auto rhs = [this, n](const State& s, State& ds, double time) {
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 v = w_({s[2 * i], s[2 * i + 1]}, time);
        ds[2 * i] = v[0];
        ds[2 * i + 1] = v[1];
      }
    };
    try {
      auto stepper = ode::make_controlled(tol_, tol_, ode::runge_kutta_dopri5<State>());
      ode::integrate_adaptive(stepper, rhs, x, 0.0, t, std::min(t, 1e-3));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::IntegrationFailure, e.what());
    }
    for (double v : x)
      if (!std::isfinite(v)) throw Error(ErrorCode::IntegrationFailure, "trajectory left the finite range");
  }
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {x[2 * i], x[2 * i + 1]};
  return out;
}

AdvectedPolygon::AdvectedPolygon(BoundaryTrajectory traj) : traj_(std::move(traj)) {}

const std::vector<Vec2>& AdvectedPolygon::vertices(double t) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(t);
  if (it == cache_.end())
    it = cache_.emplace(t, std::make_unique<std::vector<Vec2>>(traj_.advect(t))).first;
  return *it->second;
}

double polygon_signed_distance(const std::vector<Vec2>& poly, const Vec2& q) {
  const std::size_t n = poly.size();
  double best = INFINITY;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[j];
    const Vec2& b = poly[i];
    const double ex = b[0] - a[0], ey = b[1] - a[1];
    const double len2 = ex * ex + ey * ey;
    double s = len2 > 0.0 ? ((q[0] - a[0]) * ex + (q[1] - a[1]) * ey) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    best = std::min(best, std::hypot(q[0] - a[0] - s * ex, q[1] - a[1] - s * ey));
    if ((a[1] > q[1]) != (b[1] > q[1]) && q[0] < a[0] + (q[1] - a[1]) * ex / ey) inside = !inside;
  }
  return inside ? -best : best;
}

double AdvectedPolygon::level(const Point& p) const {
  return polygon_signed_distance(vertices(p[2]), {p[0], p[1]});
}

std::vector<BoundarySample> AdvectedPolygon::sample(double t, std::size_t count) const {
  const auto& v = vertices(t);
  const std::size_t n = v.size();
  count = std::min(count, n);
  std::vector<BoundarySample> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = k * n / count;
    const Vec2& prev = v[(i + n - 1) % n];
    const Vec2& next = v[(i + 1) % n];
    const Vec2 nrm = unit(next[1] - prev[1], -(next[0] - prev[0]));  // counter-clockwise orientation
    out[k].p = {v[i][0], v[i][1], t};
    out[k].normal = {nrm[0], nrm[1], 0.0};
  }
  return out;
}

const char* point_class_name(PointClass c) {
  switch (c) {
    case PointClass::interior: return "interior";
    case PointClass::excluded: return "excluded";
    case PointClass::on_boundary: return "on_boundary";
  }
  return "unknown";
}

PointClass Geometry::classify(const Point& p) const {
  bool removed = false;
  bool near = false;
  for (const auto& r : excised) {
    const double l = r->level(p);
    removed = removed || l < -kLevelTolerance;
    near = near || std::abs(l) <= kLevelTolerance;
  }
  bool added = false;
  for (const auto& r : inclusions) {
    const double l = r->level(p);
    added = added || l <= kLevelTolerance;
    near = near || std::abs(l) <= kLevelTolerance;
  }
  if (removed && !added) return PointClass::excluded;
  return near ? PointClass::on_boundary : PointClass::interior;
}

std::vector<BoundarySample> Geometry::sample_boundary(double t) const {
  constexpr double kOffset = 1e-6;
  std::vector<BoundarySample> out;
  auto take = [&](const std::vector<std::shared_ptr<const Region>>& regions, int offset) {
    for (std::size_t r = 0; r < regions.size(); ++r) {
      const std::size_t count = boundary_points > 0 ? boundary_points : regions[r]->default_count();
      for (auto& s : regions[r]->sample(t, count)) {
        bool in_box = true;
        for (int a = 0; a < dim; ++a) {
          if (space_time && a == dim - 1) continue;
          in_box = in_box && s.p[a] >= box[a].lo && s.p[a] <= box[a].hi;
        }
        if (!in_box) continue;
        Point plus = s.p, minus = s.p;
        for (int a = 0; a < 3; ++a) {
          plus[a] += kOffset * s.normal[a];
          minus[a] -= kOffset * s.normal[a];
        }
        if (member(plus) == member(minus)) continue;
        s.region = offset + static_cast<int>(r);
        out.push_back(s);
      }
    }
  };
  take(excised, 0);
  take(inclusions, static_cast<int>(excised.size()));
  return out;
}

std::vector<BoundarySample> Geometry::sample_curved_boundary() const {
  if (!space_time) return sample_boundary(0.0);
  const Interval& ti = box[static_cast<std::size_t>(dim - 1)];
  std::vector<BoundarySample> out;
  const std::size_t slices = std::max<std::size_t>(time_slices, 1);
  for (std::size_t k = 0; k < slices; ++k) {
    const double t =
        slices == 1 ? ti.lo : ti.lo + (ti.hi - ti.lo) * static_cast<double>(k) / static_cast<double>(slices - 1);
    auto part = sample_boundary(t);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace rfm::geo
