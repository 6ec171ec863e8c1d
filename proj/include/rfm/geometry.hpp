#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace rfm::geo {

/// Up to three coordinates; space-time problems store t last.
using Point = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct BoundarySample {
  Point p{};
  Point normal{};  // unit, pointing out of the region
  int region = -1;
};

/// Tolerance separating "on a level set" from interior/excluded.
inline constexpr double kLevelTolerance = 1e-10;

/// A closed region described by a level function, negative strictly inside.
class Region {
 public:
  virtual ~Region() = default;
  virtual double level(const Point& p) const = 0;
  /// `count` boundary points at time t (ignored by static regions).
  virtual std::vector<BoundarySample> sample(double t, std::size_t count) const = 0;
  virtual std::size_t default_count() const { return 2000; }
};

/// Disk in the (x, y) plane with a time-dependent center read from p[2].
class Disk : public Region {
 public:
  using Center = std::function<Vec2(double t)>;
  Disk(Vec2 center, double radius);
  Disk(Center center, double radius);
  double level(const Point& p) const override;
  std::vector<BoundarySample> sample(double t, std::size_t count) const override;
  Vec2 center(double t) const { return center_(t); }
  double radius() const { return radius_; }

 private:
  Center center_;
  double radius_;
};

/// Star-shaped curve r(theta) about a moving center: level = |x - c| - r(theta).
class PolarCurve : public Region {
 public:
  using Radius = std::function<double(double theta)>;
  PolarCurve(Disk::Center center, Radius r, Radius dr);
  double level(const Point& p) const override;
  std::vector<BoundarySample> sample(double t, std::size_t count) const override;
  Vec2 center(double t) const { return center_(t); }
  double radius(double theta) const { return r_(theta); }

 private:
  Disk::Center center_;
  Radius r_;
  Radius dr_;
};

/// Everything outside the closed unit ball; sampled on the sphere with a Fibonacci spiral.
class BallExterior : public Region {
 public:
  explicit BallExterior(std::size_t count = 30000) : count_(count) {}
  double level(const Point& p) const override;
  std::vector<BoundarySample> sample(double t, std::size_t count) const override;
  std::size_t default_count() const override { return count_; }

 private:
  std::size_t count_;
};

/// Points on the unit sphere, n >= 1.
std::vector<Point> fibonacci_sphere(std::size_t n);

using Velocity = std::function<Vec2(const Vec2& x, double t)>;

/// Lagrangian trajectories dX/dt = w(X, t) from X(0) = initial, integrated by an
/// adaptive Dormand-Prince 5(4) scheme.
class BoundaryTrajectory {
 public:
  BoundaryTrajectory(std::vector<Vec2> initial, Velocity w, double tolerance = 1e-10);
  /// Positions at time t >= 0, always integrated from t = 0. Throws IntegrationFailure.
  std::vector<Vec2> advect(double t) const;
  const std::vector<Vec2>& initial() const { return initial_; }
  double tolerance() const { return tol_; }

 private:
  std::vector<Vec2> initial_;
  Velocity w_;
  double tol_;
};

/// Closed polygon whose vertices follow a BoundaryTrajectory. Level is the signed
/// distance to the polygon. Positions are cached per distinct time.
class AdvectedPolygon : public Region {
 public:
  explicit AdvectedPolygon(BoundaryTrajectory traj);
  double level(const Point& p) const override;
  std::vector<BoundarySample> sample(double t, std::size_t count) const override;
  std::size_t default_count() const override { return traj_.initial().size(); }
  const std::vector<Vec2>& vertices(double t) const;

 private:
  BoundaryTrajectory traj_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::unique_ptr<std::vector<Vec2>>> cache_;
};

/// Signed distance from q to the closed polygon (negative inside).
double polygon_signed_distance(const std::vector<Vec2>& poly, const Vec2& q);

enum class PointClass { interior, excluded, on_boundary };
const char* point_class_name(PointClass c);

/// Bounding box minus excised regions plus inclusions.
struct Geometry {
  int dim = 3;
  std::array<Interval, 3> box{};
  /// The last coordinate is time; curved boundaries are sampled on time slices.
  bool space_time = false;
  std::vector<std::shared_ptr<const Region>> excised;
  std::vector<std::shared_ptr<const Region>> inclusions;
  std::size_t time_slices = 21;
  /// Overrides every region's default sample count when nonzero.
  std::size_t boundary_points = 0;

  PointClass classify(const Point& p) const;
  bool member(const Point& p) const { return classify(p) != PointClass::excluded; }
  bool has_curved_boundary() const { return !excised.empty() || !inclusions.empty(); }

  /// Curved boundary points at time t that separate the domain from its complement.
  std::vector<BoundarySample> sample_boundary(double t) const;
  /// sample_boundary over all time slices (a single call for steady geometries).
  std::vector<BoundarySample> sample_curved_boundary() const;
};

}  // namespace rfm::geo
