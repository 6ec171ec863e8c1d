#include <algorithm>
#include <cmath>
#include <numbers>

#include "rfm/discretize.hpp"
#include "rfm/error.hpp"

namespace rfm::disc {

Partition build_partition(int dim, const std::array<geo::Interval, 3>& box, const std::array<int, 3>& counts) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::DimensionMismatch, "partition dimension must be 1, 2 or 3");
  Partition p;
  p.dim = dim;
  p.box = box;
  p.counts = {1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    if (!(box[a].hi > box[a].lo)) throw Error(ErrorCode::EmptyInterval, "axis " + std::to_string(a));
    if (counts[a] < 1) throw Error(ErrorCode::EmptyInterval, "subdomain count on axis " + std::to_string(a));
    p.counts[a] = counts[a];
    auto& e = p.edges[a];
    e.resize(counts[a] + 1);
    for (int c = 0; c <= counts[a]; ++c)
      e[c] = c == counts[a] ? box[a].hi : box[a].lo + (box[a].hi - box[a].lo) * c / counts[a];
  }
  const std::size_t total = static_cast<std::size_t>(p.counts[0]) * p.counts[1] * p.counts[2];
  p.subdomains.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    const auto c = p.coords(i);
    for (int a = 0; a < dim; ++a) {
      const double lo = p.edges[a][c[a]], hi = p.edges[a][c[a] + 1];
      p.subdomains[i].center[a] = 0.5 * (lo + hi);
      p.subdomains[i].half_width[a] = 0.5 * (hi - lo);
    }
  }
  return p;
}

std::array<int, 3> Partition::coords(std::size_t index) const {
  const int i = static_cast<int>(index);
  return {i % counts[0], (i / counts[0]) % counts[1], i / (counts[0] * counts[1])};
}

std::size_t Partition::index(const std::array<int, 3>& c) const {
  return static_cast<std::size_t>(c[0] + counts[0] * (c[1] + counts[1] * c[2]));
}

std::size_t Partition::locate(const Point& p) const {
  std::array<int, 3> c{};
  for (int a = 0; a < dim; ++a) {
    const auto& e = edges[a];
    const auto it = std::upper_bound(e.begin(), e.end(), p[a]);
    c[a] = std::clamp(static_cast<int>(it - e.begin()) - 1, 0, counts[a] - 1);
  }
  return index(c);
}

bool Partition::contains(const Point& p, double tol) const {
  for (int a = 0; a < dim; ++a)
    if (p[a] < box[a].lo - tol || p[a] > box[a].hi + tol) return false;
  return true;
}

geo::Interval Partition::bounds(std::size_t i, int axis) const {
  const int c = coords(i)[axis];
  return {edges[axis][c], edges[axis][c + 1]};
}

Point affine_map(const Subdomain& sub, const Point& x, int dim) {
  Point y{};
  for (int a = 0; a < dim; ++a) y[a] = (x[a] - sub.center[a]) / sub.half_width[a];
  return y;
}

double pou_eval(Pou kind, double y) { return pou_derivative(kind, y, 0); }

double pou_derivative(Pou kind, double y, int order) {
  using std::numbers::pi;
  const double r = std::abs(y);
  if (kind == Pou::a) return order == 0 && r <= 1.0 ? 1.0 : 0.0;
  if (r <= 0.75) return order == 0 ? 1.0 : 0.0;
  if (r > 1.25) return 0.0;
  // sin(2 pi r) written about r = 1 so that the profile is antisymmetric there to rounding.
  const double w = 2.0 * pi * (r - 1.0);
  const double sg = y < 0.0 ? -1.0 : 1.0;
  switch (order) {
    case 0: return 0.5 * (1.0 - std::sin(w));
    case 1: return -pi * std::cos(w) * sg;
    case 2: return 2.0 * pi * pi * std::sin(w);
    case 3: return 4.0 * pi * pi * pi * std::cos(w) * sg;
    default: throw Error(ErrorCode::OrderTooHigh, "partition-of-unity derivative order " + std::to_string(order));
  }
}

double pou_weight(const Partition& partition, Pou kind, std::size_t sub, const Point& x) {
  if (kind == Pou::a) return partition.contains(x, 0.0) && partition.locate(x) == sub ? 1.0 : 0.0;
  const Point y = affine_map(partition.subdomains[sub], x, partition.dim);
  double w = 1.0;
  for (int a = 0; a < partition.dim; ++a) w *= pou_eval(kind, y[a]);
  return w;
}

}  // namespace rfm::disc
