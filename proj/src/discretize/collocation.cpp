#include <fstream>

#include "rfm/discretize.hpp"
#include "rfm/error.hpp"

namespace rfm::disc {

namespace {

double grid_coord(const geo::Interval& iv, int i, int q) {
  if (i == q - 1) return iv.hi;
  return iv.lo + (iv.hi - iv.lo) * i / (q - 1);
}

/// Calls f(point) for a tensor grid over the sub's bounds, with `fixed_axis` (if >= 0)
/// pinned to `fixed_value`.
template <class F>
void for_grid(const Partition& part, std::size_t sub, const std::array<int, 3>& q, int fixed_axis,
              double fixed_value, F&& f) {
  std::array<int, 3> n{1, 1, 1};
  for (int a = 0; a < part.dim; ++a) n[a] = a == fixed_axis ? 1 : q[a];
  std::array<geo::Interval, 3> iv{};
  for (int a = 0; a < part.dim; ++a) iv[a] = part.bounds(sub, a);
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) {
        const std::array<int, 3> idx{i, j, k};
        Point p{};
        for (int a = 0; a < part.dim; ++a) p[a] = a == fixed_axis ? fixed_value : grid_coord(iv[a], idx[a], n[a]);
        f(p);
      }
}

}  // namespace

CollocationSets generate_collocation(const Partition& part, const std::array<int, 3>& q, const PdeProblem& problem,
                                     bool with_interfaces) {
  for (int a = 0; a < part.dim; ++a)
    if (q[a] < 2) throw Error(ErrorCode::ConfigError, "Q must be at least 2 per axis");
  const geo::Geometry& geom = problem.geometry;
  CollocationSets out;

  for (std::size_t s = 0; s < part.size(); ++s) {
    const std::size_t before = out.interior.size();
    for_grid(part, s, q, -1, 0.0, [&](const Point& p) {
      if (geom.member(p)) out.interior.push_back({p, static_cast<std::uint32_t>(s)});
    });
    if (out.interior.size() == before)
      throw Error(ErrorCode::EmptyInterior, "subdomain " + std::to_string(s) + " has no interior collocation point");
  }

  for (const FaceCondition& fc : problem.faces) {
    if (fc.axis >= part.dim) throw Error(ErrorCode::DimensionMismatch, "face on an absent axis");
    const int layer = fc.side == 0 ? 0 : part.counts[fc.axis] - 1;
    const double value = fc.side == 0 ? part.box[fc.axis].lo : part.box[fc.axis].hi;
    for (std::size_t s = 0; s < part.size(); ++s) {
      if (part.coords(s)[fc.axis] != layer) continue;
      Point normal{};
      normal[fc.axis] = fc.side == 0 ? -1.0 : 1.0;
      for_grid(part, s, q, fc.axis, value, [&](const Point& p) {
        if (geom.member(p)) out.boundary.push_back({p, static_cast<std::uint32_t>(s), fc.group, false, normal});
      });
    }
  }

  if (problem.curved_group >= 0 && geom.has_curved_boundary()) {
    for (const auto& b : geom.sample_curved_boundary()) {
      // The time coordinate of a slice can sit on the box edge; everything else is inside by construction.
      if (!part.contains(b.p)) continue;
      out.boundary.push_back(
          {b.p, static_cast<std::uint32_t>(part.locate(b.p)), problem.curved_group, true, b.normal});
    }
  }

  if (with_interfaces) {
    for (std::size_t s = 0; s < part.size(); ++s) {
      const auto c = part.coords(s);
      for (int a = 0; a < part.dim; ++a) {
        if (c[a] + 1 >= part.counts[a]) continue;
        auto cn = c;
        ++cn[a];
        const auto right = static_cast<std::uint32_t>(part.index(cn));
        const double value = part.edges[a][c[a] + 1];
        for_grid(part, s, q, a, value, [&](const Point& p) {
          if (geom.member(p)) out.interface.push_back({p, static_cast<std::uint32_t>(s), right, a});
        });
      }
    }
  }
  return out;
}

void write_collocation_csv(const CollocationSets& sets, int dim, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  f.precision(17);
  static const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < dim; ++a) f << names[a] << ',';
  f << "kind,tag\n";
  auto coords = [&](const Point& p) {
    for (int a = 0; a < dim; ++a) f << p[a] << ',';
  };
  for (const auto& p : sets.interior) coords(p.x), f << "interior," << p.sub << '\n';
  for (const auto& p : sets.boundary) coords(p.x), f << (p.curved ? "curved," : "face,") << p.group << '\n';
  for (const auto& p : sets.interface) coords(p.x), f << "interface," << p.axis << '\n';
}

}  // namespace rfm::disc
