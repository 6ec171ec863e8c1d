#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rfm/linalg.hpp"
#include "rfm/nls.hpp"
#include "rfm/problem.hpp"

namespace rfm::disc {

using geo::Point;

struct Subdomain {
  Point center{};
  Point half_width{};
};

/// Uniform tiling of a box into N_0 x N_1 [x N_2] subdomains, first axis fastest.
struct Partition {
  int dim = 3;
  std::array<geo::Interval, 3> box{};
  std::array<int, 3> counts{1, 1, 1};
  std::vector<Subdomain> subdomains;
  /// Grid lines per axis, counts[a] + 1 values; neighbours share them exactly.
  std::array<std::vector<double>, 3> edges;

  std::size_t size() const { return subdomains.size(); }
  std::array<int, 3> coords(std::size_t index) const;
  std::size_t index(const std::array<int, 3>& c) const;
  /// Subdomain containing p; points on shared faces go to the upper neighbour.
  std::size_t locate(const Point& p) const;
  bool contains(const Point& p, double tol = 1e-12) const;
  geo::Interval bounds(std::size_t index, int axis) const;
};

/// Throws EmptyInterval for an empty interval or a zero count.
Partition build_partition(int dim, const std::array<geo::Interval, 3>& box, const std::array<int, 3>& counts);

/// (x - mu) / sigma on the first `dim` coordinates.
Point affine_map(const Subdomain& sub, const Point& x, int dim);

enum class Pou { a, b };

/// One-dimensional partition-of-unity profile.
double pou_eval(Pou kind, double y);
/// Derivative of the profile of order 0..3 (profile a has zero derivatives).
double pou_derivative(Pou kind, double y, int order);
/// psi_i(x) over the partition. Profile a tiles with half-open cells (shared faces go
/// to the upper neighbour, as in `locate`), so the weights sum to one inside the box.
double pou_weight(const Partition& partition, Pou kind, std::size_t sub, const Point& x);

/// Per-subdomain random tanh features phi_ij(x) = tanh(k_ij . l_i(x) + b_ij).
struct FeatureBank {
  int dim = 3;
  std::size_t per_subdomain = 0;  // J
  std::size_t subdomains = 0;
  double range = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> weights;  // [(sub*J + j)*dim + d]
  std::vector<double> biases;   // [sub*J + j]

  const double* weight(std::size_t sub, std::size_t j) const {
    return weights.data() + (sub * per_subdomain + j) * static_cast<std::size_t>(dim);
  }
  double bias(std::size_t sub, std::size_t j) const { return biases[sub * per_subdomain + j]; }
};

/// Draws uniform on [-R, R]; a pure function of (seed, subdomain, draw index).
FeatureBank sample_features(const Partition& partition, std::size_t j, double range, std::uint64_t seed);

/// Partial derivatives of every feature of one subdomain at x: values[o][j].
struct BasisEval {
  std::vector<MultiIndex> orders;
  std::vector<std::vector<double>> values;
};

/// Throws OrderTooHigh for total order above 3.
BasisEval eval_basis(const Partition& partition, const FeatureBank& bank, std::size_t sub, const Point& x,
                     const std::vector<MultiIndex>& orders);
/// Same as eval_basis, writing orders.size() * J values to `out`.
void eval_basis_into(const Partition& partition, const FeatureBank& bank, std::size_t sub, const Point& x,
                     std::span<const MultiIndex> orders, double* out);

struct InteriorPoint {
  Point x{};
  std::uint32_t sub = 0;
};

struct BoundaryPoint {
  Point x{};
  std::uint32_t sub = 0;
  int group = 0;
  bool curved = false;
  Point normal{};
};

struct InterfacePoint {
  Point x{};
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  int axis = 0;
};

struct CollocationSets {
  std::vector<InteriorPoint> interior;
  std::vector<BoundaryPoint> boundary;
  std::vector<InterfacePoint> interface;
};

/// Per-subdomain grids with endpoints, box-face grids for faces carrying conditions,
/// curved boundary samples, and shared-face grids when `with_interfaces`.
/// Throws EmptyInterior if some subdomain keeps no interior point.
CollocationSets generate_collocation(const Partition& partition, const std::array<int, 3>& q,
                                     const PdeProblem& problem, bool with_interfaces);

/// Debug dump: x,y[,z],kind,tag.
void write_collocation_csv(const CollocationSets& sets, int dim, const std::string& path);

struct DiscretizationConfig {
  std::array<int, 3> n{2, 2, 2};
  std::array<int, 3> q{10, 10, 10};
  std::size_t j = 100;
  double feature_range = 0.0;  // 0 uses the problem default
  Pou pou = Pou::a;
  std::uint64_t seed = 0;
};

/// Assembled random-feature collocation system. Rows: interior (component-major),
/// continuity (per interface point, per order, per component), boundary (per point,
/// per condition). Columns: ((c * M_p + sub) * J + j).
class RfmSystem {
 public:
  RfmSystem(const PdeProblem& problem, const DiscretizationConfig& config);

  std::size_t unknowns() const { return n_; }
  std::size_t residuals() const { return interior_rows_ + continuity_rows_ + boundary_rows_; }
  std::size_t interior_rows() const { return interior_rows_; }
  std::size_t continuity_rows() const { return continuity_rows_; }
  std::size_t boundary_rows() const { return boundary_rows_; }

  void residual(std::span<const double> u, std::span<double> f) const;
  void jacobian(std::span<const double> u, linalg::DenseMatrix& jac) const;
  /// Solver-facing view; the returned closures reference this object.
  nls::NlsSystem nls_system(nls::Scaling scaling = nls::Scaling::row_scale_c100) const;

  /// Field values and partials at arbitrary points: out[(p*K + c)*O + o].
  /// Throws OutsideDomain for points outside the partition box.
  std::vector<double> evaluate(std::span<const double> u, const std::vector<Point>& points,
                               const std::vector<MultiIndex>& orders) const;

  const PdeProblem& problem() const { return problem_; }
  const Partition& partition() const { return partition_; }
  const FeatureBank& features() const { return bank_; }
  const CollocationSets& collocation() const { return colloc_; }
  const DiscretizationConfig& config() const { return config_; }

 private:
  /// Per-point basis cache: `count` consecutive terms, each one subdomain's
  /// block of (orders x J) partials of psi_i * phi_ij.
  struct Term {
    std::uint32_t sub;
    std::size_t offset;
  };
  struct PointBasis {
    std::size_t first = 0;
    std::uint32_t count = 0;
  };

  std::vector<std::uint32_t> supporting(const Point& x, std::uint32_t home) const;
  void fill_terms(const Point& x, std::span<const std::uint32_t> subs, std::span<const MultiIndex> orders,
                  double* out) const;
  std::vector<PointBasis> cache_points(const std::vector<Point>& xs, const std::vector<std::uint32_t>& homes,
                                       const std::vector<std::span<const MultiIndex>>& orders);
  /// sum_j block[k][j] * u[c, sub, j] over the point's terms.
  double combine(const PointBasis& pb, std::size_t k, std::span<const double> u, int component) const;
  std::size_t column(int component, std::uint32_t sub) const {
    return (static_cast<std::size_t>(component) * partition_.size() + sub) * config_.j;
  }

  PdeProblem problem_;
  DiscretizationConfig config_;
  Partition partition_;
  FeatureBank bank_;
  CollocationSets colloc_;
  std::size_t n_ = 0;
  std::size_t interior_rows_ = 0;
  std::size_t continuity_rows_ = 0;
  std::size_t boundary_rows_ = 0;

  std::vector<Term> terms_;
  std::vector<double> basis_;
  std::vector<PointBasis> interior_basis_;
  std::vector<PointBasis> boundary_basis_;
  std::vector<PointBasis> left_basis_, right_basis_;
  std::array<std::vector<MultiIndex>, 3> interface_orders_;  // per axis: d^s/dx_a^s, s < order
  std::vector<std::vector<MultiIndex>> group_orders_;        // per boundary group
  std::vector<double> source_;                               // [p*K + q]
  std::vector<double> boundary_data_;                        // per boundary row
  std::vector<std::size_t> boundary_row_start_;              // per boundary point, relative
  std::vector<std::size_t> continuity_row_start_;            // per interface point, relative
};

}  // namespace rfm::disc
