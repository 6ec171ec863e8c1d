#include <algorithm>
#include <cmath>

#include "rfm/discretize.hpp"
#include "rfm/error.hpp"

namespace rfm::disc {

namespace {

double binomial(int n, int k) {
  static constexpr double table[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  return table[n][k];
}

/// Every multi-index below some member of `orders`, in a fixed order.
std::vector<MultiIndex> down_closure(std::span<const MultiIndex> orders) {
  std::vector<MultiIndex> out;
  for (const auto& o : orders)
    for (int i = 0; i <= o.a[0]; ++i)
      for (int j = 0; j <= o.a[1]; ++j)
        for (int k = 0; k <= o.a[2]; ++k) {
          const MultiIndex m{i, j, k};
          if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        }
  return out;
}

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(got) + ", expected " + std::to_string(want));
}

}  // namespace

RfmSystem::RfmSystem(const PdeProblem& problem, const DiscretizationConfig& config)
    : problem_(problem), config_(config) {
  const int dim = problem_.dim;
  if (config_.j < 1) throw Error(ErrorCode::ConfigError, "J must be at least 1");
  if (config_.pou == Pou::b && problem_.max_axis_order() > 2)
    throw Error(ErrorCode::ConfigError, "the C1 partition of unity supports operators up to second order");
  std::array<int, 3> counts{1, 1, 1};
  for (int a = 0; a < dim; ++a) counts[a] = config_.n[a];
  partition_ = build_partition(dim, problem_.geometry.box, counts);
  const double range = config_.feature_range > 0.0 ? config_.feature_range : problem_.feature_range;
  bank_ = sample_features(partition_, config_.j, range, config_.seed);
  colloc_ = generate_collocation(partition_, config_.q, problem_, config_.pou == Pou::a && partition_.size() > 1);

  const std::size_t k = static_cast<std::size_t>(problem_.components);
  n_ = k * partition_.size() * config_.j;
  interior_rows_ = k * colloc_.interior.size();

  for (int a = 0; a < dim; ++a)
    for (int s = 0; s < problem_.axis_orders[a]; ++s) {
      MultiIndex m;
      m.a[a] = s;
      interface_orders_[a].push_back(m);
    }
  continuity_row_start_.resize(colloc_.interface.size());
  for (std::size_t i = 0; i < colloc_.interface.size(); ++i) {
    continuity_row_start_[i] = continuity_rows_;
    continuity_rows_ += interface_orders_[colloc_.interface[i].axis].size() * k;
  }

  for (const auto& g : problem_.boundary_groups) {
    group_orders_.emplace_back();
    for (const auto& c : g) {
      if (c.component < 0 || c.component >= problem_.components)
        throw Error(ErrorCode::ConfigError, "boundary condition on a missing component");
      group_orders_.back().push_back(c.derivative);
    }
  }
  boundary_row_start_.resize(colloc_.boundary.size());
  for (std::size_t i = 0; i < colloc_.boundary.size(); ++i) {
    const int g = colloc_.boundary[i].group;
    if (g < 0 || g >= static_cast<int>(group_orders_.size()))
      throw Error(ErrorCode::ConfigError, "boundary point references an unknown group");
    boundary_row_start_[i] = boundary_rows_;
    boundary_rows_ += group_orders_[g].size();
  }

  // Data at collocation points is fixed for the lifetime of the system.
  const auto& interior = colloc_.interior;
  source_.assign(interior.size() * k, 0.0);
  const long ni = static_cast<long>(interior.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long p = 0; p < ni; ++p) {
    const auto f = problem_.source(interior[p].x);
    std::copy(f.begin(), f.end(), source_.begin() + p * static_cast<long>(k));
  }
  boundary_data_.assign(boundary_rows_, 0.0);
  const long nb = static_cast<long>(colloc_.boundary.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long b = 0; b < nb; ++b) {
    const auto& bp = colloc_.boundary[b];
    for (std::size_t c = 0; c < group_orders_[bp.group].size(); ++c)
      boundary_data_[boundary_row_start_[b] + c] = problem_.boundary_value(bp.group, static_cast<int>(c), bp.x);
  }

  {
    std::vector<Point> xs;
    std::vector<std::uint32_t> homes;
    std::vector<std::span<const MultiIndex>> ords;
    for (const auto& p : interior) {
      xs.push_back(p.x);
      homes.push_back(p.sub);
      ords.emplace_back(problem_.slots);
    }
    interior_basis_ = cache_points(xs, homes, ords);
    xs.clear(), homes.clear(), ords.clear();
    for (const auto& p : colloc_.boundary) {
      xs.push_back(p.x);
      homes.push_back(p.sub);
      ords.emplace_back(group_orders_[p.group]);
    }
    boundary_basis_ = cache_points(xs, homes, ords);
    xs.clear(), homes.clear(), ords.clear();
    for (const auto& p : colloc_.interface) {
      xs.push_back(p.x);
      homes.push_back(p.left);
      ords.emplace_back(interface_orders_[p.axis]);
    }
    left_basis_ = cache_points(xs, homes, ords);
    for (std::size_t i = 0; i < colloc_.interface.size(); ++i) homes[i] = colloc_.interface[i].right;
    right_basis_ = cache_points(xs, homes, ords);
  }
}

std::vector<std::uint32_t> RfmSystem::supporting(const Point& x, std::uint32_t home) const {
  if (config_.pou == Pou::a) return {home};
  std::vector<std::uint32_t> subs;
  for (std::size_t s = 0; s < partition_.size(); ++s) {
    const Point y = affine_map(partition_.subdomains[s], x, partition_.dim);
    bool in = true;
    for (int a = 0; a < partition_.dim; ++a) in = in && std::abs(y[a]) < 1.25;
    if (in) subs.push_back(static_cast<std::uint32_t>(s));
  }
  return subs;
}

void RfmSystem::fill_terms(const Point& x, std::span<const std::uint32_t> subs, std::span<const MultiIndex> orders,
                           double* out) const {
  const std::size_t jn = config_.j;
  if (config_.pou == Pou::a) {
    eval_basis_into(partition_, bank_, subs[0], x, orders, out);
    return;
  }
  // Leibniz rule for psi_i * phi_ij with psi_i a product of one-dimensional profiles.
  const auto closure = down_closure(orders);
  std::vector<double> phi(closure.size() * jn);
  for (std::size_t t = 0; t < subs.size(); ++t) {
    const Subdomain& sd = partition_.subdomains[subs[t]];
    eval_basis_into(partition_, bank_, subs[t], x, closure, phi.data());
    const Point y = affine_map(sd, x, partition_.dim);
    double pd[3][4] = {{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
    for (int a = 0; a < partition_.dim; ++a) {
      double scale = 1.0;
      for (int r = 0; r <= 3; ++r) {
        pd[a][r] = pou_derivative(Pou::b, y[a], r) * scale;
        scale /= sd.half_width[a];
      }
    }
    double* block = out + t * orders.size() * jn;
    std::fill(block, block + orders.size() * jn, 0.0);
    for (std::size_t o = 0; o < orders.size(); ++o) {
      const auto& al = orders[o].a;
      for (int i = 0; i <= al[0]; ++i)
        for (int j = 0; j <= al[1]; ++j)
          for (int k = 0; k <= al[2]; ++k) {
            const double w = binomial(al[0], i) * binomial(al[1], j) * binomial(al[2], k) * pd[0][i] * pd[1][j] *
                             pd[2][k];
            if (w == 0.0) continue;
            const MultiIndex rest{al[0] - i, al[1] - j, al[2] - k};
            const auto idx = static_cast<std::size_t>(std::find(closure.begin(), closure.end(), rest) - closure.begin());
            const double* src = phi.data() + idx * jn;
            double* dst = block + o * jn;
            for (std::size_t f = 0; f < jn; ++f) dst[f] += w * src[f];
          }
    }
  }
}

std::vector<RfmSystem::PointBasis> RfmSystem::cache_points(const std::vector<Point>& xs,
                                                           const std::vector<std::uint32_t>& homes,
                                                           const std::vector<std::span<const MultiIndex>>& orders) {
  const std::size_t np = xs.size();
  std::vector<PointBasis> out(np);
  std::vector<std::vector<std::uint32_t>> subs(np);
  for (std::size_t p = 0; p < np; ++p) {
    subs[p] = supporting(xs[p], homes[p]);
    out[p].first = terms_.size();
    out[p].count = static_cast<std::uint32_t>(subs[p].size());
    for (auto s : subs[p]) {
      terms_.push_back({s, basis_.size()});
      basis_.resize(basis_.size() + orders[p].size() * config_.j);
    }
  }
  const long n = static_cast<long>(np);
#pragma omp parallel for schedule(dynamic, 64)
  for (long p = 0; p < n; ++p) {
    if (subs[p].empty()) continue;
    fill_terms(xs[p], subs[p], orders[p], basis_.data() + terms_[out[p].first].offset);
  }
  return out;
}

double RfmSystem::combine(const PointBasis& pb, std::size_t k, std::span<const double> u, int component) const {
  const std::size_t jn = config_.j;
  double sum = 0.0;
  for (std::uint32_t t = 0; t < pb.count; ++t) {
    const Term& term = terms_[pb.first + t];
    const double* b = basis_.data() + term.offset + k * jn;
    const double* c = u.data() + column(component, term.sub);
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t j = 0; j < jn; ++j) acc += b[j] * c[j];
    sum += acc;
  }
  return sum;
}

void RfmSystem::residual(std::span<const double> u, std::span<double> f) const {
  check_size(u.size(), n_, "coefficient vector");
  check_size(f.size(), residuals(), "residual vector");
  const int kc = problem_.components;
  const std::size_t ns = problem_.slots.size();
  const std::size_t ni = colloc_.interior.size();
  const long lni = static_cast<long>(ni);
#pragma omp parallel
  {
    std::vector<double> slots(kc * ns), res(kc);
#pragma omp for schedule(static)
    for (long p = 0; p < lni; ++p) {
      for (int c = 0; c < kc; ++c)
        for (std::size_t s = 0; s < ns; ++s) slots[c * ns + s] = combine(interior_basis_[p], s, u, c);
      problem_.interior_operator(colloc_.interior[p].x, slots.data(), res.data(), nullptr);
      for (int q = 0; q < kc; ++q) f[q * ni + p] = res[q] - source_[p * kc + q];
    }
  }
  const std::size_t cbase = interior_rows_;
  const long nif = static_cast<long>(colloc_.interface.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nif; ++i) {
    const auto& ord = interface_orders_[colloc_.interface[i].axis];
    for (std::size_t s = 0; s < ord.size(); ++s)
      for (int c = 0; c < kc; ++c)
        f[cbase + continuity_row_start_[i] + s * kc + c] =
            combine(left_basis_[i], s, u, c) - combine(right_basis_[i], s, u, c);
  }
  const std::size_t bbase = interior_rows_ + continuity_rows_;
  const long nb = static_cast<long>(colloc_.boundary.size());
#pragma omp parallel for schedule(static)
  for (long b = 0; b < nb; ++b) {
    const auto& group = problem_.boundary_groups[colloc_.boundary[b].group];
    for (std::size_t k = 0; k < group.size(); ++k) {
      const std::size_t row = boundary_row_start_[b] + k;
      f[bbase + row] = combine(boundary_basis_[b], k, u, group[k].component) - boundary_data_[row];
    }
  }
}

void RfmSystem::jacobian(std::span<const double> u, linalg::DenseMatrix& jac) const {
  check_size(u.size(), n_, "coefficient vector");
  jac.resize(residuals(), n_);
  jac.fill(0.0);
  const int kc = problem_.components;
  const std::size_t ns = problem_.slots.size();
  const std::size_t jn = config_.j;
  const std::size_t ni = colloc_.interior.size();
  const long lni = static_cast<long>(ni);

  auto scatter = [&](double* row, const PointBasis& pb, std::size_t k, int component, double w) {
    for (std::uint32_t t = 0; t < pb.count; ++t) {
      const Term& term = terms_[pb.first + t];
      const double* b = basis_.data() + term.offset + k * jn;
      double* dst = row + column(component, term.sub);
#pragma omp simd
      for (std::size_t j = 0; j < jn; ++j) dst[j] += w * b[j];
    }
  };

#pragma omp parallel
  {
    std::vector<double> slots(kc * ns), res(kc), dr(kc * kc * ns);
#pragma omp for schedule(static)
    for (long p = 0; p < lni; ++p) {
      for (int c = 0; c < kc; ++c)
        for (std::size_t s = 0; s < ns; ++s) slots[c * ns + s] = combine(interior_basis_[p], s, u, c);
      std::fill(dr.begin(), dr.end(), 0.0);
      problem_.interior_operator(colloc_.interior[p].x, slots.data(), res.data(), dr.data());
      for (int q = 0; q < kc; ++q) {
        double* row = jac.row(q * ni + p);
        for (int c = 0; c < kc; ++c)
          for (std::size_t s = 0; s < ns; ++s) {
            const double w = dr[(q * kc + c) * ns + s];
            if (w != 0.0) scatter(row, interior_basis_[p], s, c, w);
          }
      }
    }
  }
  const std::size_t cbase = interior_rows_;
  const long nif = static_cast<long>(colloc_.interface.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nif; ++i) {
    const auto& ord = interface_orders_[colloc_.interface[i].axis];
    for (std::size_t s = 0; s < ord.size(); ++s)
      for (int c = 0; c < kc; ++c) {
        double* row = jac.row(cbase + continuity_row_start_[i] + s * kc + c);
        scatter(row, left_basis_[i], s, c, 1.0);
        scatter(row, right_basis_[i], s, c, -1.0);
      }
  }
  const std::size_t bbase = interior_rows_ + continuity_rows_;
  const long nb = static_cast<long>(colloc_.boundary.size());
#pragma omp parallel for schedule(static)
  for (long b = 0; b < nb; ++b) {
    const auto& group = problem_.boundary_groups[colloc_.boundary[b].group];
    for (std::size_t k = 0; k < group.size(); ++k)
      scatter(jac.row(bbase + boundary_row_start_[b] + k), boundary_basis_[b], k, group[k].component, 1.0);
  }
}

nls::NlsSystem RfmSystem::nls_system(nls::Scaling scaling) const {
  nls::NlsSystem sys;
  sys.n_unknowns = n_;
  sys.m_residuals = residuals();
  sys.residual_eval = [this](std::span<const double> u, std::span<double> f) { residual(u, f); };
  sys.jacobian_eval = [this](std::span<const double> u, linalg::DenseMatrix& j) { jacobian(u, j); };
  sys.scaling = scaling;
  return sys;
}

std::vector<double> RfmSystem::evaluate(std::span<const double> u, const std::vector<Point>& points,
                                        const std::vector<MultiIndex>& orders) const {
  check_size(u.size(), n_, "coefficient vector");
  for (const auto& p : points)
    if (!partition_.contains(p)) throw Error(ErrorCode::OutsideDomain, "evaluation point outside the partition box");
  const int kc = problem_.components;
  const std::size_t no = orders.size();
  const std::size_t jn = config_.j;
  std::vector<double> out(points.size() * kc * no, 0.0);
  const long np = static_cast<long>(points.size());
#pragma omp parallel
  {
    std::vector<double> block;
#pragma omp for schedule(dynamic, 64)
    for (long p = 0; p < np; ++p) {
      const auto subs = supporting(points[p], static_cast<std::uint32_t>(partition_.locate(points[p])));
      block.resize(subs.size() * no * jn);
      fill_terms(points[p], subs, orders, block.data());
      for (std::size_t t = 0; t < subs.size(); ++t)
        for (int c = 0; c < kc; ++c) {
          const double* coef = u.data() + column(c, subs[t]);
          for (std::size_t o = 0; o < no; ++o) {
            const double* b = block.data() + (t * no + o) * jn;
            double acc = 0.0;
            for (std::size_t j = 0; j < jn; ++j) acc += b[j] * coef[j];
            out[(p * kc + c) * no + o] += acc;
          }
        }
    }
  }
  return out;
}

}  // namespace rfm::disc
