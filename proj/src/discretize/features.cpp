#include <algorithm>
#include <cmath>

#include "rfm/discretize.hpp"
#include "rfm/error.hpp"
#include "rfm/random.hpp"

namespace rfm::disc {

FeatureBank sample_features(const Partition& partition, std::size_t j, double range, std::uint64_t seed) {
  if (j < 1) throw Error(ErrorCode::ConfigError, "J must be at least 1");
  if (!(range > 0.0) || !std::isfinite(range)) throw Error(ErrorCode::ConfigError, "feature range must be positive");
  FeatureBank bank;
  bank.dim = partition.dim;
  bank.per_subdomain = j;
  bank.subdomains = partition.size();
  bank.range = range;
  bank.seed = seed;
  const std::size_t d = static_cast<std::size_t>(partition.dim);
  bank.weights.resize(bank.subdomains * j * d);
  bank.biases.resize(bank.subdomains * j);
  for (std::size_t s = 0; s < bank.subdomains; ++s) {
    const std::uint64_t key = hash_combine(seed, s);
    auto draw = [&](std::uint64_t idx) { return range * (2.0 * unit_double(hash_combine(key, idx)) - 1.0); };
    for (std::size_t f = 0; f < j; ++f) {
      const std::uint64_t base = f * (d + 1);
      for (std::size_t a = 0; a < d; ++a) bank.weights[(s * j + f) * d + a] = draw(base + a);
      bank.biases[s * j + f] = draw(base + d);
    }
  }
  return bank;
}

void eval_basis_into(const Partition& partition, const FeatureBank& bank, std::size_t sub, const Point& x,
                     std::span<const MultiIndex> orders, double* out) {
  const int dim = partition.dim;
  const Subdomain& sd = partition.subdomains[sub];
  const Point y = affine_map(sd, x, dim);
  int max_order = 0;
  for (const auto& o : orders) {
    if (o.order() > 3) throw Error(ErrorCode::OrderTooHigh, "basis derivative order above 3");
    for (int a = dim; a < 3; ++a)
      if (o.a[a] != 0) throw Error(ErrorCode::DimensionMismatch, "derivative along an absent axis");
    max_order = std::max(max_order, o.order());
  }
  const std::size_t jn = bank.per_subdomain;
  const std::size_t no = orders.size();
  for (std::size_t f = 0; f < jn; ++f) {
    const double* k = bank.weight(sub, f);
    double z = bank.bias(sub, f);
    for (int a = 0; a < dim; ++a) z += k[a] * y[a];
    const double t = std::tanh(z);
    double dt[4] = {t, 0.0, 0.0, 0.0};
    if (max_order >= 1) dt[1] = 1.0 - t * t;
    if (max_order >= 2) dt[2] = -2.0 * t * dt[1];
    if (max_order >= 3) dt[3] = -2.0 * (dt[1] * dt[1] + t * dt[2]);
    double ks[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) ks[a] = k[a] / sd.half_width[a];
    for (std::size_t o = 0; o < no; ++o) {
      const auto& m = orders[o].a;
      double v = dt[orders[o].order()];
      for (int a = 0; a < dim; ++a)
        for (int p = 0; p < m[a]; ++p) v *= ks[a];
      out[o * jn + f] = v;
    }
  }
}

BasisEval eval_basis(const Partition& partition, const FeatureBank& bank, std::size_t sub, const Point& x,
                     const std::vector<MultiIndex>& orders) {
  std::vector<double> flat(orders.size() * bank.per_subdomain);
  eval_basis_into(partition, bank, sub, x, orders, flat.data());
  BasisEval e;
  e.orders = orders;
  e.values.resize(orders.size());
  for (std::size_t o = 0; o < orders.size(); ++o)
    e.values[o].assign(flat.begin() + o * bank.per_subdomain, flat.begin() + (o + 1) * bank.per_subdomain);
  return e;
}

}  // namespace rfm::disc
