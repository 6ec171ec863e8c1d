#include <cmath>

#include "rfm/nls.hpp"

namespace rfm::nls {

GoldenResult golden_section(const std::function<double(double)>& phi, double lo, double hi,
                            double alpha_tol, int max_evals) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  GoldenResult best{lo, INFINITY, 0};
  auto eval = [&](double a) {
    const double v = phi(a);
    ++best.evaluations;
    if (v < best.phi) {
      best.alpha = a;
      best.phi = v;
    }
    return v;
  };

  double a = lo;
  double b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = eval(c);
  double fd = max_evals > 1 ? eval(d) : INFINITY;
  while (b - a > alpha_tol && best.evaluations < max_evals) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = eval(d);
    }
  }
  return best;
}

}  // namespace rfm::nls
