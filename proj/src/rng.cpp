#include "nsmab/rng.hpp"

#include <cmath>

namespace nsmab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double Rng::next_normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::next_gamma(double shape) {
  if (shape < 1.0) {
    const double u = 1.0 - next_double();  // in (0, 1]
    return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_double();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::next_beta(double alpha, double beta) {
  const double a = next_gamma(alpha);
  const double b = next_gamma(beta);
  const double s = a + b;
  if (s <= 0.0) return 0.5;  // both gammas underflowed
  return a / s;
}

}  // namespace nsmab
