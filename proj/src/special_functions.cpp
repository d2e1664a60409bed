#include "orient/special_functions.hpp"

#include <cmath>

#include "orient/core_types.hpp"

namespace orient::special {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // final derivative at the converged root
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[m - 1] = 0.0;
  return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int order) {
  if (panels < 1) throw std::invalid_argument("panel count must be positive");
  const auto base = gauss_legendre(order);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(static_cast<std::size_t>(panels) * order);
  const double h = 2.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = -1.0 + h * (p + 0.5);
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      rule.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

std::vector<double> spherical_bessel_j(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  std::vector<double> j(n_max + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const double ax = std::abs(x);
  // Start well above both n_max and the argument; the recurrence is stable downward.
  const int start = std::max(n_max, static_cast<int>(ax)) + 20 +
                    static_cast<int>(std::sqrt(40.0 * std::max(n_max, static_cast<int>(ax)) + 1.0));
  double next = 0.0, cur = 1e-300;
  std::vector<double> tmp(start + 1, 0.0);
  for (int l = start; l >= 0; --l) {
    tmp[l] = cur;
    const double prev = (2.0 * l + 1.0) / ax * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {  // rescale to avoid overflow
      for (int k = l; k <= start; ++k) tmp[k] *= 1e-250;
      next *= 1e-250;
      cur *= 1e-250;
    }
  }
  const double j0 = std::sin(ax) / ax;
  // Normalize against j_0 or, when j_0 is near a zero, against j_1.
  double scale;
  const double j1 = std::sin(ax) / (ax * ax) - std::cos(ax) / ax;
  if (std::abs(j0) >= std::abs(j1) || n_max == 0)
    scale = j0 / tmp[0];
  else
    scale = j1 / tmp[1];
  for (int l = 0; l <= n_max; ++l) {
    j[l] = tmp[l] * scale;
    if (x < 0 && (l % 2 == 1)) j[l] = -j[l];
  }
  return j;
}

std::complex<double> hyp1f1(double a, double b, std::complex<double> z, int max_terms) {
  std::complex<double> term = 1.0, sum = 1.0;
  for (int n = 0; n < max_terms; ++n) {
    term *= (a + n) / ((b + n) * (n + 1.0)) * z;
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum) && n > std::abs(z)) return sum;
  }
  throw SeriesError("1F1 power series did not converge");
}

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative number");
  return std::lgamma(n + 1.0);
}

double clebsch_gordan_000(int j1, int j2, int j) {
  if (j1 < 0 || j2 < 0 || j < 0) return 0.0;
  if (j < std::abs(j1 - j2) || j > j1 + j2) return 0.0;
  const int big_j = j1 + j2 + j;
  if (big_j % 2 != 0) return 0.0;
  const int g = big_j / 2;
  // <j1 0 j2 0|j 0> = (-1)^(g-j) sqrt(2j+1) * 3j(j1 j2 j; 0 0 0) * (-1)^(j1-j2)
  // with the closed form for the all-zero 3j symbol.
  const double log_delta = log_factorial(big_j - 2 * j1) + log_factorial(big_j - 2 * j2) +
                           log_factorial(big_j - 2 * j) - log_factorial(big_j + 1);
  const double log_ratio = log_factorial(g) - log_factorial(g - j1) - log_factorial(g - j2) -
                           log_factorial(g - j);
  const double three_j = ((g % 2 == 0) ? 1.0 : -1.0) * std::exp(0.5 * log_delta + log_ratio);
  const double phase = ((j1 - j2) % 2 == 0) ? 1.0 : -1.0;
  return phase * std::sqrt(2.0 * j + 1.0) * three_j;
}

}  // namespace orient::special
