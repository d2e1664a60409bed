#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace orient::special {

struct QuadratureRule {
  std::vector<double> nodes;    // ascending, in [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(int n);

// `panels` equal subintervals of [-1, 1], each with an `order`-point
// Gauss-Legendre rule. Linear cost in the node count.
QuadratureRule composite_gauss_legendre(int panels, int order);

// Spherical Bessel j_0..j_{n_max}(x), Miller's downward recurrence normalized
// against j_0(x) = sin(x)/x. Accepts negative x via j_l(-x) = (-1)^l j_l(x).
std::vector<double> spherical_bessel_j(int n_max, double x);

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kummer 1F1(a; b; z) for complex z by direct power series. Terminates when
// |term| < 1e-16 |sum|; throws SeriesError if that does not happen.
std::complex<double> hyp1f1(double a, double b, std::complex<double> z, int max_terms = 20000);

double log_factorial(int n);

// Clebsch-Gordan <j1 0 j2 0 | j 0>. Zero unless j1+j2+j is even and the triangle holds.
double clebsch_gordan_000(int j1, int j2, int j);

}  // namespace orient::special
