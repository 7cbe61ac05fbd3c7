#include "tubespec/special.hpp"

#include <cmath>

#include "tubespec/errors.hpp"

namespace tubespec {

double bessel_first_zero(double nu) {
  if (!(nu >= 0.0) || nu > 5.0)
    throw ValidationError("bessel_first_zero: order must lie in [0, 5]");

  auto f = [nu](double x) { return std::cyl_bessel_j(nu, x); };

  // J_nu ~ x^nu > 0 near 0; scan outward for the first sign change.
  // j_{5,1} < 9.8, so 12 is a safe ceiling for nu <= 5.
  double lo = 0.05, hi = 0.0;
  double flo = f(lo);
  for (double x = 0.1; x <= 12.0; x += 0.05) {
    double fx = f(x);
    if (flo > 0.0 && fx <= 0.0) {
      hi = x;
      break;
    }
    lo = x;
    flo = fx;
  }
  if (hi == 0.0) throw SolverError("bessel_first_zero: no sign change found");

  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double sphere_measure(int m) {
  if (m < 1) throw ValidationError("sphere_measure: dimension must be >= 1");
  const double half = 0.5 * (m + 1);
  return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

}  // namespace tubespec
