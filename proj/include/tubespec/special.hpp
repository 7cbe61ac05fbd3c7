#ifndef TUBESPEC_SPECIAL_HPP
#define TUBESPEC_SPECIAL_HPP

namespace tubespec {

/// First positive zero j_{nu,1} of the Bessel function J_nu, nu in [0, 5].
/// Accurate to ~1e-14 relative (bracketing scan + bisection on J_nu).
double bessel_first_zero(double nu);

/// Surface measure of the unit m-sphere embedded in R^{m+1}:
/// |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2).
double sphere_measure(int m);

}  // namespace tubespec

#endif
