#ifndef TUBESPEC_QUADRATURE_HPP
#define TUBESPEC_QUADRATURE_HPP

#include <array>
#include <cstddef>

namespace tubespec {

/// Gauss-Legendre rule on the reference interval [0, 1].
struct GaussRule {
  int npts;
  std::array<double, 5> x;  // nodes in (0,1)
  std::array<double, 5> w;  // weights summing to 1
};

/// Rules up to 5 points; assembly uses 2 or 3, oracles use 5.
const GaussRule& gauss_rule(int npts);

}  // namespace tubespec

#endif
