#ifndef TUBESPEC_PIECEWISE_POLY_HPP
#define TUBESPEC_PIECEWISE_POLY_HPP

#include <utility>
#include <vector>

namespace tubespec {

/// One polynomial piece on [s_lo, s_hi]; coefficients are in the local
/// variable t = s - s_lo, ascending degree.
struct PolyPiece {
  double s_lo = 0.0;
  double s_hi = 0.0;
  std::vector<double> coeffs;

  double eval(double s) const;
  double eval_derivative(double s) const;
  int degree() const;
};

/// Piecewise-polynomial function of arc length. Pieces must cover a finite
/// interval with no gaps; continuity across pieces is NOT required.
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  explicit PiecewisePoly(std::vector<PolyPiece> pieces);

  static PiecewisePoly constant(double s_lo, double s_hi, double value);

  double operator()(double s) const;
  double domain_lo() const { return pieces_.front().s_lo; }
  double domain_hi() const { return pieces_.back().s_hi; }
  const std::vector<PolyPiece>& pieces() const { return pieces_; }

  /// Interior piece boundaries (excludes the domain endpoints).
  std::vector<double> interior_breakpoints() const;

  /// Exact {min, max} over the domain: piece endpoints plus real stationary
  /// points of each piece (polynomial roots of the derivative).
  std::pair<double, double> range() const;

  /// True if the restriction to [a, b] lies in one piece and is constant there.
  bool constant_on(double a, double b) const;
  bool is_zero() const;

 private:
  const PolyPiece& piece_at(double s) const;
  std::vector<PolyPiece> pieces_;
};

/// Real roots of c[0] + c[1] x + ... in [lo, hi] via the companion matrix.
std::vector<double> real_poly_roots(const std::vector<double>& coeffs, double lo, double hi);

}  // namespace tubespec

#endif
