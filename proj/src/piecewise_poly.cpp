#include "tubespec/piecewise_poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "tubespec/errors.hpp"

namespace tubespec {

double PolyPiece::eval(double s) const {
  const double t = s - s_lo;
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
  return v;
}

double PolyPiece::eval_derivative(double s) const {
  const double t = s - s_lo;
  double v = 0.0;
  for (int j = static_cast<int>(coeffs.size()) - 1; j >= 1; --j) v = v * t + j * coeffs[j];
  return v;
}

int PolyPiece::degree() const {
  for (int j = static_cast<int>(coeffs.size()) - 1; j >= 0; --j)
    if (coeffs[j] != 0.0) return j;
  return 0;
}

PiecewisePoly::PiecewisePoly(std::vector<PolyPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw ValidationError("piecewise polynomial: no pieces");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const PolyPiece& a, const PolyPiece& b) { return a.s_lo < b.s_lo; });
  const double span = pieces_.back().s_hi - pieces_.front().s_lo;
  if (!(span > 0.0)) throw ValidationError("piecewise polynomial: empty domain");
  const double tol = 1e-12 * span;
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    if (!(pieces_[p].s_hi > pieces_[p].s_lo))
      throw ValidationError("piecewise polynomial: piece with nonpositive length");
    if (pieces_[p].coeffs.empty())
      throw ValidationError("piecewise polynomial: piece with no coefficients");
    for (double c : pieces_[p].coeffs)
      if (!std::isfinite(c)) throw ValidationError("piecewise polynomial: non-finite coefficient");
    if (p > 0 && std::abs(pieces_[p].s_lo - pieces_[p - 1].s_hi) > tol)
      throw ValidationError("piecewise polynomial: pieces leave a gap or overlap");
  }
}

PiecewisePoly PiecewisePoly::constant(double s_lo, double s_hi, double value) {
  return PiecewisePoly({PolyPiece{s_lo, s_hi, {value}}});
}

const PolyPiece& PiecewisePoly::piece_at(double s) const {
  // Clamp to the domain; interior lookups land in the piece whose half-open
  // interval [s_lo, s_hi) contains s.
  if (s <= pieces_.front().s_lo) return pieces_.front();
  if (s >= pieces_.back().s_hi) return pieces_.back();
  int lo = 0, hi = static_cast<int>(pieces_.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (s < pieces_[mid].s_hi)
      hi = mid;
    else
      lo = mid + 1;
  }
  return pieces_[lo];
}

double PiecewisePoly::operator()(double s) const { return piece_at(s).eval(s); }

std::vector<double> PiecewisePoly::interior_breakpoints() const {
  std::vector<double> b;
  for (std::size_t p = 0; p + 1 < pieces_.size(); ++p) b.push_back(pieces_[p].s_hi);
  return b;
}

std::vector<double> real_poly_roots(const std::vector<double>& coeffs, double lo, double hi) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && coeffs[deg] == 0.0) --deg;
  std::vector<double> roots;
  if (deg <= 0) return roots;
  if (deg == 1) {
    const double r = -coeffs[0] / coeffs[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
  for (int i = 0; i < deg; ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= 1e-10 * (1.0 + std::abs(z.real()))) {
      const double r = z.real();
      if (r >= lo - 1e-14 * (1.0 + std::abs(lo)) && r <= hi + 1e-14 * (1.0 + std::abs(hi)))
        roots.push_back(std::clamp(r, lo, hi));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::pair<double, double> PiecewisePoly::range() const {
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  auto consider = [&](double v) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  };
  for (const auto& p : pieces_) {
    consider(p.eval(p.s_lo));
    consider(p.eval(p.s_hi));
    if (p.degree() >= 2) {
      std::vector<double> dcoeffs(p.coeffs.size() - 1);
      for (std::size_t j = 1; j < p.coeffs.size(); ++j)
        dcoeffs[j - 1] = static_cast<double>(j) * p.coeffs[j];
      for (double t : real_poly_roots(dcoeffs, 0.0, p.s_hi - p.s_lo))
        consider(p.eval(p.s_lo + t));
    }
  }
  return {vmin, vmax};
}

bool PiecewisePoly::constant_on(double a, double b) const {
  const PolyPiece& p = piece_at(0.5 * (a + b));
  const double tol = 1e-12 * (domain_hi() - domain_lo());
  if (a < p.s_lo - tol || b > p.s_hi + tol) return false;
  return p.degree() == 0;
}

bool PiecewisePoly::is_zero() const {
  for (const auto& p : pieces_)
    for (double c : p.coeffs)
      if (c != 0.0) return false;
  return true;
}

}  // namespace tubespec
