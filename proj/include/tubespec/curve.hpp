#ifndef TUBESPEC_CURVE_HPP
#define TUBESPEC_CURVE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tubespec/cross_section.hpp"
#include "tubespec/piecewise_poly.hpp"

namespace tubespec {

/// Reference curve given by its curvature functions kappa_1 .. kappa_{d-1}
/// on a finite arc-length interval. This is the only geometric input the
/// spectral problem sees; the embedding is reconstructed for diagnostics only.
struct CurveSpec {
  int d = 2;           // ambient dimension
  double s0 = 0.0, s1 = 0.0;
  std::vector<PiecewisePoly> curvatures;  // kappa_1 .. kappa_{d-1}

  void validate() const;
  double length() const { return s1 - s0; }
  double kappa(int index, double s) const;  // index in [1, d-1]
  double kappa1(double s) const { return kappa(1, s); }

  /// Exact {inf, sup} of kappa_1 over the interval.
  std::pair<double, double> kappa1_range() const;

  /// Skew-symmetric curvature matrix (the Serret-Frenet generator) at s.
  Eigen::MatrixXd curvature_matrix(double s) const;

  /// Sorted union of curvature piece boundaries, including the endpoints.
  std::vector<double> breakpoints() const;

  static CurveSpec constant_curvature(int d, double s0, double s1,
                                      const std::vector<double>& kappa_values);
};

/// Tube metric data at one point (s, u): the metric G, its closed-form
/// inverse, the Jacobian factor h = 1 - kappa_1(s) u_2 and the higher-
/// curvature couplings h_mu = -K_{mu nu}(s) u_nu.
struct MetricSample {
  Eigen::MatrixXd G;
  Eigen::MatrixXd G_inv;
  double h = 1.0;
  Eigen::VectorXd h_mu;  // entries h_2 .. h_d

  double det() const { return h * h; }  // |G| = h^2

  /// T in the splitting G^{-1} = diag(h^{-2}, 1, ..., 1) + h^{-2} T.
  /// T depends on the higher curvatures only and vanishes with them.
  Eigen::MatrixXd splitting_T() const;

  /// A = diag(1, 0, ..., 0) + T; positive semidefinite (a rank-one square).
  Eigen::MatrixXd coercivity_A() const;
};

/// Closed-form metric evaluation; throws if h <= 0 at the sample (the tube
/// coordinates degenerate there).
MetricSample metric(const CurveSpec& spec, double s, const Eigen::VectorXd& u);

struct GapResult {
  double gap;          // xi' G^{-1} xi - sum_{mu >= 2} xi_mu^2
  double closed_form;  // h^{-2} (-xi_1 + h_mu xi_mu)^2, equal up to roundoff
};

/// Coercivity gap of the inverse metric against its transverse block;
/// nonnegative for every sample and covector.
GapResult coercivity_gap(const MetricSample& sample, const Eigen::VectorXd& xi);

struct FrenetState {
  double s = 0.0;
  Eigen::VectorXd position;  // Gamma(s)
  Eigen::MatrixXd frame;     // columns e_1 .. e_d, orthonormal
};

/// Fixed-step classical RK4 integration of the frame system
///   Gamma' = e_1,  e_i' = K_ij e_j
/// from the identity frame at s0, re-orthonormalized every step (modified
/// Gram-Schmidt). Diagnostics and plotting only; the solver never uses it.
std::vector<FrenetState> frenet_integrate(const CurveSpec& spec, double step);

/// Validity report for the tube built over this curve.
struct ValidityReport {
  double circumradius = 0.0;  // a of the cross-section
  double kappa1_sup = 0.0, kappa1_inf = 0.0;
  double a_kappa1_norm = 0.0;       // a * ||kappa_1||_inf
  bool curvature_bound_ok = false;  // condition (i): a ||kappa_1||_inf < 1
  bool overlap_ok = true;           // condition (ii), sampled bounding-disk test
  bool overlap_heuristic = true;    // (ii) is best-effort by design
  double min_clearance = 0.0;       // min(center distance - 2a) over tested pairs
  bool curve_closed = false;
  std::string note;
};

/// Checks the two usability conditions for the tube coordinates: (i) the
/// exact curvature bound, and (ii) a heuristic self-overlap test that samples
/// cross-section bounding disks along the integrated embedding.
ValidityReport check_h2(const CurveSpec& spec, const CrossSection& cs);

}  // namespace tubespec

#endif
