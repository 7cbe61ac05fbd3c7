#ifndef TUBESPEC_VERIFICATION_HPP
#define TUBESPEC_VERIFICATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "tubespec/torus.hpp"
#include "tubespec/tube.hpp"

namespace tubespec {

/// Geometry-only uniform lower bound for lambda0:
///   c = (|S^{d-1}| / (d |S^1| a |omega|))^{2/d} j_{(d-2)/2,1}^2.
double faber_krahn_constant(int d, double a, double area);

/// Ashbaugh-Exner lower-bound ratio (bound / mu0) for infinite tubes with a
/// ball cross-section and N discrete eigenvalues:
///   d=2: 3^{1-N} (j_{0,1}/j_{1,1})^2,  d=3 (N=1): (pi/j_{3/2,1})^2.
double ae_bound_ratio(int d, int N);

struct ValueWithError {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Everything needed to judge the curvature lower bound on one tube:
/// left side from the full solve, right side from the torus reference values
/// at the exact curvature extrema, plus the uniform constant.
struct BoundReport {
  // Problem summary
  int d = 2;
  std::string section_kind;
  double section_a = 0.0, section_area = 0.0;
  double interval_lo = 0.0, interval_hi = 0.0;
  std::string ends;
  int fine_s_cells = 0, fine_unknowns = 0;

  // Left side (tube threshold)
  double lhs_raw = 0.0;           // finest conforming value: certified upper bound
  ValueWithError lhs;             // extrapolated

  // Curvature data and right side
  double kappa1_sup = 0.0, kappa1_inf = 0.0;
  ValueWithError lambda0_at_sup, lambda0_at_inf;
  double rhs = 0.0;          // min of the two extrapolated lambda0 values
  double rhs_guarded = 0.0;  // rhs minus its error estimate

  // Profile of lambda0(kappa1(s)) on a 101-point s grid (sharper reference)
  double profile_min = 0.0;
  bool profile_consistent = false;  // profile_min agrees with rhs within tolerances

  // Uniform constant
  double uniform_constant_c = 0.0;

  double margin_lhs_rhs = 0.0;  // lhs_raw - rhs_guarded
  double margin_rhs_c = 0.0;    // rhs - c

  bool curvature_bound_ok = false;  // a ||kappa1||_inf < 1
  bool verdict = false;             // lhs_raw >= rhs_guarded (up to roundoff)
  bool constant_planar_curvature = false;  // equality case: constant kappa1, no twist
  std::optional<bool> sharp;  // |lhs - rhs| <= 2*(combined errors); equality cases only
};

struct VerifyOptions {
  TorusSolveOptions torus;
  int profile_points = 101;
};

/// Computes the lower-bound report for one tube problem: solves the tube,
/// evaluates lambda0 at the exact sup/inf of kappa1 and along an s-grid, and
/// forms the verdicts from the stored numbers only.
BoundReport verify_bound(const TubeProblem& p, const VerifyOptions& opts = {});

struct BoundComparison {
  int d = 0, N = 0;
  double ae_ratio = 0.0;
  double fk_ratio = 0.0;  // c / mu0 for the given cross-section
  std::optional<double> rhs_ratio;  // min lambda0 over a kappa range, / mu0
  bool fk_better = false;
};

/// Side-by-side ratios (all relative to mu0): the Ashbaugh-Exner bound, the
/// uniform geometric constant, and optionally the curvature bound over a
/// kappa range.
BoundComparison compare_bounds(int d, int N, const CrossSection& cs,
                               std::optional<std::pair<double, double>> kappa_range = {},
                               const TorusSolveOptions& opts = {});

struct DirichletSweepResult {
  SweepResult sweep;
  double argmin_kappa = 0.0;
  double min_value = 0.0;
};

/// Dirichlet-end segment eigenvalue over a curvature grid (direct tube
/// solves at constant curvature, identical mesh across the grid).
DirichletSweepResult sweep_dirichlet_ends(const CrossSection& cs, double length,
                                          const std::vector<double>& kappas,
                                          const MeshSpec& mesh = {},
                                          const TorusSolveOptions& opts = {});

struct RegressionCase {
  std::string name;
  TubeProblem problem;
  bool expect_sharp = false;
};

/// Built-in tube geometries covering straight, bent, sign-changing,
/// piecewise, twisted, helical, near-critical and periodic-ring cases.
std::vector<RegressionCase> regression_suite();

}  // namespace tubespec

#endif
