#ifndef TUBESPEC_TORUS_HPP
#define TUBESPEC_TORUS_HPP

#include <vector>

#include "tubespec/cross_section.hpp"
#include "tubespec/eigensolve.hpp"
#include "tubespec/tube.hpp"

namespace tubespec {

/// Solve controls shared by the reference (torus) eigenvalue computations.
/// Sections are cheap, so the default linear-algebra tolerance is tight.
struct TorusSolveOptions {
  int base_cells = 0;  // 0 = per-shape default
  int levels = 2;
  EigSolveOptions solver = solver_options_with_tol(1e-9);
};

/// lambda0(kappa): lowest eigenvalue of the Dirichlet section problem with
/// both stiffness and mass weighted by (1 - kappa u2). This is the weighted
/// Rayleigh-quotient formulation and the primary computation path.
RefinedEigenResult lambda0_weighted(double kappa, const CrossSection& cs,
                                    const TorusSolveOptions& opts = {});

/// Same quantity through the unitarily equivalent form: unweighted Dirichlet
/// Laplacian plus the potential (-kappa^2/4) / (1 - kappa u2)^2. Used as a
/// cross-check of the weighted path.
RefinedEigenResult lambda0_potential(double kappa, const CrossSection& cs,
                                     const TorusSolveOptions& opts = {});

/// One angular fiber of the constant-curvature segment: index n, longitudinal
/// level E_n = (pi n / length)^2, transverse operator
/// -Laplace_D + (E_n - kappa^2/4) / (1 - kappa u2)^2.
struct TorusFiberSpec {
  double kappa = 0.0;
  CrossSection section;
  int fiber_index = 0;       // n >= 0 for Neumann ends, n >= 1 for Dirichlet
  double segment_length = M_PI;
  EndCondition ends = EndCondition::Neumann;

  double longitudinal_level() const;  // E_n
};

RefinedEigenResult fiber_eigenvalues(const TorusFiberSpec& fs, int k,
                                     const TorusSolveOptions& opts = {});

struct MergedFiberValue {
  double value;
  double error_estimate;
  int fiber_index;
  int index_in_fiber;
};

/// First k eigenvalues of the whole constant-curvature segment obtained by
/// merging fiber spectra (sorted ascending).
std::vector<MergedFiberValue> merged_fiber_eigenvalues(double kappa, const CrossSection& cs,
                                                       double length, int k,
                                                       EndCondition ends = EndCondition::Neumann,
                                                       const TorusSolveOptions& opts = {});

/// Direct (s, u)-discretized solve of the same segment through the tube
/// assembler; validates the fiber decomposition.
RefinedEigenResult segment_spectrum_direct(double kappa, const CrossSection& cs, double length,
                                           int k, EndCondition ends = EndCondition::Neumann,
                                           const MeshSpec& mesh = {},
                                           const TorusSolveOptions& opts = {});

struct SweepRow {
  double kappa;
  double lambda0;
  double error_estimate;
  int mesh_level;  // fine-level resolution indicator
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// lambda0 over a curvature grid with identical mesh topology across kappa,
/// so neighbouring rows are directly comparable.
SweepResult sweep_lambda0(const CrossSection& cs, const std::vector<double>& kappas,
                          const TorusSolveOptions& opts = {});

/// Default 21-point grid on [-0.9/a, 0.9/a].
std::vector<double> default_kappa_grid(const CrossSection& cs);

struct ThinWidthRow {
  double scale;             // epsilon
  double lambda0_scaled;    // lambda0 on epsilon*omega
  double mu0_scaled;        // same-mesh discrete mu0 on epsilon*omega
  double residual;          // lambda0 - mu0 + kappa^2/4
};

struct ThinWidthResult {
  std::vector<ThinWidthRow> rows;
  double fitted_order;  // log-log slope of |residual| vs scale
};

/// Thin-width behaviour: the residual lambda0^{eps omega}(kappa) - mu0^{eps
/// omega} + kappa^2/4 must shrink as eps -> 0. mu0 is computed on the same
/// mesh as lambda0 so discretization bias cancels in the difference.
ThinWidthResult thin_width_check(const CrossSection& cs, double kappa,
                                 const std::vector<double>& scales,
                                 const TorusSolveOptions& opts = {});

}  // namespace tubespec

#endif
