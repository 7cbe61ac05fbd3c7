#ifndef TUBESPEC_TUBE_HPP
#define TUBESPEC_TUBE_HPP

#include <iosfwd>

#include "tubespec/cross_section.hpp"
#include "tubespec/curve.hpp"
#include "tubespec/eigensolve.hpp"

namespace tubespec {

enum class EndCondition { Neumann, Dirichlet, Periodic };

std::string to_string(EndCondition e);

struct MeshSpec {
  int s_cells = 0;  // cells along the curve at the coarse level; 0 = default
  int u_cells = 0;  // cells across the section per direction; 0 = default
  int levels = 2;   // nested refinement levels, mesh ratio 2
};

/// Full curved-tube eigenvalue problem on I x omega: Dirichlet side walls,
/// selectable end condition, d = 2 or 3.
struct TubeProblem {
  CurveSpec curve;
  CrossSection section;
  EndCondition ends = EndCondition::Neumann;
  MeshSpec mesh;
  int n_eigenvalues = 1;
  EigSolveOptions solver;
  int threads = 1;

  void validate() const;
};

/// Node bookkeeping of one discretization level.
struct TubeGrid {
  int d = 2;
  EndCondition ends = EndCondition::Neumann;
  std::vector<double> s_nodes;   // size s_cells+1; for periodic ends the last
                                 // node is identified with the first
  std::vector<double> u2_nodes;
  std::vector<double> u3_nodes;  // empty for d = 2
  int distinct_s_nodes = 0;
  std::vector<int> unknown;      // full-grid node -> unknown index, -1 fixed
  int n_unknowns = 0;

  int s_cells() const { return static_cast<int>(s_nodes.size()) - 1; }
  int node_id(int is, int i2, int i3) const;
  Eigen::VectorXd full_values(const Eigen::VectorXd& x) const;  // zeros at fixed nodes
};

struct TubeDiscretization {
  Pencil pencil;
  TubeGrid grid;
};

/// Conforming Galerkin assembly of the tube form with multilinear tensor
/// elements: entries int grad(phi_a) . (h G^{-1}) grad(phi_b) ds du and
/// int phi_a phi_b h ds du, per-cell Gauss quadrature (2 points per direction,
/// 3 where kappa_1 is not constant on the cell). Curvature piece boundaries
/// always sit on mesh lines.
TubeDiscretization assemble_tube(const TubeProblem& p, int level);

/// Linear interpolation of an unknown vector from a coarse tensor grid onto
/// its ratio-2 refinement (exact for the multilinear element space).
Eigen::VectorXd prolong_tube_grids(const TubeGrid& coarse, const TubeGrid& fine,
                                   const Eigen::VectorXd& x);

/// Lowest eigenvalue(s): nested two-level (or more) solve with Richardson
/// extrapolation; raw fine-level values are conforming upper bounds.
RefinedEigenResult tube_threshold(const TubeProblem& p);

/// Solves with eigenvectors and writes the requested mode as CSV
/// (s, u2[, u3], psi) over all grid nodes of the finest level.
RefinedEigenResult export_field(const TubeProblem& p, std::ostream& out, int mode = 0);

}  // namespace tubespec

#endif
