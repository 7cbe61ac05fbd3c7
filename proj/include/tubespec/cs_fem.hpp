#ifndef TUBESPEC_CS_FEM_HPP
#define TUBESPEC_CS_FEM_HPP

#include <functional>

#include "tubespec/cross_section.hpp"
#include "tubespec/eigensolve.hpp"

namespace tubespec {

/// Coefficients of the cross-section form
///   a(psi, phi) = int_omega [ Ws grad(psi).grad(phi) + V psi phi ] du,
///   b(psi, phi) = int_omega   Wm psi phi du,
/// with homogeneous Dirichlet conditions on the boundary.
/// Null callbacks mean the constant 1 (or 0 for the potential).
struct SectionCoefficients {
  std::function<double(double, double)> stiffness_weight;
  std::function<double(double, double)> mass_weight;
  std::function<double(double, double)> potential;
  int quad_points = 0;  // 0 = auto: 2 for plain weights, 3 with potential/curvilinear terms
};

struct SectionDiscretization {
  Pencil pencil;
  std::vector<Eigen::Vector2d> node_coords;  // unknown index -> coordinates
  int resolution = 0;                        // cells indicator at this level
  int boundary_order = 2;                    // 1 marks the embedded polygon path
};

/// Conforming Galerkin discretization of the cross-section form.
///   interval  : P1 on a symmetric uniform grid
///   rectangle : Q1 tensor grid, symmetric per direction
///   disk      : Q1 on a polar (r, theta) tensor grid with a collapsed pole ring
///   polygon   : Q1 on a Cartesian grid, nodes outside/on the boundary fixed to
///               zero (first-order boundary treatment)
SectionDiscretization discretize_section(const CrossSection& cs, int cells,
                                         const SectionCoefficients& co);

/// Per-shape default resolution for the coarse level.
int default_section_cells(const CrossSection& cs);

/// Uniform grid on [-half_width, half_width] that is exactly mirror-symmetric
/// in floating point (nodes satisfy u[i] == -u[n-i] bitwise).
std::vector<double> symmetric_grid(double half_width, int cells);

}  // namespace tubespec

#endif
