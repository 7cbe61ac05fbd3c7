#ifndef TUBESPEC_CROSS_SECTION_HPP
#define TUBESPEC_CROSS_SECTION_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tubespec/eigensolve.hpp"

namespace tubespec {

enum class SectionKind { Interval, Rectangle, Disk, Polygon };

std::string to_string(SectionKind k);

/// Bounded open connected cross-section, normalized so the centre of mass is
/// at the origin. Coordinates are u2 (for 1-d sections) or (u2, u3).
struct CrossSection {
  SectionKind kind = SectionKind::Interval;
  int dim = 1;  // 1 (interval) or 2

  // Normalized shape parameters.
  double half_width = 0.0;               // interval: (-half_width, half_width)
  Eigen::Vector2d half_sides{0.0, 0.0};  // rectangle, centered
  double radius = 0.0;                   // disk, centered
  std::vector<Eigen::Vector2d> vertices; // polygon, centered, counter-clockwise

  double a = 0.0;     // circumradius sup_{u in omega} |u| after centering
  double area = 0.0;  // measure |omega|

  Eigen::Vector2d centroid_shift{0.0, 0.0};  // translation applied by normalize

  bool contains(double u2, double u3) const;  // strict interior test
};

// Construction = normalization: shapes are given in raw coordinates and come
// back centered, with a and area filled in. Degenerate shapes are rejected.
CrossSection make_interval(double p, double q);
CrossSection make_rectangle(double width2, double width3);
CrossSection make_square(double side);
CrossSection make_disk(double radius, const Eigen::Vector2d& center = {0.0, 0.0});
CrossSection make_polygon(std::vector<Eigen::Vector2d> raw_vertices);

/// Uniformly scaled copy (epsilon * omega), used for thin-width studies.
CrossSection scaled(const CrossSection& cs, double factor);

struct MirrorResult {
  CrossSection shape;   // reflection through {u2 = 0}
  bool symmetric;       // omega equals its mirror image (up to 1e-12 * a)
};
MirrorResult mirror(const CrossSection& cs);

struct Mu0Options {
  bool force_numeric = false;  // skip the analytic formula where one exists
  int base_cells = 0;          // 0 = per-shape default
  int levels = 2;
  EigSolveOptions solver = solver_options_with_tol(1e-9);
};

struct Mu0Result {
  double value = 0.0;
  double error_estimate = 0.0;  // 0 for analytic values
  bool analytic = false;
  int boundary_order = 2;       // 1 flags the embedded-boundary polygon path
};

/// First Dirichlet eigenvalue of -Laplace on the cross-section.
Mu0Result mu0(const CrossSection& cs, const Mu0Options& opts = {});

}  // namespace tubespec

#endif
