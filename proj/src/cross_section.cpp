#include "tubespec/cross_section.hpp"

#include <algorithm>
#include <cmath>

#include "tubespec/cs_fem.hpp"
#include "tubespec/errors.hpp"
#include "tubespec/special.hpp"

namespace tubespec {

std::string to_string(SectionKind k) {
  switch (k) {
    case SectionKind::Interval: return "interval";
    case SectionKind::Rectangle: return "rectangle";
    case SectionKind::Disk: return "disk";
    case SectionKind::Polygon: return "polygon";
  }
  return "?";
}

bool CrossSection::contains(double u2, double u3) const {
  switch (kind) {
    case SectionKind::Interval:
      return std::abs(u2) < half_width;
    case SectionKind::Rectangle:
      return std::abs(u2) < half_sides[0] && std::abs(u3) < half_sides[1];
    case SectionKind::Disk:
      return u2 * u2 + u3 * u3 < radius * radius;
    case SectionKind::Polygon: {
      // Crossing-number test with a small boundary margin, so points sitting
      // exactly on an edge (grid lines often do) classify as outside on both
      // a shape and its mirror image.
      const std::size_t n = vertices.size();
      const double tol = 1e-12 * a;
      const Eigen::Vector2d pt{u2, u3};
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Eigen::Vector2d e = vertices[i] - vertices[j];
        const Eigen::Vector2d w = pt - vertices[j];
        const double t = std::clamp(w.dot(e) / e.squaredNorm(), 0.0, 1.0);
        if ((w - t * e).norm() <= tol) return false;
      }
      bool in = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& p = vertices[i];
        const auto& q = vertices[j];
        if ((p[1] > u3) != (q[1] > u3)) {
          const double x = p[0] + (u3 - p[1]) / (q[1] - p[1]) * (q[0] - p[0]);
          if (u2 < x) in = !in;
        }
      }
      return in;
    }
  }
  return false;
}

CrossSection make_interval(double p, double q) {
  if (!(q > p)) throw ValidationError("interval cross-section: need q > p");
  CrossSection cs;
  cs.kind = SectionKind::Interval;
  cs.dim = 1;
  cs.half_width = 0.5 * (q - p);
  cs.centroid_shift = {-0.5 * (p + q), 0.0};
  cs.a = cs.half_width;
  cs.area = q - p;
  return cs;
}

CrossSection make_rectangle(double width2, double width3) {
  if (!(width2 > 0.0) || !(width3 > 0.0))
    throw ValidationError("rectangle cross-section: sides must be positive");
  CrossSection cs;
  cs.kind = SectionKind::Rectangle;
  cs.dim = 2;
  cs.half_sides = {0.5 * width2, 0.5 * width3};
  cs.a = cs.half_sides.norm();
  cs.area = width2 * width3;
  return cs;
}

CrossSection make_square(double side) { return make_rectangle(side, side); }

CrossSection make_disk(double radius, const Eigen::Vector2d& center) {
  if (!(radius > 0.0)) throw ValidationError("disk cross-section: radius must be positive");
  CrossSection cs;
  cs.kind = SectionKind::Disk;
  cs.dim = 2;
  cs.radius = radius;
  cs.centroid_shift = -center;
  cs.a = radius;
  cs.area = M_PI * radius * radius;
  return cs;
}

CrossSection make_polygon(std::vector<Eigen::Vector2d> raw) {
  if (raw.size() < 3) throw ValidationError("polygon cross-section: need at least 3 vertices");
  // Signed area and centroid by the shoelace formulas.
  double area2 = 0.0;
  Eigen::Vector2d c{0.0, 0.0};
  const std::size_t n = raw.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = raw[i];
    const auto& q = raw[(i + 1) % n];
    const double cross = p[0] * q[1] - q[0] * p[1];
    area2 += cross;
    c += (p + q) * cross;
  }
  if (std::abs(area2) < 1e-300)
    throw ValidationError("polygon cross-section: degenerate (zero area)");
  if (area2 < 0.0) {  // make counter-clockwise
    std::reverse(raw.begin(), raw.end());
    area2 = -area2;
    c = -c;
  }
  c /= 3.0 * area2;

  CrossSection cs;
  cs.kind = SectionKind::Polygon;
  cs.dim = 2;
  cs.centroid_shift = -c;
  cs.vertices.reserve(n);
  double amax = 0.0;
  for (const auto& v : raw) {
    cs.vertices.push_back(v - c);
    amax = std::max(amax, cs.vertices.back().norm());
  }
  cs.a = amax;  // max vertex norm; exact for convex polygons
  cs.area = 0.5 * area2;
  return cs;
}

CrossSection scaled(const CrossSection& cs, double factor) {
  if (!(factor > 0.0)) throw ValidationError("scaled cross-section: factor must be positive");
  CrossSection out = cs;
  out.half_width *= factor;
  out.half_sides *= factor;
  out.radius *= factor;
  for (auto& v : out.vertices) v *= factor;
  out.a *= factor;
  out.area *= std::pow(factor, cs.dim);
  out.centroid_shift = {0.0, 0.0};
  return out;
}

MirrorResult mirror(const CrossSection& cs) {
  CrossSection m = cs;
  m.centroid_shift = {0.0, 0.0};
  bool symmetric = true;
  if (cs.kind == SectionKind::Polygon) {
    for (auto& v : m.vertices) v[0] = -v[0];
    std::reverse(m.vertices.begin(), m.vertices.end());  // restore orientation
    // Symmetric iff the reflected vertex set matches the original one.
    const double tol = 1e-12 * cs.a;
    for (const auto& v : m.vertices) {
      bool found = false;
      for (const auto& w : cs.vertices)
        if ((v - w).norm() <= tol) {
          found = true;
          break;
        }
      if (!found) {
        symmetric = false;
        break;
      }
    }
  }
  // Intervals, rectangles and centered disks are even in u2 by construction.
  return {m, symmetric};
}

Mu0Result mu0(const CrossSection& cs, const Mu0Options& opts) {
  Mu0Result r;
  if (!opts.force_numeric) {
    switch (cs.kind) {
      case SectionKind::Interval: {
        const double w = 2.0 * cs.half_width;
        r.value = M_PI * M_PI / (w * w);
        r.analytic = true;
        return r;
      }
      case SectionKind::Rectangle: {
        const double w2 = 2.0 * cs.half_sides[0], w3 = 2.0 * cs.half_sides[1];
        r.value = M_PI * M_PI * (1.0 / (w2 * w2) + 1.0 / (w3 * w3));
        r.analytic = true;
        return r;
      }
      case SectionKind::Disk: {
        const double j01 = bessel_first_zero(0.0);
        r.value = j01 * j01 / (cs.radius * cs.radius);
        r.analytic = true;
        return r;
      }
      case SectionKind::Polygon:
        break;  // numeric only
    }
  }

  const int base = opts.base_cells > 0 ? opts.base_cells : default_section_cells(cs);
  SectionCoefficients co;  // plain Dirichlet Laplacian
  int boundary_order = 2;
  auto builder = [&](int level) {
    auto d = discretize_section(cs, base << level, co);
    boundary_order = d.boundary_order;
    return d.pencil;
  };
  EigSolveOptions sopts = opts.solver;
  sopts.k = 1;
  RefinedEigenResult ref = refine_extrapolate(builder, opts.levels, sopts);
  r.value = ref.value();
  r.error_estimate = ref.error();
  r.analytic = false;
  r.boundary_order = boundary_order;
  return r;
}

}  // namespace tubespec
