#include "tubespec/cs_fem.hpp"

#include <cmath>

#include "tubespec/errors.hpp"
#include "tubespec/quadrature.hpp"

namespace tubespec {

namespace {

double eval_or(const std::function<double(double, double)>& f, double u2, double u3,
               double fallback) {
  return f ? f(u2, u3) : fallback;
}

int auto_quad(const SectionCoefficients& co, bool curvilinear) {
  if (co.quad_points > 0) return co.quad_points;
  if (co.potential || curvilinear) return 3;
  return 2;
}

SectionDiscretization discretize_interval(const CrossSection& cs, int n,
                                          const SectionCoefficients& co) {
  const auto u = symmetric_grid(cs.half_width, n);
  const GaussRule& q = gauss_rule(auto_quad(co, false));

  SectionDiscretization out;
  out.resolution = n;
  const int nun = n - 1;  // interior nodes
  SparseSymmetricBuilder K(nun), M(nun);
  auto unknown = [n](int i) { return (i >= 1 && i <= n - 1) ? i - 1 : -1; };

  for (int c = 0; c < n; ++c) {
    const double w = u[c + 1] - u[c];
    double kl[2][2] = {{0, 0}, {0, 0}}, ml[2][2] = {{0, 0}, {0, 0}};
    for (int g = 0; g < q.npts; ++g) {
      const double x = u[c] + q.x[g] * w;
      const double wq = q.w[g] * w;
      const double ws = eval_or(co.stiffness_weight, x, 0.0, 1.0);
      const double wm = eval_or(co.mass_weight, x, 0.0, 1.0);
      const double v = co.potential ? co.potential(x, 0.0) : 0.0;
      const double phi[2] = {1.0 - q.x[g], q.x[g]};
      const double dphi[2] = {-1.0 / w, 1.0 / w};
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) {
          kl[a2][b2] += wq * (ws * dphi[a2] * dphi[b2] + v * phi[a2] * phi[b2]);
          ml[a2][b2] += wq * wm * phi[a2] * phi[b2];
        }
    }
    const int gi[2] = {unknown(c), unknown(c + 1)};
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b2 = a2; b2 < 2; ++b2)
        if (gi[a2] >= 0 && gi[b2] >= 0) {
          K.add(gi[a2], gi[b2], kl[a2][b2]);
          M.add(gi[a2], gi[b2], ml[a2][b2]);
        }
  }
  out.pencil.stiffness = K.finalize();
  out.pencil.mass = M.finalize();
  out.pencil.mesh_h = 2.0 * cs.half_width / n;
  out.pencil.cells = n;
  out.node_coords.reserve(nun);
  for (int i = 1; i <= n - 1; ++i) out.node_coords.emplace_back(u[i], 0.0);
  return out;
}

// Shared Cartesian Q1 assembly over a tensor grid; `is_unknown` decides which
// nodes carry degrees of freedom (interior for rectangles, strictly-inside for
// embedded polygons). Cells with no unknown node are skipped.
SectionDiscretization discretize_cartesian(const std::vector<double>& ux,
                                           const std::vector<double>& uy,
                                           const std::function<bool(int, int)>& is_unknown,
                                           const SectionCoefficients& co, int resolution,
                                           int boundary_order) {
  const int nx = static_cast<int>(ux.size()) - 1;
  const int ny = static_cast<int>(uy.size()) - 1;
  const GaussRule& q = gauss_rule(auto_quad(co, false));

  std::vector<int> unknown((nx + 1) * (ny + 1), -1);
  std::vector<Eigen::Vector2d> coords;
  int nun = 0;
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      if (is_unknown(i, j)) {
        unknown[i * (ny + 1) + j] = nun++;
        coords.emplace_back(ux[i], uy[j]);
      }
  if (nun == 0) throw ValidationError("cross-section mesh too coarse: no interior nodes");

  SparseSymmetricBuilder K(nun), M(nun);
  double kl[4][4], ml[4][4];
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int gi[4] = {unknown[i * (ny + 1) + j], unknown[(i + 1) * (ny + 1) + j],
                         unknown[i * (ny + 1) + j + 1], unknown[(i + 1) * (ny + 1) + j + 1]};
      if (gi[0] < 0 && gi[1] < 0 && gi[2] < 0 && gi[3] < 0) continue;
      const double wx = ux[i + 1] - ux[i], wy = uy[j + 1] - uy[j];
      for (auto& row : kl) row[0] = row[1] = row[2] = row[3] = 0.0;
      for (auto& row : ml) row[0] = row[1] = row[2] = row[3] = 0.0;
      for (int gx = 0; gx < q.npts; ++gx)
        for (int gy = 0; gy < q.npts; ++gy) {
          const double x = ux[i] + q.x[gx] * wx;
          const double y = uy[j] + q.x[gy] * wy;
          const double wq = q.w[gx] * q.w[gy] * wx * wy;
          const double ws = eval_or(co.stiffness_weight, x, y, 1.0);
          const double wm = eval_or(co.mass_weight, x, y, 1.0);
          const double v = co.potential ? co.potential(x, y) : 0.0;
          // local node order: (0,0), (1,0), (0,1), (1,1) in (x, y)
          const double px[2] = {1.0 - q.x[gx], q.x[gx]};
          const double py[2] = {1.0 - q.x[gy], q.x[gy]};
          const double dpx[2] = {-1.0 / wx, 1.0 / wx};
          const double dpy[2] = {-1.0 / wy, 1.0 / wy};
          double phi[4], gx2[4], gy2[4];
          for (int a2 = 0; a2 < 4; ++a2) {
            const int ax = a2 & 1, ay = a2 >> 1;
            phi[a2] = px[ax] * py[ay];
            gx2[a2] = dpx[ax] * py[ay];
            gy2[a2] = px[ax] * dpy[ay];
          }
          for (int a2 = 0; a2 < 4; ++a2)
            for (int b2 = a2; b2 < 4; ++b2) {
              kl[a2][b2] += wq * (ws * (gx2[a2] * gx2[b2] + gy2[a2] * gy2[b2]) +
                                  v * phi[a2] * phi[b2]);
              ml[a2][b2] += wq * wm * phi[a2] * phi[b2];
            }
        }
      for (int a2 = 0; a2 < 4; ++a2)
        for (int b2 = a2; b2 < 4; ++b2)
          if (gi[a2] >= 0 && gi[b2] >= 0) {
            int r = gi[a2], c = gi[b2];
            K.add(r, c, kl[a2][b2]);
            M.add(r, c, ml[a2][b2]);
          }
    }

  SectionDiscretization out;
  out.resolution = resolution;
  out.boundary_order = boundary_order;
  out.pencil.stiffness = K.finalize();
  out.pencil.mass = M.finalize();
  out.pencil.mesh_h = std::max(ux[1] - ux[0], uy[1] - uy[0]);
  out.pencil.cells = resolution;
  out.node_coords = std::move(coords);
  return out;
}

SectionDiscretization discretize_rectangle(const CrossSection& cs, int n,
                                           const SectionCoefficients& co) {
  const double w2 = cs.half_sides[0], w3 = cs.half_sides[1];
  const int n2 = n;
  const int n3 = std::max(4, static_cast<int>(std::lround(n * w3 / w2)));
  const auto ux = symmetric_grid(w2, n2);
  const auto uy = symmetric_grid(w3, n3);
  auto interior = [&](int i, int j) { return i > 0 && i < n2 && j > 0 && j < n3; };
  return discretize_cartesian(ux, uy, interior, co, n, 2);
}

SectionDiscretization discretize_polygon(const CrossSection& cs, int n,
                                         const SectionCoefficients& co) {
  double bx = 0.0, by = 0.0;
  for (const auto& v : cs.vertices) {
    bx = std::max(bx, std::abs(v[0]));
    by = std::max(by, std::abs(v[1]));
  }
  const auto ux = symmetric_grid(bx, n);
  const auto uy = symmetric_grid(by, n);
  auto inside = [&](int i, int j) { return cs.contains(ux[i], uy[j]); };
  return discretize_cartesian(ux, uy, inside, co, n, 1);
}

SectionDiscretization discretize_disk(const CrossSection& cs, int n,
                                      const SectionCoefficients& co) {
  const int nr = n;
  int nt = 2 * n;
  nt += (4 - nt % 4) % 4;  // keep the grid invariant under both reflections
  const double R = cs.radius;
  const double dr = R / nr, dt = 2.0 * M_PI / nt;
  const GaussRule& q = gauss_rule(co.quad_points > 0 ? co.quad_points : 3);

  // Unknowns: pole node, then rings i = 1 .. nr-1; ring nr is the boundary.
  const int nun = 1 + (nr - 1) * nt;
  auto ring_node = [&](int i, int j) {  // i >= 1
    return 1 + (i - 1) * nt + (j % nt);
  };

  SparseSymmetricBuilder K(nun), M(nun);
  std::vector<int> gi(4);
  std::vector<double> shp(4), dshp_r(4), dshp_t(4);

  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      // Local nodes: pole cells collapse the inner edge into one node.
      int nl;
      if (i == 0) {
        nl = 3;
        gi = {0, ring_node(1, j), ring_node(1, j + 1)};
      } else {
        nl = 4;
        gi[0] = ring_node(i, j);
        gi[1] = ring_node(i, j + 1);
        gi[2] = (i + 1 < nr) ? ring_node(i + 1, j) : -1;
        gi[3] = (i + 1 < nr) ? ring_node(i + 1, j + 1) : -1;
      }
      double kl[4][4] = {}, ml[4][4] = {};
      for (int gr = 0; gr < q.npts; ++gr)
        for (int gt = 0; gt < q.npts; ++gt) {
          const double rho = q.x[gr], tau = q.x[gt];
          const double r = (i + rho) * dr;
          const double th = (j + tau) * dt;
          const double wq = q.w[gr] * q.w[gt] * dr * dt * r;
          const double u2 = r * std::cos(th), u3 = r * std::sin(th);
          const double ws = eval_or(co.stiffness_weight, u2, u3, 1.0);
          const double wm = eval_or(co.mass_weight, u2, u3, 1.0);
          const double v = co.potential ? co.potential(u2, u3) : 0.0;
          if (i == 0) {
            shp[0] = 1.0 - rho;
            shp[1] = rho * (1.0 - tau);
            shp[2] = rho * tau;
            dshp_r[0] = -1.0 / dr;
            dshp_r[1] = (1.0 - tau) / dr;
            dshp_r[2] = tau / dr;
            dshp_t[0] = 0.0;
            dshp_t[1] = -rho / dt;
            dshp_t[2] = rho / dt;
          } else {
            const double pr[2] = {1.0 - rho, rho}, pt[2] = {1.0 - tau, tau};
            const double dpr[2] = {-1.0 / dr, 1.0 / dr}, dpt[2] = {-1.0 / dt, 1.0 / dt};
            for (int a2 = 0; a2 < 4; ++a2) {
              const int ar = a2 >> 1, at = a2 & 1;  // order: (i,j),(i,j+1),(i+1,j),(i+1,j+1)
              shp[a2] = pr[ar] * pt[at];
              dshp_r[a2] = dpr[ar] * pt[at];
              dshp_t[a2] = pr[ar] * dpt[at];
            }
          }
          const double inv_r2 = 1.0 / (r * r);
          for (int a2 = 0; a2 < nl; ++a2)
            for (int b2 = a2; b2 < nl; ++b2) {
              kl[a2][b2] += wq * (ws * (dshp_r[a2] * dshp_r[b2] +
                                        inv_r2 * dshp_t[a2] * dshp_t[b2]) +
                                  v * shp[a2] * shp[b2]);
              ml[a2][b2] += wq * wm * shp[a2] * shp[b2];
            }
        }
      for (int a2 = 0; a2 < nl; ++a2)
        for (int b2 = a2; b2 < nl; ++b2)
          if (gi[a2] >= 0 && gi[b2] >= 0) {
            int r0 = gi[a2], c0 = gi[b2];
            K.add(std::min(r0, c0), std::max(r0, c0), kl[a2][b2]);
            M.add(std::min(r0, c0), std::max(r0, c0), ml[a2][b2]);
          }
    }

  SectionDiscretization out;
  out.resolution = n;
  out.pencil.stiffness = K.finalize();
  out.pencil.mass = M.finalize();
  out.pencil.mesh_h = dr;
  out.pencil.cells = n;
  out.node_coords.reserve(nun);
  out.node_coords.emplace_back(0.0, 0.0);
  for (int i = 1; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      out.node_coords.emplace_back(i * dr * std::cos(j * dt), i * dr * std::sin(j * dt));
  return out;
}

}  // namespace

std::vector<double> symmetric_grid(double half_width, int cells) {
  if (cells < 2) throw ValidationError("grid needs at least 2 cells");
  std::vector<double> u(cells + 1);
  const double step = 2.0 * half_width / cells;
  for (int i = 0; 2 * i <= cells; ++i) {
    u[i] = -half_width + i * step;
    u[cells - i] = -u[i];
  }
  if (cells % 2 == 0) u[cells / 2] = 0.0;
  return u;
}

int default_section_cells(const CrossSection& cs) {
  switch (cs.kind) {
    case SectionKind::Interval: return 256;
    case SectionKind::Rectangle: return 64;
    case SectionKind::Disk: return 48;
    case SectionKind::Polygon: return 64;
  }
  return 64;
}

SectionDiscretization discretize_section(const CrossSection& cs, int cells,
                                         const SectionCoefficients& co) {
  switch (cs.kind) {
    case SectionKind::Interval: return discretize_interval(cs, cells, co);
    case SectionKind::Rectangle: return discretize_rectangle(cs, cells, co);
    case SectionKind::Disk: return discretize_disk(cs, cells, co);
    case SectionKind::Polygon: return discretize_polygon(cs, cells, co);
  }
  throw ValidationError("discretize_section: unknown section kind");
}

}  // namespace tubespec
