#include "tubespec/tube.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>
#include <thread>

#include "tubespec/cs_fem.hpp"
#include "tubespec/errors.hpp"
#include "tubespec/quadrature.hpp"

namespace tubespec {

namespace {

constexpr double kJacobianFloor = 1e-3;  // reject 1 - a|kappa1| below this

struct SGrid {
  std::vector<double> nodes;
  std::vector<int> piece_cells;  // cells per curvature piece at this level
};

SGrid build_s_grid(const CurveSpec& curve, int base_cells, int level) {
  const auto bps = curve.breakpoints();
  const double L = curve.length();
  SGrid g;
  g.nodes.push_back(curve.s0);
  for (std::size_t p = 0; p + 1 < bps.size(); ++p) {
    const double len = bps[p + 1] - bps[p];
    int n = std::max(1, static_cast<int>(std::lround(base_cells * len / L)));
    n <<= level;
    g.piece_cells.push_back(n);
    for (int i = 1; i <= n; ++i)
      g.nodes.push_back(i == n ? bps[p + 1] : bps[p] + len * i / n);
  }
  return g;
}

int default_s_cells(int d) { return d == 2 ? 256 : 64; }
int default_u_cells(int d) { return d == 2 ? 64 : 24; }

struct Coefficients {
  // Stiffness coefficient matrix C = h G^{-1} (what multiplies grad . grad)
  // and the mass weight h, at one quadrature point.
  double c_ss, c_s2, c_s3, c_22, c_23, c_33, mass;
};

Coefficients tube_coefficients(const CurveSpec& curve, double s, double u2, double u3) {
  const double k1 = curve.kappa1(s);
  const double h = 1.0 - k1 * u2;
  if (h < kJacobianFloor)
    throw ValidationError("tube assembly: 1 - kappa1 u2 = " + std::to_string(h) +
                          " below floor at s = " + std::to_string(s) +
                          " (coordinate degeneracy)");
  Coefficients c{};
  c.c_ss = 1.0 / h;
  c.mass = h;
  if (curve.d == 2) {
    c.c_22 = h;
    return c;
  }
  const double tau = curve.kappa(2, s);
  const double h2 = -tau * u3;
  const double h3 = tau * u2;
  c.c_s2 = -h2 / h;
  c.c_s3 = -h3 / h;
  c.c_22 = h + h2 * h2 / h;
  c.c_23 = h2 * h3 / h;
  c.c_33 = h + h3 * h3 / h;
  return c;
}

struct AssemblyWork {
  const TubeProblem* p;
  const TubeGrid* grid;
  SparseSymmetricBuilder K;
  SparseSymmetricBuilder M;

  AssemblyWork(const TubeProblem& prob, const TubeGrid& g)
      : p(&prob), grid(&g), K(g.n_unknowns), M(g.n_unknowns) {}

  void run(int s_begin, int s_end);
  void run2d(int s_begin, int s_end);
  void run3d(int s_begin, int s_end);
};

void AssemblyWork::run(int s_begin, int s_end) {
  if (p->curve.d == 2)
    run2d(s_begin, s_end);
  else
    run3d(s_begin, s_end);
}

void AssemblyWork::run2d(int s_begin, int s_end) {
  const auto& sn = grid->s_nodes;
  const auto& un = grid->u2_nodes;
  const int nu = static_cast<int>(un.size()) - 1;
  const auto& kappa1 = p->curve.curvatures[0];

  for (int is = s_begin; is < s_end; ++is) {
    const double sa = sn[is], ws = sn[is + 1] - sn[is];
    const GaussRule& q = gauss_rule(kappa1.constant_on(sa, sn[is + 1]) ? 2 : 3);
    for (int iu = 0; iu < nu; ++iu) {
      const double ua = un[iu], wu = un[iu + 1] - un[iu];
      const int gi[4] = {grid->unknown[grid->node_id(is, iu, 0)],
                         grid->unknown[grid->node_id(is, iu + 1, 0)],
                         grid->unknown[grid->node_id(is + 1, iu, 0)],
                         grid->unknown[grid->node_id(is + 1, iu + 1, 0)]};
      if (gi[0] < 0 && gi[1] < 0 && gi[2] < 0 && gi[3] < 0) continue;
      double kl[4][4] = {}, ml[4][4] = {};
      for (int gs = 0; gs < q.npts; ++gs)
        for (int gu = 0; gu < q.npts; ++gu) {
          const double s = sa + q.x[gs] * ws;
          const double u = ua + q.x[gu] * wu;
          const double wq = q.w[gs] * q.w[gu] * ws * wu;
          const Coefficients c = tube_coefficients(p->curve, s, u, 0.0);
          const double ps[2] = {1.0 - q.x[gs], q.x[gs]};
          const double pu[2] = {1.0 - q.x[gu], q.x[gu]};
          const double dps[2] = {-1.0 / ws, 1.0 / ws};
          const double dpu[2] = {-1.0 / wu, 1.0 / wu};
          double phi[4], ds[4], du[4];
          for (int a = 0; a < 4; ++a) {
            const int as = a >> 1, au = a & 1;  // local order: (s,u) = (0,0),(0,1),(1,0),(1,1)
            phi[a] = ps[as] * pu[au];
            ds[a] = dps[as] * pu[au];
            du[a] = ps[as] * dpu[au];
          }
          for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) {
              kl[a][b] += wq * (c.c_ss * ds[a] * ds[b] + c.c_22 * du[a] * du[b]);
              ml[a][b] += wq * c.mass * phi[a] * phi[b];
            }
        }
      for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b)
          if (gi[a] >= 0 && gi[b] >= 0) {
            const int r = std::min(gi[a], gi[b]), cidx = std::max(gi[a], gi[b]);
            K.add(r, cidx, kl[a][b]);
            M.add(r, cidx, ml[a][b]);
          }
    }
  }
}

void AssemblyWork::run3d(int s_begin, int s_end) {
  const auto& sn = grid->s_nodes;
  const auto& u2n = grid->u2_nodes;
  const auto& u3n = grid->u3_nodes;
  const int n2 = static_cast<int>(u2n.size()) - 1;
  const int n3 = static_cast<int>(u3n.size()) - 1;
  const auto& kappa1 = p->curve.curvatures[0];
  const auto& kappa2 = p->curve.curvatures[1];

  for (int is = s_begin; is < s_end; ++is) {
    const double sa = sn[is], ws = sn[is + 1] - sn[is];
    const bool const_cell =
        kappa1.constant_on(sa, sn[is + 1]) && kappa2.constant_on(sa, sn[is + 1]);
    const GaussRule& q = gauss_rule(const_cell ? 2 : 3);
    for (int i2 = 0; i2 < n2; ++i2)
      for (int i3 = 0; i3 < n3; ++i3) {
        int gi[8];
        bool any = false;
        for (int a = 0; a < 8; ++a) {
          const int as = a >> 2, a2 = (a >> 1) & 1, a3 = a & 1;
          gi[a] = grid->unknown[grid->node_id(is + as, i2 + a2, i3 + a3)];
          any = any || gi[a] >= 0;
        }
        if (!any) continue;
        const double u2a = u2n[i2], w2 = u2n[i2 + 1] - u2n[i2];
        const double u3a = u3n[i3], w3 = u3n[i3 + 1] - u3n[i3];
        double kl[8][8] = {}, ml[8][8] = {};
        for (int gs = 0; gs < q.npts; ++gs)
          for (int g2 = 0; g2 < q.npts; ++g2)
            for (int g3 = 0; g3 < q.npts; ++g3) {
              const double s = sa + q.x[gs] * ws;
              const double u2 = u2a + q.x[g2] * w2;
              const double u3 = u3a + q.x[g3] * w3;
              const double wq = q.w[gs] * q.w[g2] * q.w[g3] * ws * w2 * w3;
              const Coefficients c = tube_coefficients(p->curve, s, u2, u3);
              const double ps[2] = {1.0 - q.x[gs], q.x[gs]};
              const double p2[2] = {1.0 - q.x[g2], q.x[g2]};
              const double p3[2] = {1.0 - q.x[g3], q.x[g3]};
              const double dps[2] = {-1.0 / ws, 1.0 / ws};
              const double dp2[2] = {-1.0 / w2, 1.0 / w2};
              const double dp3[2] = {-1.0 / w3, 1.0 / w3};
              double phi[8], gs_[8], g2_[8], g3_[8];
              for (int a = 0; a < 8; ++a) {
                const int as = a >> 2, a2 = (a >> 1) & 1, a3 = a & 1;
                phi[a] = ps[as] * p2[a2] * p3[a3];
                gs_[a] = dps[as] * p2[a2] * p3[a3];
                g2_[a] = ps[as] * dp2[a2] * p3[a3];
                g3_[a] = ps[as] * p2[a2] * dp3[a3];
              }
              for (int a = 0; a < 8; ++a)
                for (int b = a; b < 8; ++b) {
                  const double grad =
                      c.c_ss * gs_[a] * gs_[b] + c.c_22 * g2_[a] * g2_[b] +
                      c.c_33 * g3_[a] * g3_[b] +
                      c.c_s2 * (gs_[a] * g2_[b] + g2_[a] * gs_[b]) +
                      c.c_s3 * (gs_[a] * g3_[b] + g3_[a] * gs_[b]) +
                      c.c_23 * (g2_[a] * g3_[b] + g3_[a] * g2_[b]);
                  kl[a][b] += wq * grad;
                  ml[a][b] += wq * c.mass * phi[a] * phi[b];
                }
            }
        for (int a = 0; a < 8; ++a)
          for (int b = a; b < 8; ++b)
            if (gi[a] >= 0 && gi[b] >= 0) {
              const int r = std::min(gi[a], gi[b]), cidx = std::max(gi[a], gi[b]);
              K.add(r, cidx, kl[a][b]);
              M.add(r, cidx, ml[a][b]);
            }
      }
  }
}

}  // namespace

std::string to_string(EndCondition e) {
  switch (e) {
    case EndCondition::Neumann: return "neumann";
    case EndCondition::Dirichlet: return "dirichlet";
    case EndCondition::Periodic: return "periodic";
  }
  return "?";
}

void TubeProblem::validate() const {
  curve.validate();
  if (curve.d != 2 && curve.d != 3)
    throw ValidationError("tube: full solves support d = 2 or 3 only");
  if (curve.d == 2 && section.dim != 1)
    throw ValidationError("tube: d = 2 needs an interval cross-section");
  if (curve.d == 3 && section.dim != 2)
    throw ValidationError("tube: d = 3 needs a planar cross-section");
  auto [kmin, kmax] = curve.kappa1_range();
  const double norm = std::max(std::abs(kmin), std::abs(kmax));
  if (!(section.a * norm < 1.0))
    throw ValidationError("tube: curvature bound violated, a*||kappa1||_inf = " +
                          std::to_string(section.a * norm) + " (must be < 1)");
  if (1.0 - section.a * norm < kJacobianFloor)
    throw ValidationError("tube: 1 - a*||kappa1||_inf below conditioning floor " +
                          std::to_string(kJacobianFloor));
  if (ends == EndCondition::Periodic) {
    for (int i = 1; i < curve.d; ++i) {
      const double dk = std::abs(curve.kappa(i, curve.s0) - curve.kappa(i, curve.s1));
      if (dk > 1e-12 * (1.0 + std::abs(curve.kappa(i, curve.s0))))
        throw ValidationError("tube: periodic ends need matching curvatures at s0 and s1");
    }
  }
  if (mesh.levels < 1) throw ValidationError("tube: need at least one mesh level");
  if (n_eigenvalues < 1) throw ValidationError("tube: n_eigenvalues must be >= 1");
}

int TubeGrid::node_id(int is, int i2, int i3) const {
  if (ends == EndCondition::Periodic) is %= distinct_s_nodes;
  const int n2 = static_cast<int>(u2_nodes.size());
  const int n3 = d == 3 ? static_cast<int>(u3_nodes.size()) : 1;
  return (is * n2 + i2) * n3 + i3;
}

Eigen::VectorXd TubeGrid::full_values(const Eigen::VectorXd& x) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<long>(unknown.size()));
  for (std::size_t i = 0; i < unknown.size(); ++i)
    if (unknown[i] >= 0) full[static_cast<long>(i)] = x[unknown[i]];
  return full;
}

TubeDiscretization assemble_tube(const TubeProblem& p, int level) {
  p.validate();
  const int d = p.curve.d;
  const int base_s = p.mesh.s_cells > 0 ? p.mesh.s_cells : default_s_cells(d);
  const int base_u = p.mesh.u_cells > 0 ? p.mesh.u_cells : default_u_cells(d);

  TubeGrid grid;
  grid.d = d;
  grid.ends = p.ends;
  SGrid sg = build_s_grid(p.curve, base_s, level);
  grid.s_nodes = sg.nodes;
  const int ns = grid.s_cells();
  if (p.ends == EndCondition::Periodic && ns < 3)
    throw ValidationError("tube: periodic ends need at least 3 cells along the curve");
  grid.distinct_s_nodes = p.ends == EndCondition::Periodic ? ns : ns + 1;

  const int nu = base_u << level;
  std::function<bool(int, int)> u_unknown;
  int n2cells, n3cells = 0;
  if (d == 2) {
    grid.u2_nodes = symmetric_grid(p.section.half_width, nu);
    n2cells = nu;
    u_unknown = [n2cells](int i2, int) { return i2 > 0 && i2 < n2cells; };
  } else {
    switch (p.section.kind) {
      case SectionKind::Rectangle: {
        const double w2 = p.section.half_sides[0], w3 = p.section.half_sides[1];
        n2cells = nu;
        n3cells = std::max(4, static_cast<int>(std::lround(nu * w3 / w2)));
        grid.u2_nodes = symmetric_grid(w2, n2cells);
        grid.u3_nodes = symmetric_grid(w3, n3cells);
        u_unknown = [n2cells, n3cells](int i2, int i3) {
          return i2 > 0 && i2 < n2cells && i3 > 0 && i3 < n3cells;
        };
        break;
      }
      case SectionKind::Disk: {
        // Embedded-boundary grid: nodes outside or on the circle are fixed.
        // First-order boundary treatment; fine for exploration, not used by
        // tight-tolerance checks.
        n2cells = n3cells = nu;
        grid.u2_nodes = symmetric_grid(p.section.radius, nu);
        grid.u3_nodes = symmetric_grid(p.section.radius, nu);
        const CrossSection& cs = p.section;
        const auto& g2 = grid.u2_nodes;
        const auto& g3 = grid.u3_nodes;
        u_unknown = [&cs, &g2, &g3](int i2, int i3) { return cs.contains(g2[i2], g3[i3]); };
        break;
      }
      default:
        throw ValidationError("tube: d = 3 cross-section must be rectangle, square or disk");
    }
  }

  const int s_nodes_total = grid.distinct_s_nodes;
  const int n2 = static_cast<int>(grid.u2_nodes.size());
  const int n3 = d == 3 ? static_cast<int>(grid.u3_nodes.size()) : 1;
  grid.unknown.assign(static_cast<std::size_t>(s_nodes_total) * n2 * n3, -1);
  int next = 0;
  for (int is = 0; is < s_nodes_total; ++is) {
    const bool s_fixed = p.ends == EndCondition::Dirichlet && (is == 0 || is == ns);
    for (int i2 = 0; i2 < n2; ++i2)
      for (int i3 = 0; i3 < n3; ++i3) {
        if (s_fixed) continue;
        if (!u_unknown(i2, d == 3 ? i3 : 0)) continue;
        grid.unknown[grid.node_id(is, i2, i3)] = next++;
      }
  }
  grid.n_unknowns = next;
  if (next == 0) throw ValidationError("tube: mesh has no unknowns");

  const int nthreads = std::max(1, p.threads);
  std::vector<std::unique_ptr<AssemblyWork>> work;
  std::vector<std::pair<int, int>> ranges;
  const int chunk = (ns + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const int lo = t * chunk, hi = std::min(ns, lo + chunk);
    if (lo >= hi) break;
    work.push_back(std::make_unique<AssemblyWork>(p, grid));
    ranges.emplace_back(lo, hi);
  }
  if (work.size() == 1) {
    work[0]->run(ranges[0].first, ranges[0].second);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(work.size());
    for (std::size_t t = 0; t < work.size(); ++t)
      pool.emplace_back([&, t] {
        try {
          work[t]->run(ranges[t].first, ranges[t].second);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  // Deterministic ordered merge: chunks enter in s order regardless of
  // thread completion order, so values are independent of scheduling.
  TubeDiscretization out;
  out.grid = std::move(grid);
  if (work.size() == 1) {
    out.pencil.stiffness = work[0]->K.finalize();
    out.pencil.mass = work[0]->M.finalize();
  } else {
    SparseSymmetricBuilder K(out.grid.n_unknowns), M(out.grid.n_unknowns);
    for (auto& w : work) {
      SparseSymmetric ks = w->K.finalize(), ms = w->M.finalize();
      Eigen::SparseMatrix<double> kf = ks.to_eigen_full(), mf = ms.to_eigen_full();
      for (int i = 0; i < kf.outerSize(); ++i)
        for (Eigen::SparseMatrix<double>::InnerIterator it(kf, i); it; ++it)
          if (it.row() <= it.col()) K.add(it.row(), it.col(), it.value());
      for (int i = 0; i < mf.outerSize(); ++i)
        for (Eigen::SparseMatrix<double>::InnerIterator it(mf, i); it; ++it)
          if (it.row() <= it.col()) M.add(it.row(), it.col(), it.value());
    }
    out.pencil.stiffness = K.finalize();
    out.pencil.mass = M.finalize();
  }
  out.pencil.mesh_h = (p.curve.length() / ns);
  out.pencil.cells = ns;
  return out;
}

/// Interpolation matrix between two nested discretization levels, exact for
/// the multilinear element space (fixed coarse nodes contribute zero).
Eigen::SparseMatrix<double> build_prolongation(const TubeGrid& coarse, const TubeGrid& fine) {
  using Pair = std::pair<int, double>;
  const bool periodic = coarse.ends == EndCondition::Periodic;
  const int cs = coarse.distinct_s_nodes;
  auto axis_weights = [](int fine_idx, int n_coarse, bool wrap) {
    std::vector<Pair> w;
    if (fine_idx % 2 == 0) {
      w.emplace_back(fine_idx / 2, 1.0);
    } else {
      w.emplace_back(fine_idx / 2, 0.5);
      const int nxt = wrap ? (fine_idx / 2 + 1) % n_coarse : fine_idx / 2 + 1;
      w.emplace_back(nxt, 0.5);
    }
    return w;
  };

  std::vector<Eigen::Triplet<double>> trips;
  const int f2 = static_cast<int>(fine.u2_nodes.size());
  const int f3 = fine.d == 3 ? static_cast<int>(fine.u3_nodes.size()) : 1;
  for (int is = 0; is < fine.distinct_s_nodes; ++is) {
    const auto ws = axis_weights(is, cs, periodic);
    for (int i2 = 0; i2 < f2; ++i2) {
      const auto w2 = axis_weights(i2, static_cast<int>(coarse.u2_nodes.size()), false);
      for (int i3 = 0; i3 < f3; ++i3) {
        const int fu = fine.unknown[fine.node_id(is, i2, i3)];
        if (fu < 0) continue;
        const auto w3 = fine.d == 3
                            ? axis_weights(i3, static_cast<int>(coarse.u3_nodes.size()), false)
                            : std::vector<Pair>{{0, 1.0}};
        for (const auto& [js, vs] : ws)
          for (const auto& [j2, v2] : w2)
            for (const auto& [j3, v3] : w3) {
              const int cu = coarse.unknown[coarse.node_id(js, j2, j3)];
              if (cu >= 0) trips.emplace_back(fu, cu, vs * v2 * v3);
            }
      }
    }
  }
  Eigen::SparseMatrix<double> P(fine.n_unknowns, coarse.n_unknowns);
  P.setFromTriplets(trips.begin(), trips.end());
  P.makeCompressed();
  return P;
}

Eigen::VectorXd prolong_tube_grids(const TubeGrid& coarse, const TubeGrid& fine,
                                   const Eigen::VectorXd& x) {
  return build_prolongation(coarse, fine) * x;
}

RefinedEigenResult tube_threshold(const TubeProblem& p) {
  p.validate();
  EigSolveOptions opts = p.solver;
  opts.k = p.n_eigenvalues;

  // Embedded disk grids are not nested level-to-level, so no warm start there.
  const bool nested = !(p.curve.d == 3 && p.section.kind == SectionKind::Disk);
  auto grids = std::make_shared<std::vector<TubeGrid>>();
  PencilBuilder builder = [&p, grids, nested](int level) {
    TubeDiscretization d = assemble_tube(p, level);
    grids->push_back(d.grid);
    Pencil pen = std::move(d.pencil);
    if (nested && level > 0)
      pen.prolongation = build_prolongation(grids->at(level - 1), grids->at(level));
    return pen;
  };
  return refine_extrapolate(builder, p.mesh.levels, opts);
}

RefinedEigenResult export_field(const TubeProblem& p, std::ostream& out, int mode) {
  TubeProblem q = p;
  q.solver.want_vectors = true;
  q.n_eigenvalues = std::max(q.n_eigenvalues, mode + 1);
  RefinedEigenResult r = tube_threshold(q);

  TubeGrid grid = assemble_tube(q, q.mesh.levels - 1).grid;
  const Eigen::VectorXd full = grid.full_values(r.fine_eigenvectors.col(mode));

  const int d = grid.d;
  out << (d == 2 ? "s,u2,psi\n" : "s,u2,u3,psi\n");
  char buf[128];
  const int n2 = static_cast<int>(grid.u2_nodes.size());
  const int n3 = d == 3 ? static_cast<int>(grid.u3_nodes.size()) : 1;
  for (int is = 0; is < static_cast<int>(grid.s_nodes.size()); ++is)
    for (int i2 = 0; i2 < n2; ++i2)
      for (int i3 = 0; i3 < n3; ++i3) {
        const double psi = full[grid.node_id(is, i2, i3)];
        if (d == 2)
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.s_nodes[is],
                        grid.u2_nodes[i2], psi);
        else
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid.s_nodes[is],
                        grid.u2_nodes[i2], grid.u3_nodes[i3], psi);
        out << buf;
      }
  return r;
}

}  // namespace tubespec
