#include "tubespec/torus.hpp"

#include <algorithm>
#include <cmath>

#include "tubespec/cs_fem.hpp"
#include "tubespec/errors.hpp"

namespace tubespec {

namespace {

constexpr double kConditioningFloor = 1e-3;

void require_valid_kappa(double kappa, const CrossSection& cs) {
  const double ak = cs.a * std::abs(kappa);
  if (!(ak < 1.0))
    throw ValidationError("lambda0: curvature bound violated, a*|kappa| = " +
                          std::to_string(ak) + " (must be < 1)");
  if (1.0 - ak < kConditioningFloor)
    throw ValidationError("lambda0: 1 - a*|kappa| = " + std::to_string(1.0 - ak) +
                          " below conditioning floor " + std::to_string(kConditioningFloor));
}

RefinedEigenResult solve_section(const CrossSection& cs, const SectionCoefficients& co,
                                 const TorusSolveOptions& opts, int k) {
  const int base = opts.base_cells > 0 ? opts.base_cells : default_section_cells(cs);
  auto builder = [&](int level) { return discretize_section(cs, base << level, co).pencil; };
  EigSolveOptions sopts = opts.solver;
  sopts.k = k;
  return refine_extrapolate(builder, opts.levels, sopts);
}

}  // namespace

RefinedEigenResult lambda0_weighted(double kappa, const CrossSection& cs,
                                    const TorusSolveOptions& opts) {
  require_valid_kappa(kappa, cs);
  SectionCoefficients co;
  if (kappa != 0.0) {
    auto w = [kappa](double u2, double) { return 1.0 - kappa * u2; };
    co.stiffness_weight = w;
    co.mass_weight = w;
  }
  return solve_section(cs, co, opts, std::max(1, opts.solver.k));
}

RefinedEigenResult lambda0_potential(double kappa, const CrossSection& cs,
                                     const TorusSolveOptions& opts) {
  require_valid_kappa(kappa, cs);
  SectionCoefficients co;
  if (kappa != 0.0) {
    const double c = -0.25 * kappa * kappa;
    co.potential = [kappa, c](double u2, double) {
      const double h = 1.0 - kappa * u2;
      return c / (h * h);
    };
  }
  return solve_section(cs, co, opts, std::max(1, opts.solver.k));
}

double TorusFiberSpec::longitudinal_level() const {
  const double base = M_PI * fiber_index / segment_length;
  return base * base;
}

RefinedEigenResult fiber_eigenvalues(const TorusFiberSpec& fs, int k,
                                     const TorusSolveOptions& opts) {
  require_valid_kappa(fs.kappa, fs.section);
  if (!(fs.segment_length > 0.0))
    throw ValidationError("fiber: segment length must be positive");
  const int nmin = fs.ends == EndCondition::Dirichlet ? 1 : 0;
  if (fs.fiber_index < nmin)
    throw ValidationError("fiber: index must be >= " + std::to_string(nmin) +
                          " for these end conditions");
  if (fs.ends == EndCondition::Periodic)
    throw ValidationError("fiber: periodic segment fibers are not defined here");

  const double en = fs.longitudinal_level();
  const double kappa = fs.kappa;
  SectionCoefficients co;
  const double num = en - 0.25 * kappa * kappa;
  if (num != 0.0 || kappa != 0.0) {
    co.potential = [kappa, num](double u2, double) {
      const double h = 1.0 - kappa * u2;
      return num / (h * h);
    };
  }
  return solve_section(fs.section, co, opts, k);
}

std::vector<MergedFiberValue> merged_fiber_eigenvalues(double kappa, const CrossSection& cs,
                                                       double length, int k,
                                                       EndCondition ends,
                                                       const TorusSolveOptions& opts) {
  std::vector<MergedFiberValue> merged;
  const int nmin = ends == EndCondition::Dirichlet ? 1 : 0;
  for (int n = nmin; n < nmin + 256; ++n) {
    TorusFiberSpec fs{kappa, cs, n, length, ends};
    RefinedEigenResult r = fiber_eigenvalues(fs, k, opts);
    for (int j = 0; j < static_cast<int>(r.extrapolated.size()); ++j)
      merged.push_back({r.extrapolated[j], r.error_estimate[j], n, j});
    std::sort(merged.begin(), merged.end(),
              [](const MergedFiberValue& a, const MergedFiberValue& b) {
                return a.value < b.value;
              });
    // Fibers are ordered in n; once a fiber opens above the k-th merged value
    // no later fiber can contribute.
    if (static_cast<int>(merged.size()) >= k &&
        r.extrapolated.front() > merged[k - 1].value + 1e-9)
      break;
  }
  if (static_cast<int>(merged.size()) > k) merged.resize(k);
  return merged;
}

RefinedEigenResult segment_spectrum_direct(double kappa, const CrossSection& cs, double length,
                                           int k, EndCondition ends, const MeshSpec& mesh,
                                           const TorusSolveOptions& opts) {
  require_valid_kappa(kappa, cs);
  if (std::abs(kappa) > 2.0 * M_PI / length * (1.0 + 1e-12))
    throw ValidationError("segment: |kappa| <= 2 pi / length required for a torus segment");

  std::vector<double> kappas(cs.dim, 0.0);
  kappas[0] = kappa;
  TubeProblem p;
  p.curve = CurveSpec::constant_curvature(cs.dim + 1, 0.0, length, kappas);
  p.section = cs;
  p.ends = ends;
  p.mesh = mesh;
  p.mesh.levels = opts.levels;
  p.n_eigenvalues = k;
  p.solver = opts.solver;
  return tube_threshold(p);
}

std::vector<double> default_kappa_grid(const CrossSection& cs) {
  std::vector<double> grid(21);
  const double kmax = 0.9 / cs.a;
  for (int i = 0; i < 21; ++i) grid[i] = -kmax + 2.0 * kmax * i / 20.0;
  if (grid.size() % 2 == 1) grid[grid.size() / 2] = 0.0;
  return grid;
}

SweepResult sweep_lambda0(const CrossSection& cs, const std::vector<double>& kappas,
                          const TorusSolveOptions& opts) {
  SweepResult out;
  const int base = opts.base_cells > 0 ? opts.base_cells : default_section_cells(cs);
  const int fine = base << (opts.levels - 1);
  for (double kappa : kappas) {
    RefinedEigenResult r = lambda0_weighted(kappa, cs, opts);
    out.rows.push_back({kappa, r.value(), r.error(), fine});
  }
  return out;
}

ThinWidthResult thin_width_check(const CrossSection& cs, double kappa,
                                 const std::vector<double>& scales,
                                 const TorusSolveOptions& opts) {
  ThinWidthResult out;
  for (double eps : scales) {
    CrossSection small = scaled(cs, eps);
    RefinedEigenResult lam = lambda0_weighted(kappa, small, opts);
    RefinedEigenResult mu = lambda0_weighted(0.0, small, opts);
    const double residual = lam.value() - mu.value() + 0.25 * kappa * kappa;
    out.rows.push_back({eps, lam.value(), mu.value(), residual});
  }
  // Log-log fit of |residual| against the scale; identically-zero residuals
  // (the straight case) report order 0.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& row : out.rows) {
    if (row.residual == 0.0) continue;
    const double x = std::log(row.scale), y = std::log(std::abs(row.residual));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  out.fitted_order = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return out;
}

}  // namespace tubespec
