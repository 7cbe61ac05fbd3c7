#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tubespec/errors.hpp"
#include "tubespec/special.hpp"
#include "tubespec/torus.hpp"
#include "tubespec/verification.hpp"

using namespace tubespec;

namespace {

// Frozen reference values from the finite-difference oracle of the
// potential-form operator (-psi'' + V, Dirichlet), Richardson extrapolated at
// n = 4000/8000 on omega = (-1, 1); see support/oracles.hpp.
constexpr double kLambda0_025 = 2.451379004711;
constexpr double kLambda0_050 = 2.397724587315;
constexpr double kLambda0_080 = 2.240313313746;
// Fiber n=1, kappa=0.5, |I|=pi: same oracle with V = (1 - 1/16)/(1-u/2)^2.
constexpr double kFiber1_0 = 3.489412081894;
constexpr double kFiber1_1 = 11.047822728908;
// Embedded-boundary FD oracle on the 401^2 grid restricted to the unit disk
// (first-order boundary treatment, so agreement is at the percent level).
constexpr double kDiskLambda0_050_fd401 = 5.696035123;

TorusSolveOptions fast_interval() {
  TorusSolveOptions o;
  o.base_cells = 256;
  return o;
}

}  // namespace

TEST_CASE("lambda0 at zero curvature is mu0") {
  CHECK(lambda0_weighted(0.0, make_interval(-1.0, 1.0)).value() ==
        doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-8));
  CHECK(lambda0_potential(0.0, make_interval(-1.0, 1.0)).value() ==
        doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-8));
}

TEST_CASE("lambda0 on the interval against the frozen oracle values") {
  const CrossSection cs = make_interval(-1.0, 1.0);
  CHECK(lambda0_weighted(0.25, cs, fast_interval()).value() ==
        doctest::Approx(kLambda0_025).epsilon(5e-7));
  CHECK(lambda0_weighted(0.5, cs, fast_interval()).value() ==
        doctest::Approx(kLambda0_050).epsilon(5e-7));
  CHECK(lambda0_weighted(0.8, cs, fast_interval()).value() ==
        doctest::Approx(kLambda0_080).epsilon(5e-7));
  // strictly between the uniform constant and mu0
  const double c = faber_krahn_constant(2, cs.a, cs.area);
  CHECK(lambda0_weighted(0.5, cs, fast_interval()).value() > c);
  CHECK(lambda0_weighted(0.5, cs, fast_interval()).value() < M_PI * M_PI / 4.0);
}

TEST_CASE("oracle self-check: the frozen values reproduce") {
  auto V = [](double u) {
    const double h = 1.0 - 0.5 * u;
    return -0.0625 / (h * h);
  };
  auto v = oracle::fd_schroedinger_1d_extrap(-1.0, 1.0, V, 2000, 1);
  CHECK(v[0] == doctest::Approx(kLambda0_050).epsilon(1e-8));
}

TEST_CASE("weighted and potential formulations agree within error estimates") {
  const CrossSection cs = make_interval(-1.0, 1.0);
  for (double kappa : {-0.8, -0.5, -0.25, 0.25, 0.5, 0.8}) {
    RefinedEigenResult w = lambda0_weighted(kappa, cs, fast_interval());
    RefinedEigenResult p = lambda0_potential(kappa, cs, fast_interval());
    CHECK(std::abs(w.value() - p.value()) <= w.error() + p.error());
  }
}

TEST_CASE("lambda0 is even on a symmetric section (mirrored discretization)") {
  const CrossSection cs = make_interval(-1.0, 1.0);
  for (double kappa : {0.25, 0.5, 0.9}) {
    const double plus = lambda0_weighted(kappa, cs, fast_interval()).value();
    const double minus = lambda0_weighted(-kappa, cs, fast_interval()).value();
    CHECK(std::abs(plus - minus) <= 1e-10 * plus);
  }
}

TEST_CASE("mirrored section swaps the curvature sign") {
  // lambda0 on the mirrored shape at +kappa equals lambda0 on the original
  // at -kappa; exercised on an asymmetric polygon (embedded grid).
  CrossSection tri = make_polygon({{0.0, 0.0}, {1.4, 0.0}, {0.0, 1.1}});
  CrossSection tri_m = mirror(tri).shape;
  TorusSolveOptions o;
  o.base_cells = 48;
  const double a = lambda0_weighted(0.3, tri_m, o).value();
  const double b = lambda0_weighted(-0.3, tri, o).value();
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("lambda0 on the unit disk") {
  const CrossSection disk = make_disk(1.0);
  const double j01 = bessel_first_zero(0.0);

  TorusSolveOptions o;
  o.base_cells = 48;
  // zero curvature reproduces the analytic disk eigenvalue through the polar
  // grid (second order + extrapolation)
  CHECK(lambda0_weighted(0.0, disk, o).value() ==
        doctest::Approx(j01 * j01).epsilon(1e-5));

  // curved: below mu0 and near the embedded-boundary oracle
  RefinedEigenResult r = lambda0_weighted(0.5, disk, o);
  CHECK(r.value() < j01 * j01);
  CHECK(std::abs(r.value() - kDiskLambda0_050_fd401) / r.value() < 8e-3);
  // runtime oracle at a coarser grid brackets the same neighbourhood
  const double fd200 = oracle::fd_disk_weighted_lambda0(1.0, 0.5, 200);
  CHECK(std::abs(r.value() - fd200) / r.value() < 1.2e-2);
}

TEST_CASE("curvature bound and conditioning floor are enforced") {
  const CrossSection cs = make_interval(-1.0, 1.0);
  CHECK_THROWS_AS(lambda0_weighted(1.5, cs), ValidationError);
  CHECK_THROWS_AS(lambda0_weighted(0.9995, cs), ValidationError);
  CHECK_THROWS_AS(lambda0_potential(-1.0, cs), ValidationError);
}

TEST_CASE("fiber operators") {
  const CrossSection cs = make_interval(-1.0, 1.0);

  // n = 0 coincides with the potential formulation of lambda0
  TorusFiberSpec f0{0.5, cs, 0, M_PI, EndCondition::Neumann};
  RefinedEigenResult r0 = fiber_eigenvalues(f0, 1, fast_interval());
  RefinedEigenResult p0 = lambda0_potential(0.5, cs, fast_interval());
  CHECK(r0.value() == doctest::Approx(p0.value()).epsilon(1e-12));

  // kappa = 0: constant potential E_n shifts the section spectrum
  TorusFiberSpec f2{0.0, cs, 2, M_PI, EndCondition::Neumann};
  CHECK(f2.longitudinal_level() == doctest::Approx(4.0).epsilon(1e-15));
  RefinedEigenResult r2 = fiber_eigenvalues(f2, 2, fast_interval());
  CHECK(r2.extrapolated[0] == doctest::Approx(M_PI * M_PI / 4.0 + 4.0).epsilon(1e-8));
  CHECK(r2.extrapolated[1] == doctest::Approx(M_PI * M_PI + 4.0).epsilon(1e-8));

  // frozen oracle values for the curved fiber
  TorusFiberSpec f1{0.5, cs, 1, M_PI, EndCondition::Neumann};
  RefinedEigenResult r1 = fiber_eigenvalues(f1, 2, fast_interval());
  CHECK(r1.extrapolated[0] == doctest::Approx(kFiber1_0).epsilon(5e-7));
  CHECK(r1.extrapolated[1] == doctest::Approx(kFiber1_1).epsilon(5e-7));

  CHECK_THROWS_AS(fiber_eigenvalues(TorusFiberSpec{0.5, cs, -1, M_PI}, 1),
                  ValidationError);
  CHECK_THROWS_AS(
      fiber_eigenvalues(TorusFiberSpec{0.5, cs, 0, M_PI, EndCondition::Dirichlet}, 1),
      ValidationError);
}

TEST_CASE("segment solve matches merged fibers and ignores the length") {
  const CrossSection cs = make_interval(-1.0, 1.0);
  TorusSolveOptions topts;
  topts.base_cells = 192;

  MeshSpec mesh;
  mesh.s_cells = 96;
  mesh.u_cells = 48;
  RefinedEigenResult direct =
      segment_spectrum_direct(0.5, cs, M_PI, 5, EndCondition::Neumann, mesh, topts);
  auto merged = merged_fiber_eigenvalues(0.5, cs, M_PI, 5, EndCondition::Neumann, topts);
  REQUIRE(merged.size() == 5);
  for (int j = 0; j < 5; ++j)
    CHECK(std::abs(direct.extrapolated[j] - merged[j].value) <=
          1e-3 * merged[j].value);

  // lambda0 from direct solves at several lengths agrees within estimates
  std::vector<RefinedEigenResult> at_length;
  for (double L : {1.0, 2.0, 5.0}) {
    MeshSpec m2;
    m2.s_cells = 48;
    m2.u_cells = 48;
    at_length.push_back(
        segment_spectrum_direct(0.5, cs, L, 1, EndCondition::Neumann, m2, topts));
  }
  for (std::size_t i = 1; i < at_length.size(); ++i)
    CHECK(std::abs(at_length[i].value() - at_length[0].value()) <=
          at_length[i].error() + at_length[0].error() + 1e-12);

  // torus segment constraint |kappa| <= 2 pi / length
  CHECK_THROWS_AS(segment_spectrum_direct(0.5, cs, 20.0, 1), ValidationError);
}

TEST_CASE("straight segment spectrum is the separable one") {
  const CrossSection cs = make_interval(-1.0, 1.0);
  MeshSpec mesh;
  mesh.s_cells = 64;
  mesh.u_cells = 64;
  TorusSolveOptions topts;
  topts.base_cells = 192;
  RefinedEigenResult direct =
      segment_spectrum_direct(0.0, cs, M_PI, 4, EndCondition::Neumann, mesh, topts);
  // mu_j + E_n merged and sorted: {mu0, mu0+1, mu0+4, mu1, ...} with
  // mu0 = pi^2/4, mu1 = pi^2, E_n = n^2.
  const double mu0v = M_PI * M_PI / 4.0;
  std::vector<double> expect{mu0v, mu0v + 1.0, mu0v + 4.0, M_PI * M_PI};
  for (int j = 0; j < 4; ++j)
    CHECK(direct.extrapolated[j] == doctest::Approx(expect[j]).epsilon(2e-5));
}

TEST_CASE("sweep: symmetric, monotone on both halves, endpoint matches mu0") {
  const CrossSection cs = make_interval(-1.0, 1.0);
  TorusSolveOptions o;
  o.base_cells = 128;
  auto grid = default_kappa_grid(cs);
  REQUIRE(grid.size() == 21);
  SweepResult sweep = sweep_lambda0(cs, grid, o);

  const auto& rows = sweep.rows;
  const int mid = 10;
  CHECK(rows[mid].kappa == 0.0);
  CHECK(rows[mid].lambda0 == doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-7));
  for (int i = mid; i + 1 < 21; ++i)  // nonincreasing on [0, 0.9]
    CHECK(rows[i + 1].lambda0 <= rows[i].lambda0 + 1e-12 * rows[i].lambda0);
  for (int i = 0; i < mid; ++i)  // nondecreasing on [-0.9, 0]
    CHECK(rows[i + 1].lambda0 >= rows[i].lambda0 - 1e-12 * rows[i].lambda0);
  for (int i = 0; i < 21; ++i)  // evenness at linear-algebra precision
    CHECK(std::abs(rows[i].lambda0 - rows[20 - i].lambda0) <= 1e-10 * rows[i].lambda0);
  // strict decrease across the positive half (values are well separated)
  CHECK(rows[20].lambda0 < rows[mid].lambda0 - 1e-2);
}

TEST_CASE("uniform lower bound holds along the sweep for all section shapes") {
  TorusSolveOptions o;
  o.base_cells = 64;
  for (const CrossSection& cs : {make_interval(-1.0, 1.0), make_square(1.4)}) {
    const double c = faber_krahn_constant(cs.dim + 1, cs.a, cs.area);
    for (double ratio : {-0.85, -0.4, 0.0, 0.4, 0.85}) {
      const double kappa = ratio / cs.a;
      CHECK(lambda0_weighted(kappa, cs, o).value() >= c);
    }
  }
  TorusSolveOptions od;
  od.base_cells = 32;
  const CrossSection disk = make_disk(1.0);
  const double cdisk = faber_krahn_constant(3, disk.a, disk.area);
  for (double kappa : {-0.8, 0.0, 0.8})
    CHECK(lambda0_weighted(kappa, disk, od).value() >= cdisk);
}

TEST_CASE("thin-width residual shrinks at order >= 0.8") {
  const CrossSection cs = make_interval(-1.0, 1.0);
  TorusSolveOptions o;
  o.base_cells = 256;
  ThinWidthResult r = thin_width_check(cs, 0.5, {0.4, 0.2, 0.1}, o);
  REQUIRE(r.rows.size() == 3);
  CHECK(std::abs(r.rows[1].residual) < std::abs(r.rows[0].residual));
  CHECK(std::abs(r.rows[2].residual) < std::abs(r.rows[1].residual));
  CHECK(r.fitted_order >= 0.8);

  // kappa = 0: the two solves coincide, the residual is exactly zero
  ThinWidthResult z = thin_width_check(cs, 0.0, {0.4, 0.2}, o);
  CHECK(z.rows[0].residual == 0.0);
  CHECK(z.rows[1].residual == 0.0);
}
