#include <doctest.h>

#include <cmath>
#include <random>

#include "tubespec/curve.hpp"
#include "tubespec/errors.hpp"

using namespace tubespec;

namespace {

CurveSpec twisted_spec() {
  // d=3 with variable bending and constant torsion; stays within the
  // coordinate bound for |u| < 1/2.
  CurveSpec c;
  c.d = 3;
  c.s0 = 0.0;
  c.s1 = 2.0;
  c.curvatures.push_back(
      PiecewisePoly({PolyPiece{0.0, 1.0, {0.2, 0.3}}, PolyPiece{1.0, 2.0, {0.5, -0.1}}}));
  c.curvatures.push_back(PiecewisePoly::constant(0.0, 2.0, 0.8));
  c.validate();
  return c;
}

}  // namespace

TEST_CASE("piecewise polynomial basics") {
  PiecewisePoly p({PolyPiece{0.0, 1.0, {1.0, 2.0}}, PolyPiece{1.0, 2.0, {3.0, 0.0, -1.0}}});
  CHECK(p(0.5) == doctest::Approx(2.0));
  CHECK(p(1.5) == doctest::Approx(3.0 - 0.25));
  CHECK(p.interior_breakpoints() == std::vector<double>{1.0});
  CHECK_FALSE(p.constant_on(0.0, 0.5));
  CHECK_THROWS_AS(PiecewisePoly({PolyPiece{0.0, 1.0, {1.0}}, PolyPiece{1.5, 2.0, {1.0}}}),
                  ValidationError);
}

TEST_CASE("piecewise polynomial exact range hits interior stationary points") {
  // (s-0.5)^2 on [0,1]: min at the stationary point, max at the endpoints.
  PiecewisePoly p({PolyPiece{0.0, 1.0, {0.25, -1.0, 1.0}}});
  auto [lo, hi] = p.range();
  CHECK(lo == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(hi == doctest::Approx(0.25).epsilon(1e-14));

  // cubic with interior extrema: t^3 - 0.75 t on [-?]: use local coeffs
  PiecewisePoly q({PolyPiece{0.0, 2.0, {0.0, -3.0, 0.0, 1.0}}});  // t^3 - 3t
  auto [qlo, qhi] = q.range();
  CHECK(qlo == doctest::Approx(-2.0).epsilon(1e-12));  // at t = 1
  CHECK(qhi == doctest::Approx(2.0).epsilon(1e-12));   // at t = 2
}

TEST_CASE("metric: straight line is Euclidean") {
  CurveSpec c = CurveSpec::constant_curvature(2, 0.0, 1.0, {0.0});
  MetricSample m = metric(c, 0.5, Eigen::VectorXd::Constant(1, 0.3));
  CHECK(m.h == 1.0);
  CHECK(m.G.isIdentity(0.0));
  CHECK(m.G_inv.isIdentity(0.0));
}

TEST_CASE("metric: plane curve by direct substitution") {
  CurveSpec c = CurveSpec::constant_curvature(2, 0.0, 1.0, {0.5});
  MetricSample m = metric(c, 0.3, Eigen::VectorXd::Constant(1, 0.4));
  CHECK(m.h == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(m.G(0, 0) == doctest::Approx(0.64).epsilon(1e-15));
  CHECK(m.G(1, 1) == 1.0);
  CHECK(m.G_inv(0, 0) == doctest::Approx(1.0 / 0.64).epsilon(1e-15));
  CHECK(m.G_inv(1, 1) == 1.0);
}

TEST_CASE("metric: d=3 matches the curvature-torsion block form") {
  const double kappa = 0.4, tau = 0.7;
  CurveSpec c = CurveSpec::constant_curvature(3, 0.0, 1.0, {kappa, tau});
  Eigen::VectorXd u(2);
  u << 0.2, -0.3;
  MetricSample m = metric(c, 0.1, u);
  const double h = 1.0 - kappa * u[0];
  Eigen::MatrixXd G(3, 3);
  G << h * h + tau * tau * u.squaredNorm(), -tau * u[1], tau * u[0],
       -tau * u[1], 1.0, 0.0,
       tau * u[0], 0.0, 1.0;
  CHECK((m.G - G).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(m.det() - h * h) < 1e-15);
  // closed-form inverse really inverts G
  CHECK((m.G * m.G_inv - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("metric rejects degenerate coordinates") {
  CurveSpec c = CurveSpec::constant_curvature(2, 0.0, 1.0, {2.0});
  CHECK_THROWS_AS(metric(c, 0.5, Eigen::VectorXd::Constant(1, 0.5)), ValidationError);
}

TEST_CASE("metric identities on random samples") {
  CurveSpec c = twisted_spec();
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> us(0.0, 2.0), uu(-0.35, 0.35);
  for (int trial = 0; trial < 10000; ++trial) {
    const double s = us(rng);
    Eigen::VectorXd u(2);
    u << uu(rng), uu(rng);
    MetricSample m = metric(c, s, u);
    // |G| = h^2 and G Ginv = I
    CHECK(std::abs(m.G.determinant() - m.h * m.h) <= 1e-12 * m.h * m.h);
    CHECK((m.G * m.G_inv - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("coercivity gap: zero cases and substitution") {
  CurveSpec planar = CurveSpec::constant_curvature(2, 0.0, 1.0, {0.5});
  MetricSample m = metric(planar, 0.2, Eigen::VectorXd::Constant(1, 0.4));
  // transverse covector with no higher curvatures: gap vanishes
  Eigen::VectorXd xi(2);
  xi << 0.0, 1.0;
  GapResult g0 = coercivity_gap(m, xi);
  CHECK(g0.gap == 0.0);
  CHECK(g0.closed_form == 0.0);

  xi << 1.0, 0.0;
  GapResult g1 = coercivity_gap(m, xi);
  CHECK(g1.gap == doctest::Approx(1.0 / 0.64).epsilon(1e-15));
  CHECK(g1.closed_form == doctest::Approx(1.0 / 0.64).epsilon(1e-15));
}

TEST_CASE("coercivity gap is nonnegative and matches its closed form") {
  CurveSpec c = twisted_spec();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> us(0.0, 2.0), uu(-0.35, 0.35), ux(-1.0, 1.0);
  double min_gap = 1e300, max_mismatch = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double s = us(rng);
    Eigen::VectorXd u(2), xi(3);
    u << uu(rng), uu(rng);
    xi << ux(rng), ux(rng), ux(rng);
    GapResult g = coercivity_gap(metric(c, s, u), xi);
    min_gap = std::min(min_gap, g.gap);
    max_mismatch = std::max(max_mismatch, std::abs(g.gap - g.closed_form));
  }
  CHECK(min_gap >= -1e-12);
  CHECK(max_mismatch <= 1e-12);
}

TEST_CASE("inverse-metric splitting vanishes without higher curvatures") {
  CurveSpec planar = CurveSpec::constant_curvature(2, 0.0, 1.0, {0.7});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> us(0.0, 1.0), uu(-0.5, 0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    MetricSample m = metric(planar, us(rng), Eigen::VectorXd::Constant(1, uu(rng)));
    CHECK(m.splitting_T().cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd diag = Eigen::MatrixXd::Identity(2, 2);
    diag(0, 0) = 1.0 / (m.h * m.h);
    CHECK((m.G_inv - diag).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("frenet: straight line") {
  CurveSpec c = CurveSpec::constant_curvature(2, 0.0, 2.0, {0.0});
  auto states = frenet_integrate(c, 0.01);
  const auto& last = states.back();
  CHECK(last.position[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(last.position[1]) < 1e-12);
  CHECK((last.frame - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("frenet: constant curvature traces a circle") {
  const double kappa = 0.5;
  CurveSpec c = CurveSpec::constant_curvature(2, 0.0, 6.0, {kappa});
  auto states = frenet_integrate(c, 1e-3);
  for (std::size_t i = 0; i < states.size(); i += 500) {
    const double s = states[i].s;
    CHECK(states[i].position[0] == doctest::Approx(std::sin(kappa * s) / kappa).epsilon(1e-9));
    CHECK(states[i].position[1] ==
          doctest::Approx((1.0 - std::cos(kappa * s)) / kappa).epsilon(1e-9));
  }
}

TEST_CASE("frenet: helix matches the analytic curve of equal curvature/torsion") {
  const double kappa = 0.6, tau = 0.4;
  const double denom = kappa * kappa + tau * tau;
  const double ra = kappa / denom, b = tau / denom;
  const double omega = 1.0 / std::sqrt(ra * ra + b * b);
  CurveSpec c = CurveSpec::constant_curvature(3, 0.0, 10.0, {kappa, tau});
  auto states = frenet_integrate(c, 1e-3);

  // Analytic helix H(s) = (ra cos(omega s), ra sin(omega s), b omega s) has
  // curvature kappa and torsion tau; align its Frenet frame at s=0 with the
  // integrator's initial frame (identity).
  Eigen::Vector3d T0(0.0, ra * omega, b * omega);
  Eigen::Vector3d N0(-1.0, 0.0, 0.0);
  Eigen::Vector3d B0 = T0.cross(N0);
  Eigen::Matrix3d R;
  R.row(0) = T0;
  R.row(1) = N0;
  R.row(2) = B0;  // maps helix frame to the canonical basis
  Eigen::Vector3d H0(ra, 0.0, 0.0);
  double max_err = 0.0;
  for (std::size_t i = 0; i < states.size(); i += 997) {
    const double s = states[i].s;
    Eigen::Vector3d H(ra * std::cos(omega * s), ra * std::sin(omega * s), b * omega * s);
    Eigen::Vector3d expected = R * (H - H0);
    max_err = std::max(max_err, (states[i].position - expected).norm());
  }
  CHECK(max_err < 1e-8);
}

TEST_CASE("frenet frame stays orthonormal after every step") {
  CurveSpec c = CurveSpec::constant_curvature(3, 0.0, 10.0, {0.6, 0.4});
  auto states = frenet_integrate(c, 1e-3);
  double worst = 0.0;
  for (const auto& st : states) {
    const auto d = (st.frame.transpose() * st.frame - Eigen::MatrixXd::Identity(3, 3))
                       .cwiseAbs()
                       .maxCoeff();
    worst = std::max(worst, d);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("validity check: curvature bound") {
  CrossSection cs = make_interval(-1.0, 1.0);
  {
    ValidityReport r = check_h2(CurveSpec::constant_curvature(2, 0.0, 2.0, {0.5}), cs);
    CHECK(r.a_kappa1_norm == doctest::Approx(0.5));
    CHECK(r.curvature_bound_ok);
  }
  {
    ValidityReport r = check_h2(CurveSpec::constant_curvature(2, 0.0, 2.0, {1.25}), cs);
    CHECK_FALSE(r.curvature_bound_ok);
    CHECK(r.a_kappa1_norm == doctest::Approx(1.25));
  }
}

TEST_CASE("validity check: exact extrema of a polynomial curvature") {
  // kappa1(t) = 0.9 t (1 - t) on [0,1] peaks at 0.225 in the interior.
  CurveSpec c;
  c.d = 2;
  c.s0 = 0.0;
  c.s1 = 1.0;
  c.curvatures.push_back(PiecewisePoly({PolyPiece{0.0, 1.0, {0.0, 0.9, -0.9}}}));
  ValidityReport r = check_h2(c, make_interval(-1.0, 1.0));
  CHECK(r.kappa1_sup == doctest::Approx(0.225).epsilon(1e-13));
  CHECK(r.kappa1_inf == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("validity check: full ring passes the overlap heuristic for small a") {
  const double L = 4.0 * M_PI;              // |kappa| = 2 pi / L = 0.5
  CurveSpec ring = CurveSpec::constant_curvature(2, 0.0, L, {0.5});
  ValidityReport r = check_h2(ring, make_interval(-0.5, 0.5));
  CHECK(r.curve_closed);
  CHECK(r.overlap_ok);
  CHECK(r.overlap_heuristic);
}

TEST_CASE("validity check: a curve that wraps past a full turn is flagged") {
  // Constant curvature over 1.25 turns: the last quarter retraces the first,
  // so distant arc parameters share positions. The curvature bound itself
  // still holds.
  CurveSpec c = CurveSpec::constant_curvature(2, 0.0, 5.0 * M_PI, {0.5});
  ValidityReport r = check_h2(c, make_interval(-0.5, 0.5));
  CHECK(r.curvature_bound_ok);
  CHECK_FALSE(r.overlap_ok);
  CHECK(r.min_clearance < 0.0);
}
