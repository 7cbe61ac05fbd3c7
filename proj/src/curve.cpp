#include "tubespec/curve.hpp"

#include <algorithm>
#include <cmath>

#include "tubespec/errors.hpp"

namespace tubespec {

void CurveSpec::validate() const {
  if (d < 2) throw ValidationError("curve: ambient dimension must be >= 2");
  if (!(s1 > s0)) throw ValidationError("curve: interval must have positive length");
  if (static_cast<int>(curvatures.size()) != d - 1)
    throw ValidationError("curve: expected " + std::to_string(d - 1) + " curvature functions");
  const double tol = 1e-12 * length();
  for (const auto& k : curvatures) {
    if (std::abs(k.domain_lo() - s0) > tol || std::abs(k.domain_hi() - s1) > tol)
      throw ValidationError("curve: curvature pieces must cover exactly the interval");
  }
}

double CurveSpec::kappa(int index, double s) const {
  if (index < 1 || index > d - 1) throw ValidationError("curve: curvature index out of range");
  return curvatures[index - 1](s);
}

std::pair<double, double> CurveSpec::kappa1_range() const { return curvatures[0].range(); }

Eigen::MatrixXd CurveSpec::curvature_matrix(double s) const {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d - 1; ++i) {
    const double k = curvatures[i](s);
    K(i, i + 1) = k;
    K(i + 1, i) = -k;
  }
  return K;
}

std::vector<double> CurveSpec::breakpoints() const {
  std::vector<double> b{s0, s1};
  for (const auto& k : curvatures)
    for (double x : k.interior_breakpoints()) b.push_back(x);
  std::sort(b.begin(), b.end());
  const double tol = 1e-12 * length();
  std::vector<double> out;
  for (double x : b)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  out.front() = s0;
  out.back() = s1;
  return out;
}

CurveSpec CurveSpec::constant_curvature(int d, double s0, double s1,
                                        const std::vector<double>& kappa_values) {
  CurveSpec c;
  c.d = d;
  c.s0 = s0;
  c.s1 = s1;
  for (double k : kappa_values) c.curvatures.push_back(PiecewisePoly::constant(s0, s1, k));
  c.validate();
  return c;
}

MetricSample metric(const CurveSpec& spec, double s, const Eigen::VectorXd& u) {
  const int d = spec.d;
  if (u.size() != d - 1) throw ValidationError("metric: u must have d-1 components");

  MetricSample m;
  m.h = 1.0 - spec.kappa1(s) * u[0];
  if (!(m.h > 0.0))
    throw ValidationError("metric: coordinate degeneracy, 1 - kappa1(s) u2 = " +
                          std::to_string(m.h) + " <= 0 at s = " + std::to_string(s));

  // h_mu = -K_{mu nu} u_nu for mu, nu >= 2. In the Greek block the curvature
  // matrix has K_{mu, mu+1} = kappa_mu, so only adjacent terms contribute.
  m.h_mu = Eigen::VectorXd::Zero(d - 1);
  for (int mu = 0; mu < d - 1; ++mu) {
    double v = 0.0;
    if (mu + 1 < d - 1) v -= spec.kappa(mu + 2, s) * u[mu + 1];  // -K_{mu,mu+1} u_{mu+1}
    if (mu >= 1) v += spec.kappa(mu + 1, s) * u[mu - 1];         // -K_{mu,mu-1} u_{mu-1}
    m.h_mu[mu] = v;
  }

  m.G = Eigen::MatrixXd::Identity(d, d);
  m.G(0, 0) = m.h * m.h + m.h_mu.squaredNorm();
  for (int mu = 0; mu < d - 1; ++mu) {
    m.G(0, mu + 1) = m.h_mu[mu];
    m.G(mu + 1, 0) = m.h_mu[mu];
  }

  const double inv_h2 = 1.0 / (m.h * m.h);
  m.G_inv = Eigen::MatrixXd::Zero(d, d);
  m.G_inv(0, 0) = inv_h2;
  for (int mu = 0; mu < d - 1; ++mu) {
    m.G_inv(0, mu + 1) = -m.h_mu[mu] * inv_h2;
    m.G_inv(mu + 1, 0) = m.G_inv(0, mu + 1);
    for (int nu = 0; nu < d - 1; ++nu)
      m.G_inv(mu + 1, nu + 1) =
          (mu == nu ? 1.0 : 0.0) + m.h_mu[mu] * m.h_mu[nu] * inv_h2;
  }
  return m;
}

Eigen::MatrixXd MetricSample::splitting_T() const {
  const int d = static_cast<int>(G.rows());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(d, d);
  for (int mu = 0; mu < d - 1; ++mu) {
    T(0, mu + 1) = -h_mu[mu];
    T(mu + 1, 0) = -h_mu[mu];
    for (int nu = 0; nu < d - 1; ++nu) T(mu + 1, nu + 1) = h_mu[mu] * h_mu[nu];
  }
  return T;
}

Eigen::MatrixXd MetricSample::coercivity_A() const {
  Eigen::MatrixXd A = splitting_T();
  A(0, 0) += 1.0;
  return A;
}

GapResult coercivity_gap(const MetricSample& sample, const Eigen::VectorXd& xi) {
  const int d = static_cast<int>(sample.G.rows());
  if (xi.size() != d) throw ValidationError("coercivity_gap: xi must have d components");
  const double quad = xi.dot(sample.G_inv * xi);
  const double transverse = xi.tail(d - 1).squaredNorm();
  const double lin = -xi[0] + sample.h_mu.dot(xi.tail(d - 1));
  return {quad - transverse, lin * lin / (sample.h * sample.h)};
}

namespace {

// Modified Gram-Schmidt on the frame columns.
void orthonormalize_frame(Eigen::MatrixXd& E) {
  const int d = static_cast<int>(E.cols());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) E.col(i) -= E.col(j).dot(E.col(i)) * E.col(j);
    E.col(i).normalize();
  }
}

struct FrameOde {
  const CurveSpec& spec;

  // State: position (d) followed by frame columns (d*d).
  Eigen::VectorXd deriv(double s, const Eigen::VectorXd& y) const {
    const int d = spec.d;
    Eigen::VectorXd dy(d + d * d);
    Eigen::Map<const Eigen::MatrixXd> E(y.data() + d, d, d);
    dy.head(d) = E.col(0);
    const Eigen::MatrixXd K = spec.curvature_matrix(s);
    Eigen::Map<Eigen::MatrixXd> dE(dy.data() + d, d, d);
    dE = E * K.transpose();  // column i evolves as sum_j K_ij e_j
    return dy;
  }
};

}  // namespace

std::vector<FrenetState> frenet_integrate(const CurveSpec& spec, double step) {
  spec.validate();
  if (!(step > 0.0)) throw ValidationError("frenet_integrate: step must be positive");
  const int d = spec.d;
  FrameOde ode{spec};

  Eigen::VectorXd y(d + d * d);
  y.head(d).setZero();
  Eigen::Map<Eigen::MatrixXd>(y.data() + d, d, d) = Eigen::MatrixXd::Identity(d, d);

  std::vector<FrenetState> states;
  auto record = [&](double s) {
    FrenetState st;
    st.s = s;
    st.position = y.head(d);
    st.frame = Eigen::Map<const Eigen::MatrixXd>(y.data() + d, d, d);
    states.push_back(std::move(st));
  };
  record(spec.s0);

  // March piece by piece so RK4 stages never straddle a curvature jump.
  const auto bps = spec.breakpoints();
  for (std::size_t p = 0; p + 1 < bps.size(); ++p) {
    const double lo = bps[p], hi = bps[p + 1];
    const int nsteps = std::max(1, static_cast<int>(std::ceil((hi - lo) / step - 1e-12)));
    const double hstep = (hi - lo) / nsteps;
    double s = lo;
    for (int i = 0; i < nsteps; ++i) {
      const Eigen::VectorXd k1 = ode.deriv(s, y);
      const Eigen::VectorXd k2 = ode.deriv(s + 0.5 * hstep, y + 0.5 * hstep * k1);
      const Eigen::VectorXd k3 = ode.deriv(s + 0.5 * hstep, y + 0.5 * hstep * k2);
      const Eigen::VectorXd k4 = ode.deriv(s + hstep, y + hstep * k3);
      y += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      s = (i + 1 == nsteps) ? hi : lo + (i + 1) * hstep;
      Eigen::Map<Eigen::MatrixXd> E(y.data() + d, d, d);
      Eigen::MatrixXd Ecopy = E;
      orthonormalize_frame(Ecopy);
      E = Ecopy;
      record(s);
    }
  }
  return states;
}

ValidityReport check_h2(const CurveSpec& spec, const CrossSection& cs) {
  spec.validate();
  ValidityReport rep;
  rep.circumradius = cs.a;
  auto [kmin, kmax] = spec.kappa1_range();
  rep.kappa1_inf = kmin;
  rep.kappa1_sup = kmax;
  rep.a_kappa1_norm = cs.a * std::max(std::abs(kmin), std::abs(kmax));
  rep.curvature_bound_ok = rep.a_kappa1_norm < 1.0;

  // Part (ii): sample the embedding and test bounding disks of radius a for
  // pairs whose arc separation exceeds pi*a (closer pairs overlap benignly).
  const double L = spec.length();
  const double step = std::max(L / 4096.0, 1e-4 * L);
  auto states = frenet_integrate(spec, step);

  const double sample_gap = std::max(cs.a / 2.0, L / 512.0);
  std::vector<FrenetState> pts;
  double last_s = -1e300;
  for (const auto& st : states)
    if (st.s - last_s >= sample_gap - 1e-12) {
      pts.push_back(st);
      last_s = st.s;
    }
  if (pts.empty() || pts.back().s < spec.s1 - 1e-12) pts.push_back(states.back());

  rep.curve_closed =
      (states.back().position - states.front().position).norm() < 1e-6 * std::max(1.0, L);

  const double arc_threshold = M_PI * cs.a;
  double min_clearance = std::numeric_limits<double>::infinity();
  bool overlap = false;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double arc = pts[j].s - pts[i].s;
      if (rep.curve_closed) arc = std::min(arc, L - arc);
      if (arc <= arc_threshold) continue;
      const double dist = (pts[i].position - pts[j].position).norm();
      min_clearance = std::min(min_clearance, dist - 2.0 * cs.a);
      if (dist < 2.0 * cs.a * (1.0 - 1e-9)) overlap = true;
    }
  rep.overlap_ok = !overlap;
  rep.min_clearance = std::isfinite(min_clearance) ? min_clearance : 0.0;
  rep.note = "self-overlap test is heuristic: sampled bounding disks along the "
             "integrated embedding";
  return rep;
}

}  // namespace tubespec
