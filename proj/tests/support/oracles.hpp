// Independent reference computations used by the tests. Everything here is
// deliberately built on different discretizations and different linear
// algebra than the library paths it checks: finite differences instead of
// finite elements, Sturm bisection / power iteration instead of the blocked
// preconditioned solver.
#ifndef TUBESPEC_TEST_ORACLES_HPP
#define TUBESPEC_TEST_ORACLES_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "tubespec/sparse.hpp"

namespace oracle {

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below x
/// (Sturm count via the shifted LDL recurrence).
inline int sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                       double x) {
  const std::size_t n = diag.size();
  int count = 0;
  double q = diag[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    double denom = q;
    if (denom == 0.0) denom = 1e-300;
    q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

/// k lowest eigenvalues of a symmetric tridiagonal matrix by bisection.
inline std::vector<double> tridiag_lowest(const std::vector<double>& diag,
                                          const std::vector<double>& off, int k) {
  const std::size_t n = diag.size();
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  std::vector<double> ev(k);
  for (int j = 0; j < k; ++j) {
    double a = lo, b = hi;
    for (int it = 0; it < 128 && (b - a) > 1e-15 * (std::abs(a) + std::abs(b) + 1.0); ++it) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(diag, off, mid) >= j + 1)
        b = mid;
      else
        a = mid;
    }
    ev[j] = 0.5 * (a + b);
  }
  return ev;
}

/// k lowest eigenvalues of -psi'' + V psi on (a, b), Dirichlet ends, by the
/// classical 3-point finite-difference scheme with n cells.
inline std::vector<double> fd_schroedinger_1d(double a, double b,
                                              const std::function<double(double)>& V, int n,
                                              int k) {
  const double h = (b - a) / n;
  std::vector<double> diag(n - 1), off(n - 2, -1.0 / (h * h));
  for (int i = 1; i < n; ++i) diag[i - 1] = 2.0 / (h * h) + (V ? V(a + i * h) : 0.0);
  return tridiag_lowest(diag, off, k);
}

/// Richardson-extrapolated variant (doubled resolution, order-2 assumption).
inline std::vector<double> fd_schroedinger_1d_extrap(double a, double b,
                                                     const std::function<double(double)>& V,
                                                     int n, int k) {
  const auto coarse = fd_schroedinger_1d(a, b, V, n, k);
  const auto fine = fd_schroedinger_1d(a, b, V, 2 * n, k);
  std::vector<double> out(k);
  for (int j = 0; j < k; ++j) out[j] = fine[j] + (fine[j] - coarse[j]) / 3.0;
  return out;
}

/// Lowest eigenvalue of the weighted problem -div(w grad psi) = lambda w psi
/// on the disk of radius R (Dirichlet), w(u) = 1 - kappa*u2, via the 5-point
/// finite-difference scheme on a (cells+1)^2 grid restricted to the interior,
/// inverse power iteration with conjugate-gradient solves.
inline double fd_disk_weighted_lambda0(double R, double kappa, int cells) {
  const int m = cells;
  const double h = 2.0 * R / m;
  std::vector<int> idx((m + 1) * (m + 1), -1);
  std::vector<double> xs(m + 1);
  for (int i = 0; i <= m; ++i) xs[i] = -R + i * h;
  int n = 0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      if (xs[i] * xs[i] + xs[j] * xs[j] < R * R) idx[i * (m + 1) + j] = n++;

  auto w = [&](double u2) { return 1.0 - kappa * u2; };
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd bdiag(n);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      const int p = idx[i * (m + 1) + j];
      if (p < 0) continue;
      const double u2 = xs[i];
      bdiag[p] = w(u2);
      double dsum = 0.0;
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      const double wmid[4] = {w(u2 - 0.5 * h), w(u2 + 0.5 * h), w(u2), w(u2)};
      for (int t = 0; t < 4; ++t) {
        dsum += wmid[t];
        if (ni[t] < 0 || ni[t] > m || nj[t] < 0 || nj[t] > m) continue;
        const int q = idx[ni[t] * (m + 1) + nj[t]];
        if (q >= 0) trips.emplace_back(p, q, -wmid[t] / (h * h));
      }
      trips.emplace_back(p, p, dsum / (h * h));
    }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());

  auto cg_solve = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = rhs, z = r.cwiseQuotient(A.diagonal());
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    const double stop = 1e-24 * rhs.squaredNorm();
    for (int it = 0; it < 40000 && r.squaredNorm() > stop; ++it) {
      const Eigen::VectorXd Ap = A * p;
      const double alpha = rz / p.dot(Ap);
      x += alpha * p;
      r -= alpha * Ap;
      z = r.cwiseQuotient(A.diagonal());
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    return x;
  };

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = uni(rng);
  double lambda = 0.0, lambda_prev = -1.0;
  for (int it = 0; it < 60 && std::abs(lambda - lambda_prev) > 1e-11 * (1.0 + lambda); ++it) {
    lambda_prev = lambda;
    x = cg_solve(bdiag.cwiseProduct(x));
    x /= std::sqrt(x.dot(bdiag.cwiseProduct(x)));
    lambda = x.dot(A * x);
  }
  return lambda;
}

/// Seeded random sparse SPD pencil (diagonally dominant band + scattered
/// couplings); spectrum is generically simple.
inline std::pair<tubespec::SparseSymmetric, tubespec::SparseSymmetric> random_spd_pencil(
    int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  tubespec::SparseSymmetricBuilder A(n), B(n);
  std::vector<double> arow(n, 0.0), brow(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) {
      const double a = uni(rng), b = 0.3 * uni(rng);
      A.add(i, i + 1, a);
      B.add(i, i + 1, b);
      arow[i] += std::abs(a);
      arow[i + 1] += std::abs(a);
      brow[i] += std::abs(b);
      brow[i + 1] += std::abs(b);
    }
    const int j = pick(rng);
    if (j != i) {
      const double a = uni(rng);
      A.add(std::min(i, j), std::max(i, j), a);
      arow[i] += std::abs(a);
      arow[j] += std::abs(a);
    }
  }
  std::uniform_real_distribution<double> dpos(0.5, 2.0);
  for (int i = 0; i < n; ++i) {
    A.add(i, i, arow[i] + dpos(rng));
    B.add(i, i, brow[i] + dpos(rng));
  }
  return {A.finalize(), B.finalize()};
}

/// Dense full-spectrum reference for a symmetric pencil.
inline std::vector<double> dense_pencil_eigenvalues(const tubespec::SparseSymmetric& A,
                                                    const tubespec::SparseSymmetric& B,
                                                    int k) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A.to_dense(), B.to_dense());
  std::vector<double> out(k);
  for (int j = 0; j < k; ++j) out[j] = es.eigenvalues()[j];
  return out;
}

}  // namespace oracle

#endif
