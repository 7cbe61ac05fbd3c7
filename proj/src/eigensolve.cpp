#include "tubespec/eigensolve.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "tubespec/errors.hpp"

namespace tubespec {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

constexpr int kDirectFallbackLimit = 50'000;

struct Preconditioner {
  enum class Kind { IncompleteChol, Jacobi };
  Kind kind = Kind::Jacobi;
  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic;
  Vec inv_diag;

  void build(const SparseSymmetric& A) {
    SpMat full = A.to_eigen_full();
    for (double shift : {1e-3, 1e-1}) {
      ic.setInitialShift(shift);
      ic.compute(full);
      if (ic.info() == Eigen::Success) {
        kind = Kind::IncompleteChol;
        return;
      }
    }
    Vec d = A.diagonal();
    inv_diag = d.unaryExpr([](double v) { return v > 0.0 ? 1.0 / v : 1.0; });
    kind = Kind::Jacobi;
  }

  Mat apply(const Mat& R) const {
    if (kind == Kind::IncompleteChol) {
      Mat W(R.rows(), R.cols());
      for (int c = 0; c < R.cols(); ++c) W.col(c) = ic.solve(R.col(c));
      return W;
    }
    return inv_diag.asDiagonal() * R;
  }
};

/// B-orthonormalize the columns of V (updating BV alongside), dropping
/// near-dependent directions. Returns the number of columns kept.
/// With check_indefinite set (used on the well-conditioned start block only),
/// a clearly negative Gram eigenvalue reveals an indefinite B.
int b_orthonormalize(Mat& V, Mat& BV, bool check_indefinite = false,
                     double drop_tol = 1e-8) {
  for (int pass = 0; pass < 2; ++pass) {
    if (V.cols() == 0) return 0;
    Mat G = V.transpose() * BV;
    G = 0.5 * (G + G.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(G);
    const Vec& ev = es.eigenvalues();
    const double emax = ev.cwiseAbs().maxCoeff();
    if (emax <= 0.0) return 0;
    if (check_indefinite && ev.minCoeff() < -1e-10 * emax)
      throw SolverError("lowest_eigenpairs: mass matrix is not positive definite");
    std::vector<int> keep;
    for (int i = 0; i < ev.size(); ++i)
      if (ev[i] > drop_tol * emax) keep.push_back(i);
    Mat T(ev.size(), static_cast<int>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
      T.col(static_cast<int>(c)) = es.eigenvectors().col(keep[c]) / std::sqrt(ev[keep[c]]);
    V = (V * T).eval();
    BV = (BV * T).eval();
  }
  return static_cast<int>(V.cols());
}

/// Project the columns of V (and BV) B-orthogonal to Q, where BQ = B * Q and
/// Q is B-orthonormal.
void b_project_out(const Mat& Q, const Mat& BQ, Mat& V, Mat& BV) {
  if (Q.cols() == 0 || V.cols() == 0) return;
  Mat C = BQ.transpose() * V;
  V.noalias() -= Q * C;
  BV.noalias() -= BQ * C;
}

struct RitzOutput {
  Vec values;
  Mat vectors;  // coefficients in the given basis
};

RitzOutput rayleigh_ritz(const Mat& SAS) {
  Mat H = 0.5 * (SAS + SAS.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  return {es.eigenvalues(), es.eigenvectors()};
}

std::vector<double> residual_norms(const Mat& AX, const Mat& BX, const Vec& theta, int k) {
  std::vector<double> res(k);
  for (int j = 0; j < k; ++j) {
    const double denom = BX.col(j).norm();
    res[j] = (AX.col(j) - theta[j] * BX.col(j)).norm() / (denom > 0.0 ? denom : 1.0);
  }
  return res;
}

EigenResult finalize_result(const Mat& X, const Mat& AX, const Mat& BX, const Vec& theta,
                            int k, int iterations, bool want_vectors) {
  EigenResult r;
  r.iterations = iterations;
  r.eigenvalues.assign(theta.data(), theta.data() + k);
  r.residuals = residual_norms(AX, BX, theta, k);
  if (want_vectors) {
    r.eigenvectors = X.leftCols(k);
    // Fix sign: largest-magnitude entry positive, so runs are comparable.
    for (int j = 0; j < k; ++j) {
      int idx = 0;
      r.eigenvectors.col(j).cwiseAbs().maxCoeff(&idx);
      if (r.eigenvectors(idx, j) < 0.0) r.eigenvectors.col(j) *= -1.0;
    }
  }
  return r;
}

/// Inverse subspace iteration with a direct factorization of A; used as the
/// fallback when the preconditioned iteration stalls on a small problem.
EigenResult shift_invert_fallback(const SparseSymmetric& A, const SparseSymmetric& B,
                                  const EigSolveOptions& opts, const Mat& X_start) {
  SpMat Af = A.to_eigen_full();
  Eigen::SimplicialLDLT<SpMat> ldlt(Af);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("lowest_eigenpairs: direct factorization failed in fallback");

  Mat X = X_start;
  Mat BX = B.multiply_block(X);
  b_orthonormalize(X, BX);
  Vec theta;
  Mat AX;
  int it = 0;
  for (; it < 200; ++it) {
    Mat Z(X.rows(), X.cols());
    for (int c = 0; c < X.cols(); ++c) Z.col(c) = ldlt.solve(BX.col(c));
    Mat BZ = B.multiply_block(Z);
    if (b_orthonormalize(Z, BZ) < X.cols())
      throw SolverError("lowest_eigenpairs: fallback subspace collapsed");
    Mat AZ = A.multiply_block(Z);
    RitzOutput ritz = rayleigh_ritz(Z.transpose() * AZ);
    X = Z * ritz.vectors;
    AX = AZ * ritz.vectors;
    BX = BZ * ritz.vectors;
    theta = ritz.values;
    auto res = residual_norms(AX, BX, theta, opts.k);
    double max_res = 0.0;
    for (int j = 0; j < opts.k; ++j)
      max_res = std::max(max_res, res[j] / std::max(1.0, std::abs(theta[j])));
    if (max_res <= opts.tol)
      return finalize_result(X, AX, BX, theta, opts.k, it + 1, opts.want_vectors);
  }
  auto res = residual_norms(AX, BX, theta, opts.k);
  throw SolverError("lowest_eigenpairs: no convergence after direct fallback", res, it);
}

}  // namespace

EigenResult lowest_eigenpairs(const SparseSymmetric& A, const SparseSymmetric& B,
                              const EigSolveOptions& opts) {
  const int n = A.rows();
  if (n == 0 || B.rows() != n)
    throw ValidationError("lowest_eigenpairs: dimension mismatch");
  if (opts.k < 1 || opts.k > n)
    throw ValidationError("lowest_eigenpairs: k out of range");

  const int m = std::min(n, opts.block_size > 0 ? std::max(opts.block_size, opts.k)
                                                : opts.k + 4);

  // Deterministic start block: optional warm-start columns, then seeded noise.
  Mat X(n, m);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int warm = 0;
  if (opts.initial_guess.size() > 0) {
    if (opts.initial_guess.rows() != n)
      throw ValidationError("lowest_eigenpairs: initial guess has wrong dimension");
    warm = std::min<int>(m, static_cast<int>(opts.initial_guess.cols()));
    X.leftCols(warm) = opts.initial_guess.leftCols(warm);
  }
  for (int c = warm; c < m; ++c)
    for (int i = 0; i < n; ++i) X(i, c) = uni(rng);

  Preconditioner prec;
  prec.build(A);

  Mat BX = B.multiply_block(X);
  if (b_orthonormalize(X, BX, /*check_indefinite=*/true) < m)
    throw SolverError("lowest_eigenpairs: start block degenerate");
  Mat AX = A.multiply_block(X);

  // Initial Rayleigh-Ritz so X columns are ordered Ritz approximations.
  {
    RitzOutput ritz = rayleigh_ritz(X.transpose() * AX);
    X = (X * ritz.vectors).eval();
    AX = (AX * ritz.vectors).eval();
    BX = (BX * ritz.vectors).eval();
  }
  Vec theta = (X.transpose() * AX).diagonal();

  // All sparse products are recomputed from the current blocks each
  // iteration. Maintaining them through the subspace transforms is cheaper
  // but lets ill-conditioned whitening steps amplify roundoff into
  // inconsistent Rayleigh-Ritz data; fresh products keep every projected
  // matrix a true Gram matrix of actual vectors.
  Mat P(n, 0);
  double best_max_res = std::numeric_limits<double>::infinity();
  int stall_count = 0;
  int it = 0;

  for (; it < opts.max_iterations; ++it) {
    theta = (X.transpose() * AX).diagonal();
    Mat R = AX - BX * theta.asDiagonal();
    auto res = residual_norms(AX, BX, theta, opts.k);
    double max_res = 0.0;  // scaled so the criterion survives domain rescaling
    for (int j = 0; j < opts.k; ++j)
      max_res = std::max(max_res, res[j] / std::max(1.0, std::abs(theta[j])));
    if (max_res < best_max_res * 0.999) {
      best_max_res = max_res;
      stall_count = 0;
    } else {
      ++stall_count;
    }
    if (max_res <= opts.tol)
      return finalize_result(X, AX, BX, theta, opts.k, it, opts.want_vectors);
    if (stall_count > 60) break;  // stagnated; try the fallback path

    Mat W = prec.apply(R);
    if (opts.coarse_correction) W += opts.coarse_correction(R);
    Mat BW = B.multiply_block(W);
    b_project_out(X, BX, W, BW);
    if (P.cols() > 0) {
      Mat BP = B.multiply_block(P);
      b_project_out(P, BP, W, BW);
    }
    BW = B.multiply_block(W);
    int nw = b_orthonormalize(W, BW);
    if (nw == 0) break;  // nothing new to add: basis is complete at this precision

    const int nx = static_cast<int>(X.cols());
    const int np = static_cast<int>(P.cols());
    const int ns = nx + nw + np;
    Mat S(n, ns);
    S << X, W, P;
    Mat BS = B.multiply_block(S);
    {
      // Whiten the whole basis so the projected problem is well conditioned.
      Mat Scopy = S;
      if (b_orthonormalize(Scopy, BS) < nx) break;
      S = Scopy;
    }
    Mat AS = A.multiply_block(S);
    RitzOutput ritz = rayleigh_ritz(S.transpose() * AS);
    const int mkeep = std::min<int>(m, static_cast<int>(S.cols()));
    Mat Y = ritz.vectors.leftCols(mkeep);

    Mat Xn = S * Y;
    // New search directions: the difference between the new and old spans.
    // Columns whose increment is negligible against the (B-unit) Ritz vectors
    // carry no information and would only pollute the basis; drop them before
    // normalization.
    Mat Pn = Xn - X * (BX.transpose() * Xn);
    {
      // Increments at the roundoff floor (B-norm ~1e-12 against unit Ritz
      // vectors) carry no directional information; normalizing them would put
      // noise into the basis.
      Mat BPn = B.multiply_block(Pn);
      std::vector<int> keep;
      for (int c = 0; c < Pn.cols(); ++c)
        if (Pn.col(c).dot(BPn.col(c)) > 1e-24) keep.push_back(c);
      Mat Pk(n, static_cast<int>(keep.size())), BPk(n, static_cast<int>(keep.size()));
      for (std::size_t c = 0; c < keep.size(); ++c) {
        Pk.col(static_cast<int>(c)) = Pn.col(keep[c]);
        BPk.col(static_cast<int>(c)) = BPn.col(keep[c]);
      }
      if (b_orthonormalize(Pk, BPk) == 0) Pk.resize(n, 0);
      Pn = Pk;
    }
    X = Xn;
    P = Pn;
    AX = A.multiply_block(X);
    BX = B.multiply_block(X);
  }

  // Not converged. Check whether the final iterate is actually good enough
  // (the stall may have happened at the tolerance floor).
  AX = A.multiply_block(X);
  BX = B.multiply_block(X);
  {
    RitzOutput ritz = rayleigh_ritz(X.transpose() * AX);
    X = (X * ritz.vectors).eval();
    AX = (AX * ritz.vectors).eval();
    BX = (BX * ritz.vectors).eval();
    theta = ritz.values;
  }
  auto res = residual_norms(AX, BX, theta, opts.k);
  double final_res = 0.0;
  for (int j = 0; j < opts.k; ++j)
    final_res = std::max(final_res, res[j] / std::max(1.0, std::abs(theta[j])));
  if (final_res <= opts.tol)
    return finalize_result(X, AX, BX, theta, opts.k, it, opts.want_vectors);

  if (opts.allow_direct_fallback && n <= kDirectFallbackLimit) {
    EigenResult r = shift_invert_fallback(A, B, opts, X);
    r.iterations += it;
    return r;
  }
  throw SolverError("lowest_eigenpairs: no convergence after " + std::to_string(it) +
                        " iterations (best residual " + std::to_string(best_max_res) + ")",
                    res, it);
}

RefinedEigenResult refine_extrapolate(const PencilBuilder& builder, int n_levels,
                                      const EigSolveOptions& opts) {
  if (n_levels < 2)
    throw ValidationError("refine_extrapolate: need at least two grid levels");

  // Levels with more unknowns than this get a two-level preconditioner built
  // from a direct factorization of the previous (coarser) operator.
  constexpr int kTwoGridThreshold = 100'000;

  RefinedEigenResult out;
  std::vector<std::vector<double>> values(n_levels);
  Eigen::MatrixXd prev_vectors;
  std::shared_ptr<SpMat> prev_stiffness;

  for (int lvl = 0; lvl < n_levels; ++lvl) {
    Pencil p = builder(lvl);
    EigSolveOptions local = opts;
    const bool last = (lvl == n_levels - 1);
    local.want_vectors = opts.want_vectors || !last;
    const bool nested = lvl > 0 && p.prolongation.rows() == p.stiffness.rows() &&
                        prev_stiffness && p.prolongation.cols() == prev_stiffness->rows();
    if (nested && prev_vectors.size() > 0)
      local.initial_guess = p.prolongation * prev_vectors;
    if (nested && p.stiffness.rows() > kTwoGridThreshold) {
      auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SpMat>>(*prev_stiffness);
      if (ldlt->info() == Eigen::Success) {
        auto prolong = std::make_shared<SpMat>(p.prolongation);
        local.coarse_correction = [ldlt, prolong](const Mat& R) {
          return Mat(*prolong * ldlt->solve(prolong->transpose() * R));
        };
      }
    }
    EigenResult r = lowest_eigenpairs(p.stiffness, p.mass, local);

    LevelSolve ls;
    ls.level = lvl;
    ls.unknowns = p.stiffness.rows();
    ls.cells = p.cells;
    ls.mesh_h = p.mesh_h;
    ls.eigenvalues = r.eigenvalues;
    ls.residuals = r.residuals;
    ls.iterations = r.iterations;
    out.levels.push_back(std::move(ls));
    values[lvl] = out.levels.back().eigenvalues;

    prev_vectors = r.eigenvectors;
    if (last && opts.want_vectors) out.fine_eigenvectors = r.eigenvectors;
    if (!last) prev_stiffness = std::make_shared<SpMat>(p.stiffness.to_eigen_full());
  }

  const auto& coarse = values[n_levels - 2];
  const auto& fine = values[n_levels - 1];
  const std::size_t k = fine.size();
  out.extrapolated.resize(k);
  out.error_estimate.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double diff = fine[j] - coarse[j];
    out.extrapolated[j] = fine[j] + diff / 3.0;
    out.error_estimate[j] = std::abs(diff) / 3.0;
  }
  // Conforming refinements should converge from above.
  for (int lvl = 0; lvl + 1 < n_levels; ++lvl)
    for (std::size_t j = 0; j < values[lvl + 1].size() && j < values[lvl].size(); ++j)
      if (values[lvl][j] < values[lvl + 1][j] - 1e-11 * std::abs(values[lvl + 1][j]))
        out.monotone_from_above = false;
  return out;
}

}  // namespace tubespec
