#ifndef TUBESPEC_EIGENSOLVE_HPP
#define TUBESPEC_EIGENSOLVE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "tubespec/sparse.hpp"

namespace tubespec {

struct EigSolveOptions {
  int k = 1;                        // number of lowest eigenpairs
  // Convergence: ||Ax - lambda Bx|| / ||Bx|| <= tol * max(1, |lambda|) per
  // pair, which keeps the criterion meaningful under domain rescaling.
  double tol = 1e-9;
  int max_iterations = 800;
  std::uint64_t seed = 0x5eed1e5ULL;
  bool want_vectors = false;
  int block_size = 0;               // 0 = auto (k + 4, capped at n)
  bool allow_direct_fallback = true;  // shift-invert fallback for n <= 50'000
  Eigen::MatrixXd initial_guess;    // optional warm start, n x (<= block) columns
  // Optional additive coarse-space correction z += C(r), combined with the
  // incomplete-factorization smoother into a two-level preconditioner. Set by
  // the refinement driver on large nested levels; must be a fixed linear map.
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> coarse_correction;
};

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending, k entries
  std::vector<double> residuals;    // ||Ax - lambda Bx|| / ||Bx|| per pair
  int iterations = 0;
  Eigen::MatrixXd eigenvectors;     // n x k when requested, else empty

  double value() const { return eigenvalues.at(0); }
};

inline EigSolveOptions solver_options_with_tol(double tol) {
  EigSolveOptions o;
  o.tol = tol;
  return o;
}

/// k lowest eigenpairs of the symmetric pencil A x = lambda B x
/// (A positive semidefinite, B positive definite).
///
/// Blocked preconditioned conjugate-direction iteration (LOBPCG style) with an
/// incomplete-Cholesky preconditioner built from A. Deterministic for a fixed
/// seed: the start block, the iteration and all reductions are sequential.
/// If the iteration stalls and the problem is small enough, falls back to
/// inverse subspace iteration with a sparse direct factorization of A.
EigenResult lowest_eigenpairs(const SparseSymmetric& A, const SparseSymmetric& B,
                              const EigSolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Mesh refinement driver
// ---------------------------------------------------------------------------

struct Pencil {
  SparseSymmetric stiffness;
  SparseSymmetric mass;
  double mesh_h = 0.0;  // representative cell size, halved per level
  int cells = 0;        // cells along the leading direction (reporting only)
  // Optional interpolation matrix from the previous (coarser) level's
  // unknowns onto this level's; used for warm starts and the two-level
  // preconditioner. Empty when levels are not nested.
  Eigen::SparseMatrix<double> prolongation;
};

using PencilBuilder = std::function<Pencil(int level)>;  // level 0 = coarsest

struct LevelSolve {
  int level = 0;
  int unknowns = 0;
  int cells = 0;
  double mesh_h = 0.0;
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  int iterations = 0;
};

/// Result of a solve at >= 2 nested grid levels with mesh ratio 2, Richardson
/// extrapolated assuming O(h^2) convergence. The error estimate is
/// |lambda(h) - lambda(h/2)| / 3 from the finest pair.
struct RefinedEigenResult {
  std::vector<double> extrapolated;
  std::vector<double> error_estimate;
  std::vector<LevelSolve> levels;
  bool monotone_from_above = true;  // false = warning, extrapolation still reported
  Eigen::MatrixXd fine_eigenvectors;

  double value() const { return extrapolated.at(0); }
  double error() const { return error_estimate.at(0); }
  /// Raw finest-level value: a conforming upper bound for Galerkin pencils.
  double raw() const { return levels.back().eigenvalues.at(0); }
};

RefinedEigenResult refine_extrapolate(const PencilBuilder& builder, int n_levels,
                                      const EigSolveOptions& opts = {});

}  // namespace tubespec

#endif
