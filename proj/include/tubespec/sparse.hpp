#ifndef TUBESPEC_SPARSE_HPP
#define TUBESPEC_SPARSE_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

namespace tubespec {

/// Sparse symmetric matrix storing only the upper triangle (j >= i) in CSR.
/// Symmetry is structural: there is no way to set A_ij != A_ji.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  int rows() const { return n_; }
  std::size_t stored_entries() const { return val_.size(); }

  /// y = A x, expanding the stored triangle. Sequential and deterministic.
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

  /// Column-by-column product for block vectors.
  Eigen::MatrixXd multiply_block(const Eigen::MatrixXd& X) const;

  Eigen::VectorXd diagonal() const;

  /// Both-triangle copies for factorizations and dense reference solves.
  Eigen::SparseMatrix<double> to_eigen_full() const;
  Eigen::MatrixXd to_dense() const;

  /// Largest |A_ij - A'_ij| over stored entries; requires identical patterns.
  static double max_entry_difference(const SparseSymmetric& a, const SparseSymmetric& b);

 private:
  friend class SparseSymmetricBuilder;
  int n_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

/// Accumulating builder: add(i, j, v) adds v to the unordered pair {i, j}.
/// Rows are kept as small unsorted lists, which is fast for FEM stencils.
class SparseSymmetricBuilder {
 public:
  explicit SparseSymmetricBuilder(int n);

  void add(int i, int j, double v);
  SparseSymmetric finalize() const;

  int rows() const { return n_; }

 private:
  int n_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

}  // namespace tubespec

#endif
