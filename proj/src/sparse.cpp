#include "tubespec/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "tubespec/errors.hpp"

namespace tubespec {

void SparseSymmetric::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.setZero(n_);
  for (int i = 0; i < n_; ++i) {
    const double xi = x[i];
    double yi = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const int j = col_[p];
      const double v = val_[p];
      yi += v * x[j];
      if (j != i) y[j] += v * xi;
    }
    y[i] += yi;
  }
}

Eigen::VectorXd SparseSymmetric::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::MatrixXd SparseSymmetric::multiply_block(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd Y(n_, X.cols());
  Eigen::VectorXd y;
  for (int c = 0; c < X.cols(); ++c) {
    multiply(X.col(c), y);
    Y.col(c) = y;
  }
  return Y;
}

Eigen::VectorXd SparseSymmetric::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      if (col_[p] == i) d[i] = val_[p];
  return d;
}

Eigen::SparseMatrix<double> SparseSymmetric::to_eigen_full() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * val_.size());
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      trips.emplace_back(i, col_[p], val_[p]);
      if (col_[p] != i) trips.emplace_back(col_[p], i, val_[p]);
    }
  Eigen::SparseMatrix<double> m(n_, n_);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

Eigen::MatrixXd SparseSymmetric::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      m(i, col_[p]) = val_[p];
      m(col_[p], i) = val_[p];
    }
  return m;
}

double SparseSymmetric::max_entry_difference(const SparseSymmetric& a, const SparseSymmetric& b) {
  if (a.n_ != b.n_ || a.row_ptr_ != b.row_ptr_ || a.col_ != b.col_)
    throw ValidationError("max_entry_difference: sparsity patterns differ");
  double m = 0.0;
  for (std::size_t p = 0; p < a.val_.size(); ++p)
    m = std::max(m, std::abs(a.val_[p] - b.val_[p]));
  return m;
}

SparseSymmetricBuilder::SparseSymmetricBuilder(int n) : n_(n), rows_(n) {
  if (n <= 0) throw ValidationError("SparseSymmetricBuilder: dimension must be positive");
}

void SparseSymmetricBuilder::add(int i, int j, double v) {
  if (i > j) std::swap(i, j);
  auto& row = rows_[i];
  for (auto& [c, x] : row) {
    if (c == j) {
      x += v;
      return;
    }
  }
  row.emplace_back(j, v);
}

SparseSymmetric SparseSymmetricBuilder::finalize() const {
  SparseSymmetric m;
  m.n_ = n_;
  m.row_ptr_.assign(n_ + 1, 0);
  std::size_t nnz = 0;
  for (const auto& row : rows_) nnz += row.size();
  m.col_.reserve(nnz);
  m.val_.reserve(nnz);
  std::vector<std::pair<int, double>> sorted;
  for (int i = 0; i < n_; ++i) {
    sorted.assign(rows_[i].begin(), rows_[i].end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [c, v] : sorted) {
      m.col_.push_back(c);
      m.val_.push_back(v);
    }
    m.row_ptr_[i + 1] = static_cast<int>(m.col_.size());
  }
  return m;
}

}  // namespace tubespec
