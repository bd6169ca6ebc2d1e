#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hpade/polynomial.hpp"

namespace hpade {

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  void append_row(std::span<const cplx> values);
  std::vector<cplx> apply(std::span<const cplx> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Singular values and right singular vectors, ascending order.
///
/// Computed by one-sided (Hestenes) Jacobi orthogonalization of the columns, so
/// a matrix with fewer rows than columns yields cols values, the surplus being
/// numerically zero.
struct SvdResult {
  std::vector<double> singular_values;
  std::vector<std::vector<cplx>> right_vectors;  ///< right_vectors[i] pairs with singular_values[i]
};

SvdResult svd(const ComplexMatrix& m);

/// Number of singular values above rel_tol * largest.
std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol);

struct NullspaceResult {
  std::vector<cplx> vector;  ///< unit 2-norm
  double sigma_min = 0.0;    ///< ||M v||_2
  double sigma_gap = 0.0;    ///< second-smallest singular value
};

/// Unit vector minimizing ||M v|| for a matrix with one more column than rows.
NullspaceResult nullspace(const ComplexMatrix& m);

}  // namespace hpade
