#include "hpade/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hpade/errors.hpp"

namespace hpade {

void ComplexMatrix::append_row(std::span<const cplx> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw InvalidModelError("append_row: column count mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> v) const {
  std::vector<cplx> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

SvdResult svd(const ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  // Column-major working copies: u[j] is column j of M V, v[j] column j of V.
  std::vector<std::vector<cplx>> u(cols, std::vector<cplx>(rows));
  std::vector<std::vector<cplx>> v(cols, std::vector<cplx>(cols, 0.0));
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) u[j][i] = m(i, j);
    v[j][j] = 1.0;
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        cplx gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += std::norm(u[p][i]);
          beta += std::norm(u[q][i]);
          gamma += std::conj(u[p][i]) * u[q][i];
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const cplx phase = gamma / g;  // rotate u_q by conj(phase) to make the inner product real
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const cplx up = u[p][i];
          const cplx uq = u[q][i] * std::conj(phase);
          u[p][i] = cs * up - sn * uq;
          u[q][i] = sn * up + cs * uq;
        }
        for (std::size_t i = 0; i < cols; ++i) {
          const cplx vp = v[p][i];
          const cplx vq = v[q][i] * std::conj(phase);
          v[p][i] = cs * vp - sn * vq;
          v[q][i] = sn * vp + cs * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (const cplx x : u[j]) s += std::norm(x);
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigma[a] < sigma[b]; });

  SvdResult out;
  for (const std::size_t j : order) {
    out.singular_values.push_back(sigma[j]);
    out.right_vectors.push_back(std::move(v[j]));
  }
  return out;
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const SvdResult s = svd(m);
  const double top = s.singular_values.back();
  if (top == 0.0) return 0;
  const auto count = std::count_if(s.singular_values.begin(), s.singular_values.end(),
                                   [&](double x) { return x > rel_tol * top; });
  return std::min<std::size_t>(static_cast<std::size_t>(count), std::min(m.rows(), m.cols()));
}

NullspaceResult nullspace(const ComplexMatrix& m) {
  if (m.rows() < 1 || m.cols() != m.rows() + 1)
    throw InvalidModelError("nullspace: expected a matrix with one more column than rows");
  SvdResult s = svd(m);
  NullspaceResult out;
  out.vector = std::move(s.right_vectors.front());
  double norm = 0.0;
  for (const cplx x : out.vector) norm += std::norm(x);
  norm = std::sqrt(norm);
  for (cplx& x : out.vector) x /= norm;
  double r = 0.0;
  for (const cplx x : m.apply(out.vector)) r += std::norm(x);
  out.sigma_min = std::sqrt(r);
  out.sigma_gap = s.singular_values[1];
  return out;
}

}  // namespace hpade
