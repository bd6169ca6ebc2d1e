#include "hpade/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "hpade/errors.hpp"

namespace hpade {

ComplexPolynomial::ComplexPolynomial() : coeffs_{0.0} {}

ComplexPolynomial::ComplexPolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

ComplexPolynomial::ComplexPolynomial(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) {
  trim();
}

void ComplexPolynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == cplx(0.0)) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

ComplexPolynomial ComplexPolynomial::from_roots(std::span<const cplx> roots, cplx lead) {
  std::vector<cplx> c{lead};
  c.reserve(roots.size() + 1);
  for (const cplx r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::monomial(int k, cplx coeff) {
  std::vector<cplx> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = coeff;
  return ComplexPolynomial(std::move(c));
}

int ComplexPolynomial::degree() const {
  if (is_zero()) return kZeroDegree;
  return static_cast<int>(coeffs_.size()) - 1;
}

bool ComplexPolynomial::is_zero() const {
  return coeffs_.size() == 1 && coeffs_[0] == cplx(0.0);
}

cplx ComplexPolynomial::coeff(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= coeffs_.size()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

cplx ComplexPolynomial::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cplx ComplexPolynomial::evaluate_with_bound(cplx z, double& bound) const {
  // Running error bound for Horner's rule (Higham, Alg. 5.1 adapted to complex data).
  const double az = std::abs(z);
  cplx acc = coeffs_.back();
  double mu = 0.5 * std::abs(acc);
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
    acc = acc * z + coeffs_[k];
    mu = mu * az + std::abs(acc);
  }
  bound = std::numeric_limits<double>::epsilon() * (2.0 * mu - std::abs(acc)) * 4.0;
  return acc;
}

cplx ComplexPolynomial::derivative_at(cplx z, int order) const {
  if (order == 0) return (*this)(z);
  return derivative(order)(z);
}

ComplexPolynomial ComplexPolynomial::derivative(int order) const {
  std::vector<cplx> c = coeffs_;
  for (int o = 0; o < order; ++o) {
    if (c.size() <= 1) return ComplexPolynomial();
    for (std::size_t k = 1; k < c.size(); ++k) c[k - 1] = c[k] * static_cast<double>(k);
    c.pop_back();
  }
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::monic() const {
  if (is_zero()) throw InvalidModelError("cannot normalize the zero polynomial");
  const cplx lead = coeffs_.back();
  std::vector<cplx> c(coeffs_.size());
  for (std::size_t k = 0; k + 1 < c.size(); ++k) c[k] = coeffs_[k] / lead;
  c.back() = 1.0;
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::taylor_shift(cplx center) const {
  std::vector<cplx> c = coeffs_;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) c[k - 1] += center * c[k];
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::deflate(cplx root) const {
  if (coeffs_.size() <= 1) return ComplexPolynomial();
  std::vector<cplx> q(coeffs_.size() - 1);
  cplx acc = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
    q[k] = acc;
    acc = coeffs_[k] + acc * root;
  }
  return ComplexPolynomial(std::move(q));
}

double ComplexPolynomial::coefficient_norm() const {
  double s = 0.0;
  for (const cplx c : coeffs_) s += std::abs(c);
  return s;
}

double ComplexPolynomial::l2_norm() const {
  double s = 0.0;
  for (const cplx c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

ComplexPolynomial& ComplexPolynomial::operator+=(const ComplexPolynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  trim();
  return *this;
}

ComplexPolynomial& ComplexPolynomial::operator-=(const ComplexPolynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  trim();
  return *this;
}

ComplexPolynomial& ComplexPolynomial::operator*=(cplx s) {
  for (cplx& c : coeffs_) c *= s;
  trim();
  return *this;
}

ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return ComplexPolynomial();
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return ComplexPolynomial(std::move(c));
}

double coefficient_distance(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  const int top = std::max(static_cast<int>(a.coeffs().size()), static_cast<int>(b.coeffs().size()));
  double s = 0.0;
  for (int k = 0; k < top; ++k) s += std::abs(a.coeff(k) - b.coeff(k));
  return s;
}

}  // namespace hpade
