#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace hpade {

using cplx = std::complex<double>;

/// Degree reported for the zero polynomial.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

/// Dense polynomial over the complex numbers, coefficients in ascending degree.
///
/// Trailing coefficients that are exactly zero are trimmed on construction, so
/// degree() is the index of the last stored coefficient. The zero polynomial is
/// stored as the single coefficient 0 and has degree kZeroDegree.
class ComplexPolynomial {
 public:
  ComplexPolynomial();
  explicit ComplexPolynomial(std::vector<cplx> coeffs);
  ComplexPolynomial(std::initializer_list<cplx> coeffs);

  /// lead * prod (z - r) over the given roots (repeated roots allowed).
  static ComplexPolynomial from_roots(std::span<const cplx> roots, cplx lead = 1.0);
  static ComplexPolynomial monomial(int k, cplx coeff = 1.0);

  int degree() const;
  bool is_zero() const;
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  /// Coefficient of z^k; zero for k above the degree.
  cplx coeff(int k) const;
  cplx leading() const { return coeffs_.back(); }

  cplx operator()(cplx z) const;
  /// Value of the order-th derivative at z.
  cplx derivative_at(cplx z, int order) const;
  ComplexPolynomial derivative(int order = 1) const;

  /// Copy scaled so that the leading coefficient is exactly 1.
  ComplexPolynomial monic() const;
  /// Coefficients of p(center + t) in powers of t.
  ComplexPolynomial taylor_shift(cplx center) const;
  /// Quotient of synthetic division by (z - root); the remainder is dropped.
  ComplexPolynomial deflate(cplx root) const;

  /// Sum of coefficient moduli.
  double coefficient_norm() const;
  double l2_norm() const;

  /// Horner evaluation with the matching running error bound.
  cplx evaluate_with_bound(cplx z, double& bound) const;

  ComplexPolynomial& operator+=(const ComplexPolynomial& rhs);
  ComplexPolynomial& operator-=(const ComplexPolynomial& rhs);
  ComplexPolynomial& operator*=(cplx s);

  friend ComplexPolynomial operator+(ComplexPolynomial a, const ComplexPolynomial& b) { return a += b; }
  friend ComplexPolynomial operator-(ComplexPolynomial a, const ComplexPolynomial& b) { return a -= b; }
  friend ComplexPolynomial operator*(ComplexPolynomial a, cplx s) { return a *= s; }
  friend ComplexPolynomial operator*(cplx s, ComplexPolynomial a) { return a *= s; }
  friend ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b);
  friend bool operator==(const ComplexPolynomial& a, const ComplexPolynomial& b) = default;

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

/// Coefficient norm of a - b, the distance used for denominator convergence.
double coefficient_distance(const ComplexPolynomial& a, const ComplexPolynomial& b);

}  // namespace hpade
