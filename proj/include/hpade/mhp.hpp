#pragma once

#include <cstddef>
#include <vector>

#include "hpade/functions.hpp"
#include "hpade/geometry.hpp"
#include "hpade/polynomial.hpp"

namespace hpade {

struct MhpOptions {
  double quadrature_rel_tol = 1e-13;
  /// Quadrature curve for f_k sits at level rho_0(f_k)^curve_exponent.
  double curve_exponent = 0.85;
  std::size_t min_samples = 64;
  /// Q is reported monic when |leading| >= this fraction of its 2-norm.
  double monic_threshold = 1e-3;
  /// Roots of Q within this relative distance of a root of every numerator are divided out.
  double common_root_tol = 1e-7;
};

enum class Normalization { monic, unit_coefficient_sum };

/// Polynomial in Newton form sum_j coeffs[j] prod_{i<j} (z - nodes[i]).
struct NewtonForm {
  std::vector<cplx> nodes;
  std::vector<cplx> coeffs;

  cplx operator()(cplx z) const;
  ComplexPolynomial to_polynomial() const;
};

struct MhpResult {
  int n = 0;
  std::vector<int> multi_index;
  ComplexPolynomial q;
  Normalization normalization = Normalization::monic;
  /// Leading coefficient of q rescaled to unit coefficient sum.
  cplx lambda_top;
  std::vector<ComplexPolynomial> numerators;
  /// Smallest and second-smallest singular values of the row-normalized
  /// interpolation system with one further Newton condition per function
  /// appended. sigma_min measures how nearly Q satisfies the extra conditions;
  /// sigma_gap stays away from zero when Q is uniquely determined.
  double sigma_min = 0.0;
  double sigma_gap = 0.0;
  /// ||M v|| of the square-free system actually solved (rounding level).
  double residual = 0.0;
  bool degenerate = false;
  int common_factors_removed = 0;
  std::vector<double> curve_levels;
  std::size_t samples_used = 0;

  /// Denominator before common-factor removal and the numerators in Newton
  /// form on row n+1; approximant_eval uses these.
  ComplexPolynomial eval_denominator;
  std::vector<NewtonForm> newton_numerators;
};

/// Multipoint Hermite-Pade approximant of index (n, m) for the system.
MhpResult compute_mhp(const SystemModel& sys, int n, const MhpOptions& opts = {});

/// Incomplete multipoint Pade approximant of type (n, m, m_star) for one function:
/// denominator degree <= m, numerator degree <= n - m_star. Beyond the m_star
/// top Newton conditions the next-lower orders are imposed, m conditions in all.
MhpResult compute_incomplete(const FunctionModel& f, const NodeTable& table, int n, int m, int m_star,
                             const MhpOptions& opts = {});

/// P_k(z) / Q(z). Throws NearPoleError when |Q(z)| <= 1e-13 ||Q||.
cplx approximant_eval(const MhpResult& r, std::size_t k, cplx z);

}  // namespace hpade
