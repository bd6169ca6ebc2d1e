#pragma once

#include <vector>

#include "hpade/functions.hpp"
#include "hpade/geometry.hpp"
#include "hpade/polynomial.hpp"

namespace hpade {

/// Ground truth derived from declared singularity metadata.
///
/// Supported systems: every function is a sum of rational terms, at most one
/// branch term (sqrt or log) and optional exp terms. Polynomial combinations
/// sum_k p_k f_k with deg p_k < m_k are represented by their |m| coefficients,
/// and every question about them reduces to rank computations on the linear
/// functionals "Laurent coefficient of order s at a pole" and "coefficient of
/// the branch function at a branch point".

struct SystemPole {
  cplx location;
  int order = 0;
  double level = 0.0;  ///< |phi(location)|
  /// rho[s-1] is the supremum of the next obstruction level over combinations
  /// with a pole of exact order s at location; R[s-1] = min_{k<=s} rho[k-1].
  std::vector<double> rho;
  std::vector<double> R;
  double R_xi = kInfinity;  ///< R[order-1]
};

struct FunctionRates {
  double R_k = kInfinity;
  double R_k_star = kInfinity;
  std::vector<cplx> poles_in_Dk;
};

struct SystemPoleSet {
  std::vector<SystemPole> poles;  ///< ordered by level, then real and imaginary part
  ComplexPolynomial q_mf;         ///< monic, zeros are the system poles with multiplicity
  std::vector<FunctionRates> per_function;
  int total_index = 0;  ///< |m| of the system

  int total_order() const;
  /// Entry for the pole at z, or nullptr.
  const SystemPole* find(cplx z, double tol = 1e-9) const;
};

/// System poles and their orders. Throws UnsupportedFunctionError for models
/// outside the supported class or with distinct poles closer than 1e-6.
SystemPoleSet system_poles(const SystemModel& sys);

/// Fills rho, R and R_xi per pole and R_k, R_k_star per function.
SystemPoleSet r_values(SystemPoleSet sps, const SystemModel& sys);

/// system_poles followed by r_values.
SystemPoleSet analyze_system(const SystemModel& sys);

/// max |phi(xi)| / R_xi over the system poles; 0 when every R_xi is infinite.
/// Throws IncompletePoleCountError unless the orders add up to |m|.
double predicted_theta(const SystemPoleSet& sps, const GeometrySpec& g);

/// True iff no nontrivial combination sum_k p_k f_k with deg p_k < m_k is a polynomial.
bool polynomial_independence(const SystemModel& sys);

}  // namespace hpade
