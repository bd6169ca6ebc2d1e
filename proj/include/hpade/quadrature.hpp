#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hpade/functions.hpp"
#include "hpade/geometry.hpp"

namespace hpade {

struct QuadratureResult {
  cplx value;
  std::size_t samples_used = 0;
  double est_error = 0.0;  ///< |value(N) - value(N/2)|
};

/// Several integrals over the same curve sharing one set of samples.
struct BatchQuadratureResult {
  std::vector<cplx> values;
  std::vector<double> est_errors;
  /// Rounding floor of each value: a small multiple of eps * integral of |integrand| |dt|.
  std::vector<double> noise_floors;
  std::size_t samples_used = 0;
};

/// Fills out[0..count) with integrand values at t.
using BatchIntegrand = std::function<void(cplx t, std::span<cplx> out)>;

inline constexpr std::size_t kMaxQuadratureSamples = std::size_t{1} << 16;

/// Trapezoidal rule in the angle of the level-curve parametrization, doubling
/// the sample count until every value changes by at most
/// max(rel_tol * |value|, noise floor). Throws QuadratureError if the 2^16 cap
/// is hit with an estimated error above ten times that threshold.
BatchQuadratureResult contour_integrals(std::size_t count, const BatchIntegrand& integrand, const LevelCurve& curve,
                                        double rel_tol);

/// Closed integral of integrand(t) dt over the curve.
QuadratureResult contour_integral(const std::function<cplx(cplx)>& integrand, const LevelCurve& curve,
                                  double rel_tol);

/// (1/2 pi i) * integral of t^col_degree f(t) / prod (t - node_i) dt: the divided
/// difference of z^col_degree * f over the given nodes.
cplx condition_row(const FunctionModel& f, std::span<const cplx> nodes, const LevelCurve& curve, int col_degree,
                   double rel_tol = 1e-13);

/// Level used for the quadrature curve of a function with holomorphy index rho0:
/// rho0^exponent, capped at max(0.95 rho0, sqrt(rho0)); kEntireCurveLevel for entire functions.
inline constexpr double kEntireCurveLevel = 4.0;
double safe_curve_level(double rho0, double exponent);

}  // namespace hpade
