#include "hpade/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hpade/errors.hpp"

namespace hpade {

namespace {

constexpr double kNoiseFactor = 32.0 * std::numeric_limits<double>::epsilon();

}  // namespace

BatchQuadratureResult contour_integrals(std::size_t count, const BatchIntegrand& integrand, const LevelCurve& curve,
                                        double rel_tol) {
  std::vector<cplx> buffer(count);
  // Raw sums of g(t_j) * dt/dtheta_j and |.| over all samples so far.
  std::vector<cplx> sums(count, 0.0);
  std::vector<double> abs_sums(count, 0.0);

  auto accumulate = [&](const LevelCurve& c, std::size_t start, std::size_t stride) {
    const auto& pts = c.samples();
    const auto& tan = c.tangents();
    for (std::size_t j = start; j < pts.size(); j += stride) {
      std::fill(buffer.begin(), buffer.end(), cplx(0.0));
      integrand(pts[j], buffer);
      for (std::size_t e = 0; e < count; ++e) {
        const cplx v = buffer[e] * tan[j];
        sums[e] += v;
        abs_sums[e] += std::abs(v);
      }
    }
  };

  LevelCurve current = curve;
  accumulate(current, 0, 1);
  auto scaled = [&](std::size_t n) {
    std::vector<cplx> v(count);
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t e = 0; e < count; ++e) v[e] = sums[e] * h;
    return v;
  };
  std::vector<cplx> previous = scaled(current.size());

  BatchQuadratureResult out;
  out.est_errors.assign(count, 0.0);
  out.noise_floors.assign(count, 0.0);
  while (true) {
    current = current.refined();
    accumulate(current, 1, 2);
    const std::size_t n = current.size();
    std::vector<cplx> values = scaled(n);
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
    bool converged = true;
    double worst = 0.0;
    for (std::size_t e = 0; e < count; ++e) {
      out.est_errors[e] = std::abs(values[e] - previous[e]);
      out.noise_floors[e] = kNoiseFactor * abs_sums[e] * h;
      const double threshold = std::max(rel_tol * std::abs(values[e]), out.noise_floors[e]);
      if (out.est_errors[e] > threshold) converged = false;
      if (threshold > 0.0) worst = std::max(worst, out.est_errors[e] / threshold);
    }
    previous = std::move(values);
    if (converged) break;
    if (n >= kMaxQuadratureSamples) {
      if (worst > 10.0) throw QuadratureError("contour integral did not converge within 2^16 samples");
      break;
    }
  }
  out.values = std::move(previous);
  out.samples_used = current.size();
  return out;
}

QuadratureResult contour_integral(const std::function<cplx(cplx)>& integrand, const LevelCurve& curve,
                                  double rel_tol) {
  const BatchQuadratureResult r = contour_integrals(
      1, [&](cplx t, std::span<cplx> out) { out[0] = integrand(t); }, curve, rel_tol);
  return {r.values[0], r.samples_used, r.est_errors[0]};
}

cplx condition_row(const FunctionModel& f, std::span<const cplx> nodes, const LevelCurve& curve, int col_degree,
                   double rel_tol) {
  const BatchQuadratureResult r = contour_integrals(
      1,
      [&](cplx t, std::span<cplx> out) {
        cplx v = f(t);
        for (int k = 0; k < col_degree; ++k) v *= t;
        for (const cplx a : nodes) v /= (t - a);
        out[0] = v;
      },
      curve, rel_tol);
  return r.values[0] / cplx(0.0, 2.0 * std::numbers::pi);
}

double safe_curve_level(double rho0, double exponent) {
  if (!std::isfinite(rho0)) return kEntireCurveLevel;
  if (!(rho0 > 1.0)) throw ConstructionError("no level curve separates E from the singularities");
  // the cap never pulls the curve below the geometric mean of 1 and rho0
  return std::min(std::pow(rho0, exponent), std::max(0.95 * rho0, std::sqrt(rho0)));
}

}  // namespace hpade
