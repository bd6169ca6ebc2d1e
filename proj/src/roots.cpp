#include "hpade/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hpade/errors.hpp"

namespace hpade {

namespace {

constexpr int kMaxSweeps = 500;
constexpr double kCorrectionTol = 1e-13;
constexpr double kClusterTol = 1e-7;

struct Approximation {
  std::vector<cplx> z;
  std::vector<double> radius;  // Newton inclusion radius
};

Approximation aberth(const ComplexPolynomial& p) {
  const int n = p.degree();
  const ComplexPolynomial dp = p.derivative();
  const auto& a = p.coeffs();

  // Perturbed circle around the root centroid, radius = geometric mean of |roots - centroid|.
  const cplx centroid = -a[static_cast<std::size_t>(n - 1)] / (static_cast<double>(n) * a.back());
  const ComplexPolynomial shifted = p.taylor_shift(centroid);
  double r0 = std::pow(std::abs(shifted.coeff(0) / shifted.leading()), 1.0 / n);
  if (!(r0 > 0.0) || !std::isfinite(r0)) r0 = 1.0;

  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    z[static_cast<std::size_t>(k)] = centroid + std::polar(r0, 2.0 * std::numbers::pi * k / n + 0.4);

  std::vector<bool> done(z.size(), false);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool all_done = true;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (done[i]) continue;
      double bound = 0.0;
      const cplx pv = p.evaluate_with_bound(z[i], bound);
      if (std::abs(pv) <= bound) {
        done[i] = true;
        continue;
      }
      const cplx ratio = pv / dp(z[i]);
      cplx sum = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      const cplx step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        z[i] += cplx(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
        all_done = false;
        continue;
      }
      z[i] -= step;
      if (std::abs(step) <= kCorrectionTol * (1.0 + std::abs(z[i])))
        done[i] = true;
      else
        all_done = false;
    }
    if (all_done && std::all_of(done.begin(), done.end(), [](bool b) { return b; })) {
      Approximation out{z, std::vector<double>(z.size())};
      for (std::size_t i = 0; i < z.size(); ++i) {
        double bound = 0.0;
        const double pv = std::abs(p.evaluate_with_bound(z[i], bound));
        const double dv = std::abs(dp(z[i]));
        out.radius[i] = dv > 0.0 ? n * (pv + bound) / dv : 0.0;
      }
      return out;
    }
  }
  throw RootFindingError("poly_roots: Aberth iteration did not converge in 500 sweeps", z);
}

// A root of multiplicity mu is a simple root of p^(mu-1); Newton there
// recovers the digits the averaged cluster loses. Kept only when it stays
// inside the cluster.
cplx polish_cluster(const ComplexPolynomial& p, cplx centroid, int mu, double spread) {
  if (mu < 2) return centroid;
  cplx z = centroid;
  for (int it = 0; it < 8; ++it) {
    const cplx d = p.derivative_at(z, mu);
    if (d == 0.0) break;
    const cplx step = p.derivative_at(z, mu - 1) / d;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    z -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return std::abs(z - centroid) <= spread + 1e-12 * (1.0 + std::abs(centroid)) ? z : centroid;
}

}  // namespace

std::vector<RootCluster> root_clusters(const ComplexPolynomial& p) {
  const int n = p.degree();
  if (n < 1) throw InvalidModelError("poly_roots requires degree >= 1");
  std::vector<RootCluster> out;
  if (n == 1) {
    out.push_back({-p.coeff(0) / p.coeff(1), 1});
    return out;
  }
  const Approximation approx = aberth(p);
  const std::size_t m = approx.z.size();

  // Single-linkage grouping via union-find.
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double scale = 1.0 + std::max(std::abs(approx.z[i]), std::abs(approx.z[j]));
      const double tol = std::max(kClusterTol * scale, approx.radius[i] + approx.radius[j]);
      if (std::abs(approx.z[i] - approx.z[j]) <= tol) parent[find(i)] = find(j);
    }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<cplx> sum(m, 0.0);
  std::vector<int> count(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    sum[find(i)] += approx.z[i];
    ++count[find(i)];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (count[i] == 0) continue;
    const cplx centroid = sum[i] / static_cast<double>(count[i]);
    double spread = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (find(j) == i) spread = std::max(spread, std::abs(approx.z[j] - centroid) + approx.radius[j]);
    out.push_back({polish_cluster(p, centroid, count[i], spread), count[i]});
  }
  std::sort(out.begin(), out.end(), [](const RootCluster& x, const RootCluster& y) {
    if (std::abs(x.location) != std::abs(y.location)) return std::abs(x.location) < std::abs(y.location);
    return std::arg(x.location) < std::arg(y.location);
  });
  return out;
}

std::vector<cplx> poly_roots(const ComplexPolynomial& p) {
  std::vector<cplx> out;
  for (const RootCluster& c : root_clusters(p)) out.insert(out.end(), static_cast<std::size_t>(c.multiplicity), c.location);
  return out;
}

}  // namespace hpade
