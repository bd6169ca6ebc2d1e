#pragma once

// Property suites for the numerical kernel, shared by the unit tests and the
// acceptance binary. Each suite returns the worst observed error and whether
// it stayed within its tolerance.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "hpade/geometry.hpp"
#include "hpade/linalg.hpp"
#include "hpade/quadrature.hpp"
#include "hpade/roots.hpp"

namespace suites {

using hpade::cplx;

struct SuiteResult {
  bool passed = true;
  double worst = 0.0;
  int cases = 0;
  std::string detail;

  void record(double err, double tol) {
    ++cases;
    worst = std::max(worst, err / tol);
    if (!(err <= tol)) passed = false;
  }
};

/// Complete homogeneous symmetric polynomial h_k(z_1..z_p) by the recurrence
/// h_k(z_1..z_p) = h_k(z_1..z_{p-1}) + z_p h_{k-1}(z_1..z_p).
inline cplx complete_homogeneous(const std::vector<cplx>& z, int k) {
  if (k < 0) return 0.0;
  std::vector<cplx> h(static_cast<std::size_t>(k) + 1, 0.0);
  h[0] = 1.0;
  for (const cplx zp : z)
    for (int j = 1; j <= k; ++j) h[static_cast<std::size_t>(j)] += zp * h[static_cast<std::size_t>(j - 1)];
  return h[static_cast<std::size_t>(k)];
}

/// Integrals of t^k / prod (t - z_j) with all z_j inside the curve against the
/// residue theorem: 2 pi i h_{k-p+1}(z). Tolerance: 1e-12 relative to the
/// integral of |integrand| |dt|.
inline SuiteResult quadrature_residue_suite(unsigned seed = 1) {
  SuiteResult res;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<hpade::GeometrySpec> shapes{hpade::GeometrySpec::disk(0.0, 0.5),
                                                hpade::GeometrySpec::segment(-1.0, 1.0),
                                                hpade::GeometrySpec::ellipse(cplx(0.3, -0.2), 1.0, 0.4, 0.7)};
  for (const auto& g : shapes) {
    const hpade::LevelCurve curve(g, 2.0, 64);
    for (int p = 1; p <= 4; ++p) {
      for (int k = 0; k <= 10; ++k) {
        std::vector<cplx> z;
        // points of E or just outside it, all well inside the rho = 2 curve
        while (static_cast<int>(z.size()) < p) {
          const cplx w = g.center() + cplx(u(rng), u(rng));
          if (g.level(w) < 1.3) z.push_back(w);
        }
        auto integrand = [&](cplx t) {
          cplx v = 1.0;
          for (int i = 0; i < k; ++i) v *= t;
          for (const cplx a : z) v /= (t - a);
          return v;
        };
        const auto q = hpade::contour_integral(integrand, curve, 1e-13);
        const cplx exact = cplx(0.0, 2.0 * std::numbers::pi) * complete_homogeneous(z, k - p + 1);
        double scale = 0.0;
        const hpade::LevelCurve fine(g, 2.0, 4096);
        for (std::size_t j = 0; j < fine.size(); ++j)
          scale += std::abs(integrand(fine.samples()[j]) * fine.tangents()[j]);
        scale *= 2.0 * std::numbers::pi / static_cast<double>(fine.size());
        res.record(std::abs(q.value - exact), 1e-12 * scale);
      }
    }
  }
  res.detail = "residue exactness, k <= 10, up to 4 poles, 3 geometries";
  return res;
}

/// Divided-difference oracle by the recursive table for distinct nodes.
inline cplx divided_difference(const std::function<cplx(cplx)>& f, const std::vector<cplx>& x) {
  std::vector<cplx> t;
  for (const cplx xi : x) t.push_back(f(xi));
  for (std::size_t level = 1; level < x.size(); ++level)
    for (std::size_t i = x.size() - 1; i >= level; --i) t[i] = (t[i] - t[i - 1]) / (x[i] - x[i - level]);
  return t.back();
}

/// condition_row against the recursive table, under node permutation, and for
/// linear combinations of functions.
inline SuiteResult divided_difference_suite(unsigned seed = 2) {
  SuiteResult res;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto g = hpade::GeometrySpec::segment(-1.0, 1.0);
  const hpade::LevelCurve curve(g, 1.6, 64);
  const hpade::FunctionModel f1({hpade::RationalTerm::from_poles(hpade::ComplexPolynomial{1.0}, {cplx(1.6, 0.4)})});
  const hpade::FunctionModel f2({hpade::SqrtBranchTerm{cplx(-1.5, -0.9), cplx(0.7, 0.2)}, hpade::EntireExpTerm{}});
  const cplx lambda(0.3, -1.1);
  const hpade::FunctionModel sum({hpade::RationalTerm::from_poles(hpade::ComplexPolynomial{1.0}, {cplx(1.6, 0.4)}),
                                  hpade::SqrtBranchTerm{cplx(-1.5, -0.9), lambda * cplx(0.7, 0.2)},
                                  hpade::EntireExpTerm{lambda}});
  for (int trial = 0; trial < 20; ++trial) {
    const int count = 2 + trial % 6;
    std::vector<cplx> nodes;
    for (int i = 0; i < count; ++i) nodes.push_back(cplx(0.8 * u(rng), 0.1 * u(rng)));
    const int col = trial % 4;
    auto zf = [&](cplx z) { return std::pow(z, col) * f1(z); };
    const cplx row = hpade::condition_row(f1, nodes, curve, col);
    const cplx table = divided_difference(zf, nodes);
    res.record(std::abs(row - table), 1e-10 * std::max(1.0, std::abs(table)));

    std::vector<cplx> shuffled = nodes;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const cplx again = hpade::condition_row(f1, shuffled, curve, col);
    res.record(std::abs(again - row), 1e-10 * std::max(1.0, std::abs(row)));

    const cplx a = hpade::condition_row(f1, nodes, curve, col);
    const cplx b = hpade::condition_row(f2.with_cuts_away_from(0.0), nodes, curve, col);
    const cplx c = hpade::condition_row(sum.with_cuts_away_from(0.0), nodes, curve, col);
    res.record(std::abs(c - (a + lambda * b)), 1e-11 * std::max(1.0, std::abs(c)));
  }
  res.detail = "recursive-table agreement, permutation symmetry, linearity";
  return res;
}

/// Nullspace of random (cols-1) x cols matrices: backward error, agreement with
/// an independent SVD, minimality over random unit probes, and the gap bound
/// after appending the kernel vector as a row.
inline SuiteResult nullspace_suite(unsigned seed = 3) {
  SuiteResult res;
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t cols = 2 + static_cast<std::size_t>(trial % 7);
    hpade::ComplexMatrix m(cols - 1, cols);
    Eigen::MatrixXcd e(cols - 1, cols);
    for (std::size_t i = 0; i + 1 < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j) e(i, j) = m(i, j) = cplx(nd(rng), nd(rng));
    const hpade::NullspaceResult ns = hpade::nullspace(m);
    double vnorm = 0.0, mv = 0.0;
    for (const cplx x : ns.vector) vnorm += std::norm(x);
    for (const cplx x : m.apply(ns.vector)) mv += std::norm(x);
    res.record(std::abs(std::sqrt(vnorm) - 1.0), 1e-13);
    res.record(std::abs(std::sqrt(mv) - ns.sigma_min), 1e-13);

    Eigen::JacobiSVD<Eigen::MatrixXcd> oracle(e);
    const auto& sv = oracle.singularValues();  // descending, min(rows, cols) values
    const double top = sv(0);
    res.record(std::abs(ns.sigma_gap - sv(sv.size() - 1)), 1e-12 * top);
    res.record(ns.sigma_min, 1e-13 * top);

    for (int probe = 0; probe < 1000 / 30; ++probe) {
      std::vector<cplx> w(cols);
      double wn = 0.0;
      for (cplx& x : w) {
        x = cplx(nd(rng), nd(rng));
        wn += std::norm(x);
      }
      for (cplx& x : w) x /= std::sqrt(wn);
      double mw = 0.0;
      for (const cplx x : m.apply(w)) mw += std::norm(x);
      res.record(std::max(0.0, ns.sigma_min - std::sqrt(mw)), 1e-14 * top);
    }

    // Appending ||M||_F * v^H turns M square; its smallest singular value is
    // then at least sigma_gap.
    double fro = 0.0;
    for (std::size_t i = 0; i + 1 < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j) fro += std::norm(e(i, j));
    fro = std::sqrt(fro);
    Eigen::MatrixXcd sq(cols, cols);
    sq.topRows(cols - 1) = e;
    for (std::size_t j = 0; j < cols; ++j) sq(static_cast<Eigen::Index>(cols - 1), j) = fro * std::conj(ns.vector[j]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> sq_svd(sq);
    const double smallest = sq_svd.singularValues()(static_cast<Eigen::Index>(cols - 1));
    res.record(std::max(0.0, ns.sigma_gap * (1.0 - 1e-10) - smallest), 1e-300);
  }
  res.detail = "backward error, SVD agreement, minimality, gap after augmentation";
  return res;
}

/// Planted roots of random monic polynomials up to degree 8, plus clusters.
inline SuiteResult root_suite(unsigned seed = 4) {
  SuiteResult res;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto match = [&](const std::vector<cplx>& planted, const std::vector<cplx>& found, double tol) {
    if (found.size() != planted.size()) {
      res.record(1.0, 0.0);
      return;
    }
    std::vector<bool> used(found.size(), false);
    for (const cplx p : planted) {
      double best = 1e300;
      std::size_t idx = 0;
      for (std::size_t i = 0; i < found.size(); ++i)
        if (!used[i] && std::abs(found[i] - p) < best) {
          best = std::abs(found[i] - p);
          idx = i;
        }
      used[idx] = true;
      res.record(best, tol);
    }
  };
  for (int trial = 0; trial < 40; ++trial) {
    const int deg = 1 + trial % 8;
    std::vector<cplx> planted;
    while (static_cast<int>(planted.size()) < deg) {
      const cplx z(u(rng), u(rng));
      const bool apart =
          std::all_of(planted.begin(), planted.end(), [&](cplx w) { return std::abs(w - z) > 0.05; });
      if (apart) planted.push_back(z);
    }
    match(planted, hpade::poly_roots(hpade::ComplexPolynomial::from_roots(planted)), 1e-9);
  }
  const std::vector<cplx> triple{cplx(1, 1), cplx(1, 1), cplx(1, 1)};
  match(triple, hpade::poly_roots(hpade::ComplexPolynomial::from_roots(triple)), 1e-9);
  const auto clusters = hpade::root_clusters(hpade::ComplexPolynomial::from_roots(triple));
  res.record(clusters.size() == 1 && clusters[0].multiplicity == 3 ? 0.0 : 1.0, 0.5);
  const std::vector<cplx> mixed{cplx(-0.5, 0.0), cplx(-0.5, 0.0), cplx(2.0, 1.0), cplx(0.3, -1.2)};
  match(mixed, hpade::poly_roots(hpade::ComplexPolynomial::from_roots(mixed)), 1e-9);
  res.detail = "plant-and-recover to degree 8, repeated roots clustered";
  return res;
}

}  // namespace suites
