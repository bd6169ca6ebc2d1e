#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hpade/errors.hpp"
#include "hpade/geometry.hpp"

using namespace hpade;

namespace {

std::vector<GeometrySpec> shapes() {
  return {GeometrySpec::disk(0.0, 0.5), GeometrySpec::disk(cplx(0.2, -0.3), 1.7), GeometrySpec::segment(-1.0, 1.0),
          GeometrySpec::segment(cplx(0.5, 0.5), cplx(-1.0, 2.0)), GeometrySpec::ellipse(0.0, 1.0, 0.5),
          GeometrySpec::ellipse(cplx(1.0, -1.0), 2.0, 0.7, 0.9)};
}

/// Winding number of a closed polygon around z.
double winding(const std::vector<cplx>& pts, cplx z) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) total += std::arg((pts[(i + 1) % pts.size()] - z) / (pts[i] - z));
  return total / (2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("phi and psi closed forms") {
  const auto disk = GeometrySpec::disk(0.0, 0.5);
  const auto seg = GeometrySpec::segment(-1.0, 1.0);
  CHECK(std::abs(disk.phi(1.0) - 2.0) < 1e-15);
  CHECK(std::abs(seg.phi(1.25) - 2.0) < 1e-15);
  CHECK(std::abs(seg.phi(cplx(0.0, 0.75)) - cplx(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(disk.psi(2.0) - 1.0) < 1e-15);
  CHECK(std::abs(seg.psi(2.0) - 1.25) < 1e-15);
  CHECK_THROWS_AS(disk.phi(0.1), PointInsideSetError);
  CHECK_THROWS_AS(seg.psi(0.5), InsideUnitDiskError);
  CHECK(std::abs(std::abs(seg.phi(0.3)) - 1.0) < 1e-12);
}

TEST_CASE("capacity constants") {
  CHECK(GeometrySpec::disk(0.0, 0.5).capacity_constant() == doctest::Approx(0.5));
  CHECK(GeometrySpec::segment(-1.0, 1.0).capacity_constant() == doctest::Approx(0.5));
  CHECK(GeometrySpec::ellipse(0.0, 1.0, 0.5).capacity_constant() == doctest::Approx(0.75));
}

TEST_CASE("psi inverts phi at random exterior points") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> r(1.01, 6.0), a(0.0, 2.0 * std::numbers::pi);
  for (const auto& g : shapes()) {
    for (int i = 0; i < 100; ++i) {
      const cplx z = g.psi(std::polar(r(rng), a(rng)));
      CHECK(std::abs(g.psi(g.phi(z)) - z) <= 1e-12 * std::abs(z));
    }
  }
}

TEST_CASE("phi behaves like z/c at infinity") {
  for (const auto& g : shapes()) {
    const cplx z(1e7, 3e6);
    const cplx ratio = g.phi(z) * g.capacity_constant() / z;
    CHECK(std::abs(ratio - 1.0) < 1e-6);
  }
}

TEST_CASE("level is monotone across nested level curves") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> r(1.05, 5.0), a(0.0, 2.0 * std::numbers::pi);
  for (const auto& g : shapes()) {
    for (int i = 0; i < 50; ++i) {
      const double r1 = r(rng), r2 = r(rng);
      const double t = a(rng);
      const cplx z1 = g.psi(std::polar(std::min(r1, r2), t));
      const cplx z2 = g.psi(std::polar(std::max(r1, r2) + 1e-3, a(rng)));
      CHECK(g.level(z1) < g.level(z2));
    }
    CHECK(g.level(g.center()) == 1.0);
    CHECK(g.contains(g.center()));
  }
}

TEST_CASE("level curves: samples, winding and nesting") {
  const LevelCurve circle(GeometrySpec::disk(0.0, 0.5), 2.0, 4);
  REQUIRE(circle.size() == LevelCurve::kBaseSamples);
  const LevelCurve four = level_curve(GeometrySpec::disk(0.0, 0.5), 2.0, 4);
  for (std::size_t j = 0; j < four.size(); ++j) CHECK(std::abs(std::abs(four.samples()[j]) - 1.0) < 1e-15);
  // every fourth sample of 16 lands on 1, i, -1, -i
  const std::vector<cplx> quarter{1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(four.samples()[4 * k] - quarter[k]) < 1e-15);

  const LevelCurve seg(GeometrySpec::segment(-1.0, 1.0), 2.0, 64);
  for (const cplx z : seg.samples()) {
    cplx s = std::sqrt(z * z - 1.0);
    if (std::abs(z + s) < 1.0) s = -s;
    CHECK(std::abs(std::abs(z + s) - 2.0) < 1e-10);
  }

  for (const auto& g : shapes()) {
    const LevelCurve inner(g, 1.3, 128), outer(g, 2.1, 128);
    CHECK(winding(inner.samples(), g.center()) == doctest::Approx(1.0));
    for (const cplx z : inner.samples()) CHECK(winding(outer.samples(), z) == doctest::Approx(1.0));
    const LevelCurve finer = inner.refined();
    REQUIRE(finer.size() == 2 * inner.size());
    for (std::size_t j = 0; j < inner.size(); ++j) CHECK(finer.samples()[2 * j] == inner.samples()[j]);
  }
  CHECK_THROWS_AS(LevelCurve(GeometrySpec::disk(0.0, 1.0), 1.0), InvalidModelError);
}

TEST_CASE("tangents match the derivative of the parametrization") {
  for (const auto& g : shapes()) {
    const LevelCurve c(g, 1.7, 64);
    const double h = 1e-6;
    for (std::size_t j = 0; j < c.size(); j += 7) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(c.size());
      const cplx fd = (g.psi(std::polar(1.7, theta + h)) - g.psi(std::polar(1.7, theta - h))) / (2.0 * h);
      CHECK(std::abs(fd - c.tangents()[j]) < 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("node table rows") {
  const auto disk = GeometrySpec::disk(0.0, 0.5);
  const NodeRow rep = NodeTable(disk, RepeatedPoint{0.0}).nodes(3);
  CHECK(rep.nodes == std::vector<cplx>(3, 0.0));
  CHECK(rep.a == ComplexPolynomial::monomial(3));

  const NodeRow cheb = NodeTable(GeometrySpec::segment(-1.0, 1.0), ChebyshevNodes{}).nodes(2);
  REQUIRE(cheb.nodes.size() == 2);
  CHECK(coefficient_distance(cheb.a, ComplexPolynomial{-0.5, 0.0, 1.0}) < 1e-15);

  const NodeRow fejer = NodeTable(disk, FejerNodes{}).nodes(4);
  CHECK(coefficient_distance(fejer.a, ComplexPolynomial{-std::pow(0.5, 4), 0.0, 0.0, 0.0, 1.0}) < 1e-15);

  CHECK_THROWS_AS(NodeTable(disk, RepeatedPoint{0.1}), InvalidModelError);
  CHECK_THROWS_AS(NodeTable(disk, ChebyshevNodes{}), InvalidModelError);
  CHECK_THROWS_AS(NodeTable(GeometrySpec::segment(-1.0, 1.0), FejerNodes{}), InvalidModelError);
  CHECK_THROWS_AS(NodeTable(GeometrySpec::ellipse(0.0, 1.0, 1.0), ChebyshevNodes{}), InvalidModelError);
}

TEST_CASE("a_n / (c phi)^n settles to a nonzero limit outside E") {
  const std::vector<NodeTable> tables{
      NodeTable(GeometrySpec::disk(0.0, 0.5), RepeatedPoint{0.0}),
      NodeTable(GeometrySpec::disk(cplx(0.2, 0.1), 1.0), FejerNodes{}),
      NodeTable(GeometrySpec::segment(-1.0, 1.0), ChebyshevNodes{}),
      NodeTable(GeometrySpec::ellipse(cplx(0.3, 0.0), 1.0, 0.6, 0.4), ChebyshevNodes{})};
  for (const NodeTable& t : tables) {
    const GeometrySpec& g = t.geometry();
    for (const double rho : {1.6, 2.5}) {
      for (int j = 0; j < 8; ++j) {
        const cplx z = g.psi(std::polar(rho, 0.3 + j * std::numbers::pi / 4.0));
        const cplx cphi = g.capacity_constant() * g.phi(z);
        std::vector<cplx> ratio;
        for (int n = 20; n <= 60; ++n) {
          cplx v = 1.0;
          for (const cplx x : t.row(n)) v *= (z - x) / cphi;
          ratio.push_back(v);
        }
        double first = 0.0, last = 0.0;
        for (int i = 0; i < 5; ++i) first = std::max(first, std::abs(ratio[i + 1] - ratio[i]));
        for (std::size_t i = ratio.size() - 6; i + 1 < ratio.size(); ++i)
          last = std::max(last, std::abs(ratio[i + 1] - ratio[i]));
        CHECK(last <= first + 1e-14);
        CHECK(last < 1e-6);
        CHECK(std::abs(ratio.back()) > 1e-6);
      }
    }
  }
}
