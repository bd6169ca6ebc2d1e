#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "hpade/polynomial.hpp"

namespace hpade {

struct Disk {
  cplx center;
  double radius;
};

struct Segment {
  cplx a;
  cplx b;
};

struct Ellipse {
  cplx center;
  double semi_major;
  double semi_minor;
  double rotation;  ///< angle of the major axis, radians
};

/// Compact set E with its exterior conformal map.
///
/// All three shapes share the exterior inverse map psi(w) = center + c*w + delta/w
/// with |delta| <= c: delta = 0 for a disk, delta = c*e^{2i*arg(b-a)} for a segment
/// and delta = (A-B)/2 * e^{2i*rotation} for an ellipse with semi-axes A >= B.
/// phi is the root of c*w^2 - (z-center)*w + delta = 0 of larger modulus, which
/// makes phi(z)/z -> 1/c > 0 at infinity.
class GeometrySpec {
 public:
  using Shape = std::variant<Disk, Segment, Ellipse>;

  static GeometrySpec disk(cplx center, double radius);
  static GeometrySpec segment(cplx a, cplx b);
  static GeometrySpec ellipse(cplx center, double semi_major, double semi_minor, double rotation = 0.0);

  const Shape& shape() const { return shape_; }
  cplx center() const { return center_; }
  /// Constant c with phi(z) ~ z/c at infinity (logarithmic capacity of E).
  double capacity_constant() const { return c_; }

  /// Exterior map. Throws PointInsideSetError for interior points; boundary
  /// points are accepted and map to the unit circle.
  cplx phi(cplx z) const;
  /// Inverse exterior map, defined for |w| > 1.
  cplx psi(cplx w) const;
  cplx psi_derivative(cplx w) const;

  /// max(1, |phi(z)|); points of E have level 1. Never throws.
  double level(cplx z) const;
  /// True when z lies in E up to a relative tolerance on the level.
  bool contains(cplx z, double tol = 1e-12) const;

 private:
  GeometrySpec(Shape shape, cplx center, double c, cplx delta);
  cplx larger_root(cplx z) const;

  Shape shape_;
  cplx center_;
  double c_;
  cplx delta_;
};

/// Positively oriented samples of the level curve |phi(z)| = rho.
///
/// The sample count is kBaseSamples * 2^k, so refined() can double it while
/// reusing every existing sample.
class LevelCurve {
 public:
  static constexpr std::size_t kBaseSamples = 16;

  LevelCurve(const GeometrySpec& g, double rho, std::size_t min_samples = kBaseSamples);

  double rho() const { return rho_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<cplx>& samples() const { return points_; }
  /// dz/dtheta at each sample.
  const std::vector<cplx>& tangents() const { return tangents_; }
  const GeometrySpec& geometry() const { return geometry_; }

  /// Same curve with twice the samples; even-indexed samples are the current ones.
  LevelCurve refined() const;

 private:
  LevelCurve(const GeometrySpec& g, double rho, std::vector<cplx> points, std::vector<cplx> tangents);

  GeometrySpec geometry_;
  double rho_;
  std::vector<cplx> points_;
  std::vector<cplx> tangents_;
};

LevelCurve level_curve(const GeometrySpec& g, double rho, std::size_t min_samples);

struct RepeatedPoint {
  cplx point;
};
struct ChebyshevNodes {};
struct FejerNodes {};

/// Row n of the table together with a_n(z) = prod (z - node).
struct NodeRow {
  std::vector<cplx> nodes;
  ComplexPolynomial a;
};

/// Interpolation table whose rows satisfy a_n / (c phi)^n -> G != 0 outside E.
///
/// Only schemes with a closed-form limit G (here G = 1) are accepted:
/// the disk centre repeated, Chebyshev zeros on a segment (or on the focal
/// segment of a non-circular ellipse), Fejer points on a disk.
class NodeTable {
 public:
  using Scheme = std::variant<RepeatedPoint, ChebyshevNodes, FejerNodes>;

  NodeTable(GeometrySpec g, Scheme scheme);

  const GeometrySpec& geometry() const { return geometry_; }
  const Scheme& scheme() const { return scheme_; }

  std::vector<cplx> row(int n) const;
  NodeRow nodes(int n) const;

 private:
  GeometrySpec geometry_;
  Scheme scheme_;
};

}  // namespace hpade
