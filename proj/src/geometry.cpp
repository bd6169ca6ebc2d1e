#include "hpade/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hpade/errors.hpp"

namespace hpade {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t sample_count(std::size_t min_samples) {
  std::size_t n = LevelCurve::kBaseSamples;
  while (n < min_samples) n *= 2;
  return n;
}

}  // namespace

GeometrySpec::GeometrySpec(Shape shape, cplx center, double c, cplx delta)
    : shape_(shape), center_(center), c_(c), delta_(delta) {}

GeometrySpec GeometrySpec::disk(cplx center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidModelError("disk radius must be positive");
  return GeometrySpec(Disk{center, radius}, center, radius, 0.0);
}

GeometrySpec GeometrySpec::segment(cplx a, cplx b) {
  if (a == b) throw InvalidModelError("segment endpoints must be distinct");
  const cplx h = 0.5 * (b - a);
  const double c = 0.5 * std::abs(h);
  const cplx dir = h / std::abs(h);
  return GeometrySpec(Segment{a, b}, 0.5 * (a + b), c, c * dir * dir);
}

GeometrySpec GeometrySpec::ellipse(cplx center, double semi_major, double semi_minor, double rotation) {
  if (!(semi_minor > 0.0) || !(semi_major >= semi_minor))
    throw InvalidModelError("ellipse requires semi_major >= semi_minor > 0");
  const double c = 0.5 * (semi_major + semi_minor);
  const double d = 0.5 * (semi_major - semi_minor);
  return GeometrySpec(Ellipse{center, semi_major, semi_minor, rotation}, center, c,
                      d * std::polar(1.0, 2.0 * rotation));
}

cplx GeometrySpec::larger_root(cplx z) const {
  // Roots of c w^2 - u w + delta; pick the sign that avoids cancellation.
  const cplx u = z - center_;
  const cplx disc = std::sqrt(u * u - 4.0 * c_ * delta_);
  const cplx plus = u + disc;
  const cplx minus = u - disc;
  return (std::abs(plus) >= std::abs(minus) ? plus : minus) / (2.0 * c_);
}

cplx GeometrySpec::phi(cplx z) const {
  const cplx w = larger_root(z);
  if (std::abs(w) < 1.0 - 1e-12) throw PointInsideSetError("phi: point lies inside E");
  return w;
}

cplx GeometrySpec::psi(cplx w) const {
  if (!(std::abs(w) > 1.0)) throw InsideUnitDiskError("psi: |w| must exceed 1");
  return center_ + c_ * w + delta_ / w;
}

cplx GeometrySpec::psi_derivative(cplx w) const { return c_ - delta_ / (w * w); }

double GeometrySpec::level(cplx z) const { return std::max(1.0, std::abs(larger_root(z))); }

bool GeometrySpec::contains(cplx z, double tol) const { return std::abs(larger_root(z)) <= 1.0 + tol; }

LevelCurve::LevelCurve(const GeometrySpec& g, double rho, std::size_t min_samples) : geometry_(g), rho_(rho) {
  if (!(rho > 1.0)) throw InvalidModelError("level curve index must exceed 1");
  const std::size_t n = sample_count(min_samples);
  points_.resize(n);
  tangents_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx w = std::polar(rho, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    points_[j] = g.psi(w);
    tangents_[j] = g.psi_derivative(w) * cplx(0.0, 1.0) * w;
  }
}

LevelCurve::LevelCurve(const GeometrySpec& g, double rho, std::vector<cplx> points, std::vector<cplx> tangents)
    : geometry_(g), rho_(rho), points_(std::move(points)), tangents_(std::move(tangents)) {}

LevelCurve LevelCurve::refined() const {
  const std::size_t n = 2 * points_.size();
  std::vector<cplx> pts(n);
  std::vector<cplx> tan(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j % 2 == 0) {
      pts[j] = points_[j / 2];
      tan[j] = tangents_[j / 2];
      continue;
    }
    const cplx w = std::polar(rho_, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    pts[j] = geometry_.psi(w);
    tan[j] = geometry_.psi_derivative(w) * cplx(0.0, 1.0) * w;
  }
  return LevelCurve(geometry_, rho_, std::move(pts), std::move(tan));
}

LevelCurve level_curve(const GeometrySpec& g, double rho, std::size_t min_samples) {
  return LevelCurve(g, rho, min_samples);
}

NodeTable::NodeTable(GeometrySpec g, Scheme scheme) : geometry_(g), scheme_(scheme) {
  const bool is_disk = std::holds_alternative<Disk>(g.shape());
  if (const auto* rp = std::get_if<RepeatedPoint>(&scheme_)) {
    // a_n = (z-p)^n only has a nonzero limit against (c phi)^n at the disk centre.
    if (!is_disk) throw InvalidModelError("repeated_point table requires a disk geometry");
    const Disk& d = std::get<Disk>(g.shape());
    if (std::abs(rp->point - d.center) > 1e-14 * d.radius)
      throw InvalidModelError("repeated_point table must use the disk centre");
  } else if (std::holds_alternative<ChebyshevNodes>(scheme_)) {
    // On an ellipse the Chebyshev zeros of the focal segment give the same limit G = 1.
    const auto* e = std::get_if<Ellipse>(&g.shape());
    const bool focal = e != nullptr && e->semi_major > e->semi_minor * (1.0 + 1e-12);
    if (!std::holds_alternative<Segment>(g.shape()) && !focal)
      throw InvalidModelError("chebyshev table requires a segment or a non-circular ellipse");
  } else if (!is_disk) {
    throw InvalidModelError("fejer table requires a disk");
  }
}

std::vector<cplx> NodeTable::row(int n) const {
  if (n < 1) throw InvalidModelError("node row index must be >= 1");
  const auto count = static_cast<std::size_t>(n);
  std::vector<cplx> out(count);
  if (const auto* rp = std::get_if<RepeatedPoint>(&scheme_)) {
    std::fill(out.begin(), out.end(), rp->point);
  } else if (std::holds_alternative<ChebyshevNodes>(scheme_)) {
    cplx mid;
    cplx half;
    if (const auto* s = std::get_if<Segment>(&geometry_.shape())) {
      mid = 0.5 * (s->a + s->b);
      half = 0.5 * (s->b - s->a);
    } else {
      const Ellipse& e = std::get<Ellipse>(geometry_.shape());
      mid = e.center;
      half = std::polar(std::sqrt(e.semi_major * e.semi_major - e.semi_minor * e.semi_minor), e.rotation);
    }
    for (std::size_t k = 0; k < count; ++k) {
      const double x = std::cos(std::numbers::pi * (2.0 * static_cast<double>(k) + 1.0) / (2.0 * n));
      out[k] = mid + half * x;
    }
  } else {
    const Disk& d = std::get<Disk>(geometry_.shape());
    for (std::size_t k = 0; k < count; ++k)
      out[k] = d.center + std::polar(d.radius, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  }
  return out;
}

NodeRow NodeTable::nodes(int n) const {
  NodeRow r;
  r.nodes = row(n);
  r.a = ComplexPolynomial::from_roots(r.nodes);
  return r;
}

}  // namespace hpade
