#include "hpade/mhp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hpade/errors.hpp"
#include "hpade/linalg.hpp"
#include "hpade/quadrature.hpp"
#include "hpade/roots.hpp"

namespace hpade {

namespace {

/// One function's share of the interpolation problem.
struct Block {
  const FunctionModel* f;
  int conditions;        // number of top Newton orders that must vanish
  int numerator_degree;  // degree bound of the numerator
};

/// Divided differences of z^col * f over the first j+1 nodes, j = 0..nodes-1.
struct DividedDifferences {
  std::size_t columns;
  std::vector<cplx> values;  // values[j * columns + col]
  std::size_t samples_used;
  double curve_level;

  cplx at(std::size_t j, std::size_t col) const { return values[j * columns + col]; }
  std::span<const cplx> row(std::size_t j) const { return {values.data() + j * columns, columns}; }
};

DividedDifferences divided_differences(const FunctionModel& f, const GeometrySpec& g, std::span<const cplx> nodes,
                                       std::size_t columns, const MhpOptions& opts) {
  const double level = safe_curve_level(rho_zero(f, g), opts.curve_exponent);
  if (!(level > 1.0 + 1e-6)) throw ConstructionError("no safe quadrature curve between E and the singularities");
  const LevelCurve curve(g, level, std::max(opts.min_samples, 2 * nodes.size()));
  const std::size_t rows = nodes.size();
  std::vector<cplx> powers(columns);
  const BatchQuadratureResult r = contour_integrals(
      rows * columns,
      [&](cplx t, std::span<cplx> out) {
        const cplx fv = f(t);
        powers[0] = 1.0;
        for (std::size_t c = 1; c < columns; ++c) powers[c] = powers[c - 1] * t;
        cplx inv = fv;
        for (std::size_t j = 0; j < rows; ++j) {
          inv /= (t - nodes[j]);
          for (std::size_t c = 0; c < columns; ++c) out[j * columns + c] = inv * powers[c];
        }
      },
      curve, opts.quadrature_rel_tol);
  DividedDifferences dd{columns, r.values, r.samples_used, level};
  const cplx scale = 1.0 / cplx(0.0, 2.0 * std::numbers::pi);
  for (cplx& v : dd.values) v *= scale;
  return dd;
}

std::vector<cplx> normalized(std::span<const cplx> row) {
  double top = 0.0;
  for (const cplx x : row) top = std::max(top, std::abs(x));
  std::vector<cplx> out(row.begin(), row.end());
  if (top > 0.0)
    for (cplx& x : out) x /= top;
  return out;
}

/// Newton-distance test: does p have a root within tol of z?
bool has_root_near(const ComplexPolynomial& p, cplx z, double tol) {
  if (p.is_zero()) return true;
  if (p.degree() < 1) return false;
  const cplx dp = p.derivative_at(z, 1);
  const double v = std::abs(p(z));
  if (v == 0.0) return true;
  if (std::abs(dp) == 0.0) return false;
  return p.degree() * v / std::abs(dp) <= tol;
}

MhpResult solve(const std::vector<Block>& blocks, const GeometrySpec& g, const NodeTable& table, int n, int degree,
                std::vector<int> multi_index, const MhpOptions& opts) {
  const std::vector<cplx> nodes = table.row(n + 1);
  const auto columns = static_cast<std::size_t>(degree) + 1;

  MhpResult res;
  res.n = n;
  res.multi_index = std::move(multi_index);

  std::vector<DividedDifferences> dds;
  ComplexMatrix system;
  ComplexMatrix augmented;
  for (const Block& b : blocks) {
    dds.push_back(divided_differences(*b.f, g, nodes, columns, opts));
    const DividedDifferences& dd = dds.back();
    res.curve_levels.push_back(dd.curve_level);
    res.samples_used = std::max(res.samples_used, dd.samples_used);
    // Newton order j (0-based row index j) uses j+1 nodes; orders n-c+1..n must vanish.
    for (int j = n - b.conditions + 1; j <= n; ++j) {
      const auto row = normalized(dd.row(static_cast<std::size_t>(j)));
      system.append_row(row);
      augmented.append_row(row);
    }
    const int extra = n - b.conditions;
    if (extra >= 0) augmented.append_row(normalized(dd.row(static_cast<std::size_t>(extra))));
  }

  const NullspaceResult ns = nullspace(system);
  res.residual = ns.sigma_min;
  const SvdResult diag = svd(augmented);
  res.sigma_min = diag.singular_values[0];
  res.sigma_gap = diag.singular_values.size() > 1 ? diag.singular_values[1] : 0.0;

  // Normalize the kernel vector.
  std::vector<cplx> v = ns.vector;
  double l1 = 0.0;
  for (const cplx x : v) l1 += std::abs(x);
  if (std::abs(v.back()) >= opts.monic_threshold) {
    const cplx lead = v.back();
    for (cplx& x : v) x /= lead;
    v.back() = 1.0;
    res.normalization = Normalization::monic;
  } else {
    std::size_t big = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[big])) big = i;
    const cplx phase = std::abs(v[big]) / v[big];
    for (cplx& x : v) x *= phase / l1;
    res.normalization = Normalization::unit_coefficient_sum;
    res.degenerate = true;
  }
  res.q = ComplexPolynomial(v);
  res.lambda_top = res.q.coeff(degree) / res.q.coefficient_norm();
  res.eval_denominator = res.q;

  // Numerators: truncated Newton interpolant of Q f_k on row n+1.
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    NewtonForm nf;
    const auto top = static_cast<std::size_t>(std::max(blocks[k].numerator_degree, -1) + 1);
    nf.nodes.assign(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(std::min(top, nodes.size())));
    nf.coeffs.assign(top, 0.0);
    for (std::size_t j = 0; j < top; ++j)
      for (std::size_t c = 0; c < columns; ++c) nf.coeffs[j] += v[c] * dds[k].at(j, c);
    res.numerators.push_back(nf.to_polynomial());
    res.newton_numerators.push_back(std::move(nf));
  }

  // Divide out roots shared by Q and every numerator.
  if (res.q.degree() >= 1) {
    for (const RootCluster& rc : root_clusters(res.q)) {
      for (int rep = 0; rep < rc.multiplicity; ++rep) {
        const double tol = opts.common_root_tol * (1.0 + std::abs(rc.location));
        const bool shared = std::all_of(res.numerators.begin(), res.numerators.end(),
                                        [&](const ComplexPolynomial& p) { return has_root_near(p, rc.location, tol); });
        if (!shared) break;
        res.q = res.q.deflate(rc.location);
        for (ComplexPolynomial& p : res.numerators) p = p.is_zero() ? p : p.deflate(rc.location);
        ++res.common_factors_removed;
      }
    }
    if (res.common_factors_removed > 0 && res.normalization == Normalization::unit_coefficient_sum)
      res.q *= 1.0 / res.q.coefficient_norm();
  }
  return res;
}

}  // namespace

cplx NewtonForm::operator()(cplx z) const {
  cplx acc = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) {
    acc = acc * (j < nodes.size() ? z - nodes[j] : cplx(1.0)) + coeffs[j];
  }
  return acc;
}

ComplexPolynomial NewtonForm::to_polynomial() const {
  ComplexPolynomial acc;
  for (std::size_t j = coeffs.size(); j-- > 0;) {
    acc = acc * ComplexPolynomial{-nodes[j], 1.0} + ComplexPolynomial{coeffs[j]};
  }
  return acc;
}

MhpResult compute_mhp(const SystemModel& sys, int n, const MhpOptions& opts) {
  const int total = sys.total_index();
  if (n < total) throw InvalidModelError("compute_mhp requires n >= |m|");
  std::vector<Block> blocks;
  for (std::size_t k = 0; k < sys.dimension(); ++k) {
    const int mk = sys.multi_index()[k];
    blocks.push_back({&sys.functions()[k], mk, n - mk});
  }
  return solve(blocks, sys.geometry(), sys.table(), n, total, sys.multi_index(), opts);
}

MhpResult compute_incomplete(const FunctionModel& f, const NodeTable& table, int n, int m, int m_star,
                             const MhpOptions& opts) {
  if (!(m >= m_star && m_star >= 1)) throw InvalidModelError("incomplete approximant requires m >= m_star >= 1");
  if (n < m) throw InvalidModelError("incomplete approximant requires n >= m");
  const FunctionModel oriented = f.with_cuts_away_from(table.geometry().center());
  for (const Singularity& s : oriented.singularities())
    if (!(table.geometry().level(s.location) > 1.0 + 1e-12))
      throw InvalidModelError("function singularity lies on or inside E");
  std::vector<Block> blocks{{&oriented, m, n - m_star}};
  return solve(blocks, table.geometry(), table, n, m, {m}, opts);
}

cplx approximant_eval(const MhpResult& r, std::size_t k, cplx z) {
  if (k >= r.newton_numerators.size()) throw InvalidModelError("approximant index out of range");
  const cplx q = r.eval_denominator(z);
  if (std::abs(q) <= 1e-13 * r.eval_denominator.l2_norm()) throw NearPoleError("approximant evaluated at a pole");
  return r.newton_numerators[k](z) / q;
}

}  // namespace hpade
