#include "hpade/functions.hpp"

#include <algorithm>
#include <cmath>

#include "hpade/errors.hpp"
#include "hpade/roots.hpp"

namespace hpade {

namespace {

constexpr double kPoleDistance = 1e-12;
constexpr double kMergeTol = 1e-12;
constexpr double kCancelTol = 1e-13;

bool same_location(cplx a, cplx b) { return std::abs(a - b) <= kMergeTol * (1.0 + std::abs(a)); }

/// Truncated power-series product, keeping terms below `len`.
std::vector<cplx> series_mul(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t len) {
  std::vector<cplx> out(len, 0.0);
  for (std::size_t i = 0; i < std::min(len, a.size()); ++i)
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<PrincipalPart> rational_principal_parts(const RationalTerm& r) {
  std::vector<RootCluster> distinct;
  for (const cplx p : r.poles) {
    auto it = std::find_if(distinct.begin(), distinct.end(), [&](const RootCluster& c) { return c.location == p; });
    if (it == distinct.end())
      distinct.push_back({p, 1});
    else
      ++it->multiplicity;
  }
  std::vector<PrincipalPart> out;
  const cplx lead = r.denominator.leading();
  for (const RootCluster& xi : distinct) {
    const auto mu = static_cast<std::size_t>(xi.multiplicity);
    // Taylor coefficients at xi of numerator / (lead * prod_{other} (z - r)^mult).
    const ComplexPolynomial shifted = r.numerator.taylor_shift(xi.location);
    std::vector<cplx> h(mu, 0.0);
    for (std::size_t k = 0; k < mu; ++k) h[k] = shifted.coeff(static_cast<int>(k)) / lead;
    for (const RootCluster& other : distinct) {
      if (other.location == xi.location) continue;
      const cplx a = xi.location - other.location;  // 1/(t + a) = sum (-1)^k t^k / a^{k+1}
      std::vector<cplx> inv(mu);
      cplx pw = 1.0 / a;
      for (std::size_t k = 0; k < mu; ++k) {
        inv[k] = pw;
        pw *= -1.0 / a;
      }
      for (int rep = 0; rep < other.multiplicity; ++rep) h = series_mul(h, inv, mu);
    }
    PrincipalPart pp{xi.location, std::vector<cplx>(mu)};
    for (std::size_t j = 0; j < mu; ++j) pp.coeffs[mu - 1 - j] = h[j];
    out.push_back(std::move(pp));
  }
  return out;
}

cplx branch_argument(cplx branch_at, cplx dir, cplx z) {
  const cplx diff = branch_at - z;
  if (std::abs(diff) < kPoleDistance) throw EvaluationError("evaluation at a branch point");
  const cplx zeta = diff / dir;
  if (zeta.real() <= 0.0 && std::abs(zeta.imag()) <= 1e-14 * std::abs(zeta))
    throw EvaluationError("evaluation on a branch cut");
  return zeta;
}

cplx evaluate_term(const Term& term, cplx z) {
  return std::visit(
      [z](const auto& t) -> cplx {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, RationalTerm>) {
          cplx den = t.denominator.leading();
          for (const cplx p : t.poles) {
            const cplx d = z - p;
            if (std::abs(d) < kPoleDistance) throw EvaluationError("evaluation at a pole");
            den *= d;
          }
          return t.numerator(z) / den;
        } else if constexpr (std::is_same_v<T, SqrtBranchTerm>) {
          return t.scale * std::sqrt(t.cut_direction) * std::sqrt(branch_argument(t.branch_at, t.cut_direction, z));
        } else if constexpr (std::is_same_v<T, LogBranchTerm>) {
          return t.scale * (std::log(t.cut_direction) + std::log(branch_argument(t.branch_at, t.cut_direction, z)));
        } else {
          return t.scale * std::exp(z);
        }
      },
      term);
}

}  // namespace

RationalTerm::RationalTerm(ComplexPolynomial num, ComplexPolynomial den)
    : numerator(std::move(num)), denominator(std::move(den)) {
  if (denominator.is_zero()) throw InvalidModelError("rational term with zero denominator");
  if (denominator.degree() >= 1) poles = poly_roots(denominator);
}

RationalTerm RationalTerm::from_poles(ComplexPolynomial num, std::vector<cplx> pole_list, cplx lead) {
  RationalTerm t(std::move(num), ComplexPolynomial{lead});
  t.denominator = ComplexPolynomial::from_roots(pole_list, lead);
  t.poles = std::move(pole_list);
  return t;
}

FunctionModel::FunctionModel(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw InvalidModelError("function needs at least one term");

  // Merge principal parts of all rational terms that share a location.
  std::vector<PrincipalPart> merged;
  std::vector<double> scale;
  for (const Term& term : terms_) {
    const auto* r = std::get_if<RationalTerm>(&term);
    if (r == nullptr) continue;
    for (PrincipalPart& pp : rational_principal_parts(*r)) {
      double s = 0.0;
      for (const cplx c : pp.coeffs) s = std::max(s, std::abs(c));
      auto it = std::find_if(merged.begin(), merged.end(),
                             [&](const PrincipalPart& m) { return same_location(m.location, pp.location); });
      if (it == merged.end()) {
        merged.push_back(std::move(pp));
        scale.push_back(s);
        continue;
      }
      const auto idx = static_cast<std::size_t>(it - merged.begin());
      if (pp.coeffs.size() > it->coeffs.size()) it->coeffs.resize(pp.coeffs.size(), 0.0);
      for (std::size_t k = 0; k < pp.coeffs.size(); ++k) it->coeffs[k] += pp.coeffs[k];
      scale[idx] = std::max(scale[idx], s);
    }
  }
  // A numerator root that cancels a pole leaves a principal part at rounding
  // level relative to the whole function, not only to its own term.
  const double global = scale.empty() ? 0.0 : *std::max_element(scale.begin(), scale.end());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    auto& c = merged[i].coeffs;
    const double tol = kCancelTol * std::max(scale[i], global);
    while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
    if (c.empty()) continue;
    principal_parts_.push_back(merged[i]);
    singularities_.push_back({merged[i].location, SingularityKind::pole, static_cast<int>(c.size())});
  }
  for (const Term& term : terms_) {
    if (const auto* s = std::get_if<SqrtBranchTerm>(&term))
      singularities_.push_back({s->branch_at, SingularityKind::branch_point, 0});
    else if (const auto* l = std::get_if<LogBranchTerm>(&term))
      singularities_.push_back({l->branch_at, SingularityKind::logarithmic, 0});
  }
}

cplx FunctionModel::operator()(cplx z) const {
  cplx sum = 0.0;
  for (const Term& t : terms_) sum += evaluate_term(t, z);
  return sum;
}

FunctionModel FunctionModel::with_cuts_away_from(cplx center) const {
  std::vector<Term> terms = terms_;
  for (Term& t : terms) {
    auto orient = [&](auto& branch) {
      const cplx d = branch.branch_at - center;
      if (std::abs(d) > 0.0) branch.cut_direction = d / std::abs(d);
    };
    if (auto* s = std::get_if<SqrtBranchTerm>(&t)) orient(*s);
    if (auto* l = std::get_if<LogBranchTerm>(&t)) orient(*l);
  }
  return FunctionModel(std::move(terms));
}

FunctionModel FunctionModel::scaled(cplx s) const {
  std::vector<Term> terms = terms_;
  for (Term& t : terms) {
    std::visit(
        [s](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, RationalTerm>)
            x.numerator *= s;
          else
            x.scale *= s;
        },
        t);
  }
  return FunctionModel(std::move(terms));
}

SystemModel::SystemModel(std::vector<FunctionModel> functions, std::vector<int> multi_index, GeometrySpec geometry,
                         NodeTable table)
    : multi_index_(std::move(multi_index)), geometry_(geometry), table_(std::move(table)) {
  if (functions.empty()) throw InvalidModelError("system needs at least one function");
  if (functions.size() != multi_index_.size()) throw InvalidModelError("multi_index length must equal function count");
  for (const int m : multi_index_)
    if (m < 1) throw InvalidModelError("multi_index entries must be >= 1");
  const GeometrySpec& tg = table_.geometry();
  if (tg.center() != geometry_.center() || tg.capacity_constant() != geometry_.capacity_constant())
    throw InvalidModelError("node table belongs to a different geometry");
  functions_.reserve(functions.size());
  for (const FunctionModel& f : functions) {
    for (const Singularity& s : f.singularities())
      if (!(geometry_.level(s.location) > 1.0 + 1e-12))
        throw InvalidModelError("function singularity lies on or inside E");
    functions_.push_back(f.with_cuts_away_from(geometry_.center()));
  }
}

int SystemModel::total_index() const {
  int s = 0;
  for (const int m : multi_index_) s += m;
  return s;
}

double rho_zero(const FunctionModel& f, const GeometrySpec& g) {
  double best = kInfinity;
  for (const Singularity& s : f.singularities()) best = std::min(best, g.level(s.location));
  return best;
}

double rho_meromorphy(const FunctionModel& f, const GeometrySpec& g, int s) {
  std::vector<std::pair<double, const Singularity*>> sorted;
  for (const Singularity& sing : f.singularities()) sorted.emplace_back(g.level(sing.location), &sing);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  int count = 0;
  for (const auto& [lvl, sing] : sorted) {
    if (sing->kind != SingularityKind::pole) return lvl;
    if (count + sing->order > s) return lvl;
    count += sing->order;
  }
  return kInfinity;
}

}  // namespace hpade
