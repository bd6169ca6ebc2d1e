#include "hpade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hpade/errors.hpp"
#include "hpade/linalg.hpp"

namespace hpade {

namespace {

constexpr double kLevelSlack = 1e-9;
constexpr double kRankTol = 1e-9;
constexpr double kSameLocation = 1e-9;
constexpr double kMinSeparation = 1e-6;

using Row = std::vector<cplx>;

/// A place where combinations can fail to be analytic. For a pole, rows[s-1]
/// is the Laurent coefficient of order s; for a branch group, the rows force
/// the coefficient polynomial of the branch function to vanish.
struct Site {
  cplx location;
  double level = 0.0;
  std::vector<Row> rows;
};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); }

class Combinations {
 public:
  explicit Combinations(const SystemModel& sys) : sys_(sys) {
    for (const int m : sys.multi_index()) {
      offsets_.push_back(unknowns_);
      unknowns_ += static_cast<std::size_t>(m);
    }
    build_poles();
    build_groups();
  }

  std::size_t unknowns() const { return unknowns_; }
  const std::vector<Site>& poles() const { return poles_; }
  const std::vector<Site>& branch_groups() const { return groups_; }
  const std::vector<Site>& entire_groups() const { return entire_; }

 private:
  std::size_t column(std::size_t k, int l) const { return offsets_[k] + static_cast<std::size_t>(l); }

  void build_poles() {
    struct Gather {
      cplx location;
      std::vector<const std::vector<cplx>*> coeffs;  // per function, may be null
    };
    std::vector<Gather> gathered;
    const std::size_t d = sys_.dimension();
    for (std::size_t k = 0; k < d; ++k) {
      for (const PrincipalPart& pp : sys_.functions()[k].principal_parts()) {
        auto it = std::find_if(gathered.begin(), gathered.end(),
                               [&](const Gather& g) { return near(g.location, pp.location, kSameLocation); });
        if (it == gathered.end()) {
          for (const Gather& g : gathered)
            if (std::abs(g.location - pp.location) < kMinSeparation)
              throw UnsupportedFunctionError("distinct pole locations closer than 1e-6");
          gathered.push_back({pp.location, std::vector<const std::vector<cplx>*>(d, nullptr)});
          it = gathered.end() - 1;
        }
        it->coeffs[k] = &pp.coeffs;
      }
    }
    const cplx z0 = sys_.geometry().center();
    for (const Gather& g : gathered) {
      std::size_t max_order = 0;
      for (const auto* c : g.coeffs)
        if (c != nullptr) max_order = std::max(max_order, c->size());
      Site site{g.location, sys_.geometry().level(g.location), {}};
      const cplx shift = g.location - z0;
      for (std::size_t s = 1; s <= max_order; ++s) {
        Row row(unknowns_, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
          if (g.coeffs[k] == nullptr) continue;
          const std::vector<cplx>& a = *g.coeffs[k];
          // (z - z0)^l = sum_i binom(l, i) shift^{l-i} (z - loc)^i
          for (int l = 0; l < sys_.multi_index()[k]; ++l) {
            cplx acc = 0.0;
            for (int i = 0; i <= l; ++i) {
              const std::size_t r = s + static_cast<std::size_t>(i);
              if (r > a.size()) break;
              acc += binomial(l, i) * std::pow(shift, l - i) * a[r - 1];
            }
            row[column(k, l)] = acc;
          }
        }
        site.rows.push_back(std::move(row));
      }
      poles_.push_back(std::move(site));
    }
    std::sort(poles_.begin(), poles_.end(), [](const Site& a, const Site& b) {
      if (a.level != b.level) return a.level < b.level;
      if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
      return a.location.imag() < b.location.imag();
    });
  }

  void build_groups() {
    struct Gather {
      cplx location;
      int kind;  // 0 sqrt, 1 log, 2 exp
      std::vector<cplx> scale;
    };
    std::vector<Gather> gathered;
    const std::size_t d = sys_.dimension();
    auto add = [&](std::size_t k, cplx loc, int kind, cplx scale) {
      auto it = std::find_if(gathered.begin(), gathered.end(), [&](const Gather& g) {
        return g.kind == kind && (kind == 2 || near(g.location, loc, kSameLocation));
      });
      if (it == gathered.end()) {
        gathered.push_back({loc, kind, std::vector<cplx>(d, 0.0)});
        it = gathered.end() - 1;
      }
      it->scale[k] += scale;
    };
    for (std::size_t k = 0; k < d; ++k) {
      int branches = 0;
      for (const Term& t : sys_.functions()[k].terms()) {
        if (const auto* s = std::get_if<SqrtBranchTerm>(&t)) {
          ++branches;
          add(k, s->branch_at, 0, s->scale);
        } else if (const auto* l = std::get_if<LogBranchTerm>(&t)) {
          ++branches;
          add(k, l->branch_at, 1, l->scale);
        } else if (const auto* e = std::get_if<EntireExpTerm>(&t)) {
          add(k, 0.0, 2, e->scale);
        }
      }
      if (branches > 1) throw UnsupportedFunctionError("function has more than one branch term");
    }
    int top = 0;
    for (const int m : sys_.multi_index()) top = std::max(top, m);
    for (const Gather& g : gathered) {
      Site site{g.location, g.kind == 2 ? kInfinity : sys_.geometry().level(g.location), {}};
      for (int l = 0; l < top; ++l) {
        Row row(unknowns_, 0.0);
        bool any = false;
        for (std::size_t k = 0; k < d; ++k) {
          if (l < sys_.multi_index()[k] && g.scale[k] != 0.0) {
            row[column(k, l)] = g.scale[k];
            any = true;
          }
        }
        if (any) site.rows.push_back(std::move(row));
      }
      if (site.rows.empty()) continue;
      (g.kind == 2 ? entire_ : groups_).push_back(std::move(site));
    }
  }

  const SystemModel& sys_;
  std::vector<std::size_t> offsets_;
  std::size_t unknowns_ = 0;
  std::vector<Site> poles_;
  std::vector<Site> groups_;
  std::vector<Site> entire_;
};

std::size_t rank(const std::vector<Row>& rows) {
  ComplexMatrix m;
  for (const Row& r : rows) {
    double norm = 0.0;
    for (const cplx x : r) norm += std::norm(x);
    if (norm == 0.0) continue;
    Row unit = r;
    for (cplx& x : unit) x /= std::sqrt(norm);
    m.append_row(unit);
  }
  if (m.rows() == 0) return 0;
  return numerical_rank(m, kRankTol);
}

/// Can the functional `target` be nonzero on the kernel of `constraints`?
bool attainable(const std::vector<Row>& constraints, const Row& target) {
  std::vector<Row> extended = constraints;
  extended.push_back(target);
  return rank(extended) > rank(constraints);
}

void append_rows(std::vector<Row>& dst, const std::vector<Row>& src) { dst.insert(dst.end(), src.begin(), src.end()); }

/// Constraints for "analytic near the closed domain of index level(xi) except a
/// pole at xi of order at most s".
std::vector<Row> base_constraints(const Combinations& c, std::size_t xi, int s) {
  const Site& site = c.poles()[xi];
  std::vector<Row> out;
  for (std::size_t i = 0; i < c.poles().size(); ++i)
    if (i != xi && c.poles()[i].level <= site.level + kLevelSlack) append_rows(out, c.poles()[i].rows);
  for (const Site& g : c.branch_groups())
    if (g.level <= site.level + kLevelSlack) append_rows(out, g.rows);
  for (std::size_t o = static_cast<std::size_t>(s); o < site.rows.size(); ++o) out.push_back(site.rows[o]);
  return out;
}

/// Obstruction sites strictly beyond level(xi), grouped by level.
std::vector<std::pair<double, std::vector<const Site*>>> outer_levels(const Combinations& c, std::size_t xi) {
  const double base = c.poles()[xi].level;
  std::vector<const Site*> sites;
  for (std::size_t i = 0; i < c.poles().size(); ++i)
    if (i != xi && c.poles()[i].level > base + kLevelSlack) sites.push_back(&c.poles()[i]);
  for (const Site& g : c.branch_groups())
    if (g.level > base + kLevelSlack) sites.push_back(&g);
  std::stable_sort(sites.begin(), sites.end(), [](const Site* a, const Site* b) { return a->level < b->level; });
  std::vector<std::pair<double, std::vector<const Site*>>> out;
  for (const Site* s : sites) {
    if (!out.empty() && s->level <= out.back().first * (1.0 + kLevelSlack))
      out.back().second.push_back(s);
    else
      out.push_back({s->level, {s}});
  }
  return out;
}

}  // namespace

int SystemPoleSet::total_order() const {
  int s = 0;
  for (const SystemPole& p : poles) s += p.order;
  return s;
}

const SystemPole* SystemPoleSet::find(cplx z, double tol) const {
  for (const SystemPole& p : poles)
    if (near(p.location, z, tol)) return &p;
  return nullptr;
}

SystemPoleSet system_poles(const SystemModel& sys) {
  const Combinations c(sys);
  SystemPoleSet out;
  out.total_index = sys.total_index();
  std::vector<cplx> roots;
  for (std::size_t xi = 0; xi < c.poles().size(); ++xi) {
    const Site& site = c.poles()[xi];
    int tau = 0;
    for (int s = 1; s <= static_cast<int>(site.rows.size()); ++s) {
      if (!attainable(base_constraints(c, xi, s), site.rows[static_cast<std::size_t>(s - 1)])) break;
      tau = s;
    }
    if (tau == 0) continue;
    SystemPole p;
    p.location = site.location;
    p.order = tau;
    p.level = site.level;
    out.poles.push_back(p);
    roots.insert(roots.end(), static_cast<std::size_t>(tau), site.location);
  }
  if (out.total_order() > out.total_index)
    throw std::logic_error("system pole orders exceed |m|; the combination space is inconsistent");
  out.q_mf = ComplexPolynomial::from_roots(roots);
  return out;
}

SystemPoleSet r_values(SystemPoleSet sps, const SystemModel& sys) {
  const Combinations c(sys);
  for (SystemPole& p : sps.poles) {
    const auto it = std::find_if(c.poles().begin(), c.poles().end(),
                                 [&](const Site& s) { return near(s.location, p.location, kSameLocation); });
    if (it == c.poles().end()) throw InvalidModelError("pole set does not belong to this system");
    const auto xi = static_cast<std::size_t>(it - c.poles().begin());
    const auto levels = outer_levels(c, xi);
    p.rho.clear();
    p.R.clear();
    for (int s = 1; s <= p.order; ++s) {
      std::vector<Row> constraints = base_constraints(c, xi, s);
      const Row& target = it->rows[static_cast<std::size_t>(s - 1)];
      double rho = kInfinity;
      for (const auto& [level, sites] : levels) {
        for (const Site* site : sites) append_rows(constraints, site->rows);
        if (!attainable(constraints, target)) {
          rho = level;
          break;
        }
      }
      p.rho.push_back(rho);
      p.R.push_back(p.R.empty() ? rho : std::min(p.R.back(), rho));
    }
    p.R_xi = p.R.back();
  }

  sps.per_function.clear();
  for (const FunctionModel& f : sys.functions()) {
    std::vector<Singularity> sorted = f.singularities();
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Singularity& a, const Singularity& b) {
      return sys.geometry().level(a.location) < sys.geometry().level(b.location);
    });
    FunctionRates fr;
    for (const Singularity& s : sorted) {
      const SystemPole* sp = s.kind == SingularityKind::pole ? sps.find(s.location) : nullptr;
      if (sp == nullptr || sp->order < s.order) {
        fr.R_k = sys.geometry().level(s.location);
        break;
      }
    }
    fr.R_k_star = fr.R_k;
    for (const Singularity& s : sorted) {
      if (s.kind != SingularityKind::pole) continue;
      const double level = sys.geometry().level(s.location);
      if (!(level < fr.R_k * (1.0 - 1e-12))) continue;
      const SystemPole* sp = sps.find(s.location);
      fr.poles_in_Dk.push_back(s.location);
      fr.R_k_star = std::min(fr.R_k_star, sp->R[static_cast<std::size_t>(s.order - 1)]);
    }
    sps.per_function.push_back(std::move(fr));
  }
  return sps;
}

SystemPoleSet analyze_system(const SystemModel& sys) { return r_values(system_poles(sys), sys); }

double predicted_theta(const SystemPoleSet& sps, const GeometrySpec& g) {
  if (sps.total_order() < sps.total_index)
    throw IncompletePoleCountError("system has fewer system poles than |m|");
  double theta = 0.0;
  for (const SystemPole& p : sps.poles) {
    if (p.R.empty()) throw InvalidModelError("predicted_theta needs r_values");
    if (std::isfinite(p.R_xi)) theta = std::max(theta, g.level(p.location) / p.R_xi);
  }
  return theta;
}

bool polynomial_independence(const SystemModel& sys) {
  const Combinations c(sys);
  std::vector<Row> all;
  for (const Site& s : c.poles()) append_rows(all, s.rows);
  for (const Site& s : c.branch_groups()) append_rows(all, s.rows);
  for (const Site& s : c.entire_groups()) append_rows(all, s.rows);
  return rank(all) == c.unknowns();
}

}  // namespace hpade
