#include "hpade/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "hpade/errors.hpp"
#include "hpade/quadrature.hpp"
#include "hpade/roots.hpp"

namespace hpade {

namespace {

using Point = std::pair<int, double>;

RateFit least_squares(const std::vector<Point>& pts) {
  const double m = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, v] : pts) {
    sx += n;
    sy += std::log(v);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, v] : pts) {
    sxx += (n - mx) * (n - mx);
    sxy += (n - mx) * (std::log(v) - my);
  }
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.rate = std::exp(f.slope);
  double ss = 0.0;
  for (const auto& [n, v] : pts) {
    const double r = std::log(v) - (f.intercept + f.slope * n);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / m);
  f.n_lo = pts.front().first;
  f.n_hi = pts.back().first;
  f.points = pts.size();
  return f;
}

std::vector<Point> valid_points(const std::vector<int>& ns, const std::vector<double>& values, const FitOptions& opts) {
  if (ns.size() != values.size()) throw InvalidModelError("fit: n and value sequences differ in length");
  std::vector<Point> pts;
  for (std::size_t i = static_cast<std::size_t>(std::max(opts.transient, 0)); i < ns.size(); ++i)
    if (std::isfinite(values[i]) && values[i] > opts.noise_floor) pts.emplace_back(ns[i], values[i]);
  return pts;
}

bool is_exact(const std::vector<int>& ns, const std::vector<double>& values, const FitOptions& opts) {
  const auto start = static_cast<std::size_t>(std::max(opts.transient, 0));
  if (start >= ns.size()) return false;
  return std::all_of(values.begin() + static_cast<std::ptrdiff_t>(start), values.end(),
                     [&](double v) { return v <= opts.exact_threshold; });
}

template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += workers) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<MhpResult> compute_range(const SystemModel& sys, int n_lo, int n_hi, const MhpOptions& opts) {
  if (n_hi < n_lo) throw InvalidModelError("n range is empty");
  if (n_lo < sys.total_index()) throw InvalidModelError("n_lo must be >= |m|");
  std::vector<MhpResult> out(static_cast<std::size_t>(n_hi - n_lo + 1));
  parallel_for(out.size(), [&](std::size_t i) { out[i] = compute_mhp(sys, n_lo + static_cast<int>(i), opts); });
  return out;
}

std::vector<cplx> roots_of(const ComplexPolynomial& q) { return q.degree() >= 1 ? poly_roots(q) : std::vector<cplx>{}; }

ConvergenceReport assemble(std::vector<MhpResult> results, const ComplexPolynomial& q_ref, bool self_ref,
                           const std::vector<int>& multi_index, const FitOptions& fit) {
  ConvergenceReport rep;
  rep.multi_index = multi_index;
  rep.q_ref = q_ref;
  rep.self_reference = self_ref;
  std::vector<std::vector<cplx>> roots;
  for (const MhpResult& r : results) {
    rep.n_range.push_back(r.n);
    rep.q_errors.push_back(coefficient_distance(r.q.monic(), q_ref));
    rep.sigma_history.emplace_back(r.sigma_min, r.sigma_gap);
    roots.push_back(roots_of(r.q));
  }
  rep.pole_tracks = track_roots(rep.n_range, roots, roots_of(q_ref), fit.transient);
  for (const PoleTrack& t : rep.pole_tracks) rep.max_dispersion = std::max(rep.max_dispersion, t.dispersion);
  rep.converged = rep.max_dispersion <= kDispersionLimit;
  try {
    rep.fit = fit_geometric_rate(rep.n_range, rep.q_errors, fit);
    rep.fitted_theta = rep.fit->rate;
  } catch (const FitWindowError&) {
    rep.fit.reset();
  }
  rep.results = std::move(results);
  return rep;
}

}  // namespace

RateFit fit_geometric_rate(const std::vector<int>& ns, const std::vector<double>& values, const FitOptions& opts) {
  if (is_exact(ns, values, opts)) {
    RateFit f;
    f.exact = true;
    f.n_lo = ns[static_cast<std::size_t>(opts.transient)];
    f.n_hi = ns.back();
    f.points = ns.size() - static_cast<std::size_t>(opts.transient);
    return f;
  }
  const std::vector<Point> pts = valid_points(ns, values, opts);
  if (pts.size() < std::max<std::size_t>(opts.min_points, 2))
    throw FitWindowError("fewer than " + std::to_string(opts.min_points) + " points above the noise floor");
  return least_squares(pts);
}

double fit_stability(const std::vector<int>& ns, const std::vector<double>& values, const FitOptions& opts) {
  if (is_exact(ns, values, opts)) return 0.0;
  const std::vector<Point> pts = valid_points(ns, values, opts);
  const std::size_t need = std::max<std::size_t>(opts.min_points, 2);
  if (pts.size() < need + 2) return kInfinity;
  const double base = least_squares(pts).rate;
  const std::vector<Point> head(pts.begin() + 2, pts.end());
  const std::vector<Point> tail(pts.begin(), pts.end() - 2);
  double worst = 0.0;
  for (const auto* w : {&head, &tail}) worst = std::max(worst, std::abs(least_squares(*w).rate - base) / base);
  return worst;
}

DecayTest geometric_decay_test(const std::vector<int>& ns, const std::vector<double>& values,
                               const FitOptions& opts) {
  DecayTest t;
  try {
    t.fit = fit_geometric_rate(ns, values, opts);
  } catch (const FitWindowError&) {
    return t;
  }
  if (t.fit.exact) {
    t.geometric = true;
    return t;
  }
  t.stability = fit_stability(ns, values, opts);
  t.geometric = t.fit.rate < kDecayRateMax && t.fit.residual <= kDecayResidualMax && t.stability <= kDecayStabilityMax;
  return t;
}

bool within_log_tolerance(double fitted, double predicted, double tol) {
  if (!(fitted > 0.0) || !(predicted > 0.0)) return false;
  return std::abs(std::log(fitted) - std::log(predicted)) <= tol * std::abs(std::log(predicted));
}

bool below_log_tolerance(double fitted, double predicted, double tol) {
  if (!(predicted > 0.0)) return fitted == 0.0;
  if (fitted <= 0.0) return true;
  return std::log(fitted) <= std::log(predicted) + tol * std::abs(std::log(predicted));
}

std::vector<PoleTrack> track_roots(const std::vector<int>& ns, const std::vector<std::vector<cplx>>& roots,
                                   const std::vector<cplx>& references, int transient) {
  std::vector<PoleTrack> tracks;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::vector<cplx>& rs = roots[i];
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t t = 0; t < tracks.size(); ++t)
      for (std::size_t r = 0; r < rs.size(); ++r) pairs.emplace_back(std::abs(tracks[t].location.back() - rs[r]), t, r);
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    std::vector<bool> track_used(tracks.size(), false), root_used(rs.size(), false);
    for (const auto& [dist, t, r] : pairs) {
      if (track_used[t] || root_used[r]) continue;
      track_used[t] = root_used[r] = true;
      tracks[t].n.push_back(ns[i]);
      tracks[t].location.push_back(rs[r]);
    }
    for (std::size_t r = 0; r < rs.size(); ++r) {
      if (root_used[r]) continue;
      PoleTrack t;
      t.n.push_back(ns[i]);
      t.location.push_back(rs[r]);
      tracks.push_back(std::move(t));
    }
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t t = 0; t < tracks.size(); ++t)
    for (std::size_t r = 0; r < references.size(); ++r)
      pairs.emplace_back(std::abs(tracks[t].location.back() - references[r]), t, r);
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
  std::vector<bool> track_used(tracks.size(), false), ref_used(references.size(), false);
  for (PoleTrack& t : tracks) t.reference = t.location.back();
  for (const auto& [dist, t, r] : pairs) {
    if (track_used[t] || ref_used[r]) continue;
    track_used[t] = ref_used[r] = true;
    tracks[t].reference = references[r];
  }

  const int settled = ns.empty() ? 0 : ns[std::min(static_cast<std::size_t>(std::max(transient, 0)), ns.size() - 1)];
  for (PoleTrack& t : tracks) {
    cplx mean = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < t.n.size(); ++i) {
      t.distance.push_back(std::abs(t.location[i] - t.reference));
      if (t.n[i] >= settled) {
        mean += t.location[i];
        ++count;
      }
    }
    if (count == 0) continue;
    mean /= static_cast<double>(count);
    for (std::size_t i = 0; i < t.n.size(); ++i)
      if (t.n[i] >= settled) t.dispersion = std::max(t.dispersion, std::abs(t.location[i] - mean));
  }
  return tracks;
}

ConvergenceReport run_row_sequence(const SystemModel& sys, int n_lo, int n_hi, const ComplexPolynomial& q_ref,
                                   const SequenceOptions& opts) {
  if (q_ref.degree() != sys.total_index() || q_ref.leading() != cplx(1.0))
    throw InvalidModelError("reference denominator must be monic of degree |m|");
  return assemble(compute_range(sys, n_lo, n_hi, opts.mhp), q_ref, false, sys.multi_index(), opts.fit);
}

ConvergenceReport run_row_sequence(const SystemModel& sys, int n_lo, int n_hi, const SequenceOptions& opts) {
  const SystemPoleSet sps = analyze_system(sys);
  const double theta = predicted_theta(sps, sys.geometry());
  ConvergenceReport rep = run_row_sequence(sys, n_lo, n_hi, sps.q_mf, opts);
  rep.predicted_theta = theta;
  return rep;
}

ConvergenceReport run_self_referenced(const SystemModel& sys, int n_lo, int n_hi, const SequenceOptions& opts) {
  std::vector<MhpResult> results = compute_range(sys, n_lo, n_hi, opts.mhp);
  const ComplexPolynomial ref = results.back().q.monic();
  return assemble(std::move(results), ref, true, sys.multi_index(), opts.fit);
}

Rho0Estimate estimate_rho0(const FunctionModel& f, const NodeTable& table, int n_hi, const MhpOptions& opts) {
  if (n_hi < 8) throw InvalidModelError("estimate_rho0 needs n_hi >= 8");
  const GeometrySpec& g = table.geometry();
  const FunctionModel oriented = f.with_cuts_away_from(g.center());
  for (const Singularity& s : oriented.singularities())
    if (!(g.level(s.location) > 1.0 + 1e-12)) throw InvalidModelError("function singularity lies on or inside E");
  const LevelCurve curve(g, safe_curve_level(rho_zero(oriented, g), opts.curve_exponent), opts.min_samples);

  const auto count = static_cast<std::size_t>(n_hi) + 1;
  std::vector<std::vector<cplx>> rows;
  for (std::size_t n = 0; n < count; ++n) rows.push_back(table.row(static_cast<int>(n) + 1));
  const BatchQuadratureResult q = contour_integrals(
      count,
      [&](cplx t, std::span<cplx> out) {
        const cplx fv = oriented(t);
        for (std::size_t n = 0; n < count; ++n) {
          cplx a = 1.0;
          for (const cplx x : rows[n]) a *= (t - x);
          out[n] = fv / a;
        }
      },
      curve, opts.quadrature_rel_tol);

  Rho0Estimate est;
  std::vector<int> ns;
  for (std::size_t n = 0; n < count; ++n) {
    const double mag = std::abs(q.values[n]);
    est.magnitudes.push_back(mag > 10.0 * q.noise_floors[n] ? mag : 0.0);
    ns.push_back(static_cast<int>(n));
  }
  const double c = g.capacity_constant();
  auto local_rho = [&](std::size_t lo, std::size_t hi) {
    std::vector<Point> pts;
    for (std::size_t n = lo; n < hi; ++n)
      if (est.magnitudes[n] > 0.0) pts.emplace_back(static_cast<int>(n), est.magnitudes[n]);
    return pts.size() >= 3 ? 1.0 / (c * least_squares(pts).rate) : kInfinity;
  };

  std::size_t last_valid = 0;
  for (std::size_t n = 1; n < count; ++n)
    if (est.magnitudes[n] > 0.0) last_valid = n;
  const bool hit_floor = last_valid + 1 < count;
  if (last_valid < 6) {
    if (!hit_floor) throw FitWindowError("too few integrals above the noise floor");
    est.infinite = true;
    est.value = kInfinity;
    return est;
  }
  const std::size_t third = (last_valid + 1) / 3;
  const double first = local_rho(1, 1 + third);
  const double last = local_rho(last_valid + 1 - third, last_valid + 1);
  if (last > 1.5 * first) {
    est.infinite = true;
    est.value = kInfinity;
    return est;
  }
  FitOptions fo;
  fo.transient = n_hi / 4;
  fo.noise_floor = 0.0;
  fo.exact_threshold = -1.0;
  est.fit = fit_geometric_rate(ns, est.magnitudes, fo);
  est.value = 1.0 / (c * est.fit.rate);
  return est;
}

std::string Probe::name() const {
  switch (kind) {
    case Kind::grid_in_e:
      return "grid_in_e";
    case Kind::level_curve:
      return "level_curve_" + std::to_string(rho);
    case Kind::disk_grid:
      return "disk_grid";
  }
  return "probe";
}

std::vector<cplx> probe_points(const Probe& probe, const GeometrySpec& g) {
  std::vector<cplx> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  switch (probe.kind) {
    case Probe::Kind::grid_in_e: {
      if (const auto* s = std::get_if<Segment>(&g.shape())) {
        for (std::size_t i = 0; i < kProbePoints; ++i)
          out.push_back(s->a + (s->b - s->a) * (static_cast<double>(i) / static_cast<double>(kProbePoints - 1)));
        break;
      }
      for (std::size_t i = 0; i < kProbePoints; ++i) {
        const double r = std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(kProbePoints));
        const cplx u = std::polar(r, golden * static_cast<double>(i));
        if (const auto* d = std::get_if<Disk>(&g.shape())) {
          out.push_back(d->center + d->radius * u);
        } else {
          const Ellipse& e = std::get<Ellipse>(g.shape());
          out.push_back(e.center + std::polar(1.0, e.rotation) * cplx(e.semi_major * u.real(), e.semi_minor * u.imag()));
        }
      }
      break;
    }
    case Probe::Kind::level_curve: {
      if (!(probe.rho > 1.0)) throw ProbeError("level-curve probe needs rho > 1");
      for (std::size_t i = 0; i < kProbePoints; ++i)
        out.push_back(g.psi(std::polar(probe.rho, 2.0 * std::numbers::pi * static_cast<double>(i) /
                                                      static_cast<double>(kProbePoints))));
      break;
    }
    case Probe::Kind::disk_grid: {
      if (!(probe.radius > 0.0) || !(probe.step > 0.0)) throw ProbeError("disk-grid probe needs positive radius and step");
      const int half = static_cast<int>(std::floor(probe.radius / probe.step));
      for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) {
          const cplx z = probe.center + probe.step * cplx(i, j);
          if (std::abs(z - probe.center) <= probe.radius * (1.0 + 1e-12)) out.push_back(z);
        }
      break;
    }
  }
  return out;
}

ApproxScan approximant_error_scan(const SystemModel& sys, const ConvergenceReport& report,
                                  const SystemPoleSet& sps, std::size_t k, const Probe& probe,
                                  const FitOptions& opts) {
  if (k >= sys.dimension()) throw InvalidModelError("function index out of range");
  if (sps.per_function.size() != sys.dimension()) throw InvalidModelError("approximant scan needs r_values");
  const GeometrySpec& g = sys.geometry();
  const std::vector<cplx> pts = probe_points(probe, g);
  const double r_star = sps.per_function[k].R_k_star;

  ApproxScan scan;
  scan.probe = probe.name();
  scan.function_index = k;
  for (const cplx z : pts) {
    const double lvl = g.level(z);
    if (std::isfinite(r_star) && !(lvl < r_star)) throw ProbeError("probe point lies outside D_k*");
    for (const SystemPole& p : sps.poles)
      if (std::abs(z - p.location) < 1e-3) throw ProbeError("probe point within 1e-3 of a system pole");
    scan.probe_norm = std::max(scan.probe_norm, lvl);
  }
  scan.predicted_rate = std::isfinite(r_star) ? scan.probe_norm / r_star : 0.0;

  const FunctionModel& f = sys.functions()[k];
  std::vector<cplx> exact;
  for (const cplx z : pts) exact.push_back(f(z));
  for (const MhpResult& r : report.results) {
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      try {
        worst = std::max(worst, std::abs(approximant_eval(r, k, pts[i]) - exact[i]));
      } catch (const NearPoleError&) {
        worst = kInfinity;
      }
    }
    scan.n.push_back(r.n);
    scan.errors.push_back(worst);
  }
  try {
    scan.fit = fit_geometric_rate(scan.n, scan.errors, opts);
  } catch (const FitWindowError&) {
    scan.fit.reset();
  }
  return scan;
}

DerivativeRates derivative_rate_check(const ConvergenceReport& report, const SystemPoleSet& sps, cplx xi, int max_j,
                                      const GeometrySpec& g, const FitOptions& opts) {
  const SystemPole* pole = sps.find(xi);
  if (pole == nullptr) throw InvalidModelError("derivative check needs a system pole");
  if (max_j < 0 || max_j > pole->order - 1) throw InvalidModelError("derivative order must be below the pole order");
  DerivativeRates out;
  out.xi = pole->location;
  for (int j = 0; j <= max_j; ++j) {
    std::vector<double> vals;
    for (const MhpResult& r : report.results) vals.push_back(std::abs(r.q.monic().derivative_at(pole->location, j)));
    out.fits.push_back(fit_geometric_rate(report.n_range, vals, opts));
    out.values.push_back(std::move(vals));
    const double prev = out.running_max.empty() ? 0.0 : out.running_max.back();
    out.running_max.push_back(std::max(prev, out.fits.back().rate));
    const double R = pole->R.empty() ? kInfinity : pole->R[static_cast<std::size_t>(j)];
    out.predicted.push_back(std::isfinite(R) ? g.level(pole->location) / R : 0.0);
  }
  return out;
}

IncompleteReport run_incomplete_sequence(const FunctionModel& f, const NodeTable& table, int n_lo, int n_hi, int m,
                                         int m_star, const std::vector<cplx>& references,
                                         const SequenceOptions& opts) {
  if (n_hi < n_lo) throw InvalidModelError("n range is empty");
  IncompleteReport rep;
  rep.m = m;
  rep.m_star = m_star;
  rep.results.resize(static_cast<std::size_t>(n_hi - n_lo + 1));
  parallel_for(rep.results.size(), [&](std::size_t i) {
    rep.results[i] = compute_incomplete(f, table, n_lo + static_cast<int>(i), m, m_star, opts.mhp);
  });
  std::vector<std::vector<cplx>> roots;
  for (const MhpResult& r : rep.results) {
    rep.n_range.push_back(r.n);
    roots.push_back(roots_of(r.eval_denominator));
  }
  rep.tracks = track_roots(rep.n_range, roots, references, opts.fit.transient);
  for (const PoleTrack& t : rep.tracks) {
    try {
      rep.fits.emplace_back(fit_geometric_rate(t.n, t.distance, opts.fit));
    } catch (const FitWindowError&) {
      rep.fits.emplace_back(std::nullopt);
    }
  }
  return rep;
}

}  // namespace hpade
