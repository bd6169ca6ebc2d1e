#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace hpade::cli {

using nlohmann::json;

namespace {

json real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw std::runtime_error("expected a real number, got " + j.dump());
}

json complex(cplx z) { return json::array({real(z.real()), real(z.imag())}); }

cplx complex(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("expected [re, im], got " + j.dump());
  return {real(j[0]), real(j[1])};
}

json reals(const std::vector<double>& v) {
  json out = json::array();
  for (const double x : v) out.push_back(real(x));
  return out;
}

std::vector<double> reals(const json& j) {
  std::vector<double> out;
  for (const json& x : j) out.push_back(real(x));
  return out;
}

json complexes(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx z : v) out.push_back(complex(z));
  return out;
}

std::vector<cplx> complexes(const json& j) {
  std::vector<cplx> out;
  for (const json& x : j) out.push_back(complex(x));
  return out;
}

json optional_real(const std::optional<double>& x) { return x ? real(*x) : json(nullptr); }

std::optional<double> optional_real(const json& j) {
  if (j.is_null()) return std::nullopt;
  return real(j);
}

const json& at(const json& j, const char* key) {
  if (!j.contains(key)) throw std::runtime_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

json fit_json(const FitRecord& f) {
  return {{"rate", real(f.rate)},         {"slope", real(f.slope)}, {"intercept", real(f.intercept)},
          {"residual", real(f.residual)}, {"n_lo", f.n_lo},         {"n_hi", f.n_hi},
          {"points", f.points},           {"exact", f.exact}};
}

FitRecord fit_from(const json& j) {
  FitRecord f;
  f.rate = real(at(j, "rate"));
  f.slope = real(at(j, "slope"));
  f.intercept = real(at(j, "intercept"));
  f.residual = real(at(j, "residual"));
  f.n_lo = at(j, "n_lo").get<int>();
  f.n_hi = at(j, "n_hi").get<int>();
  f.points = at(j, "points").get<std::size_t>();
  f.exact = at(j, "exact").get<bool>();
  return f;
}

json optional_fit(const std::optional<FitRecord>& f) { return f ? fit_json(*f) : json(nullptr); }

std::optional<FitRecord> optional_fit(const json& j) {
  if (j.is_null()) return std::nullopt;
  return fit_from(j);
}

json track_json(const TrackRecord& t) {
  return {{"reference", complex(t.reference)}, {"n", t.n},
          {"location", complexes(t.location)}, {"distance", reals(t.distance)},
          {"dispersion", real(t.dispersion)},  {"fit", optional_fit(t.fit)}};
}

TrackRecord track_from(const json& j) {
  TrackRecord t;
  t.reference = complex(at(j, "reference"));
  t.n = at(j, "n").get<std::vector<int>>();
  t.location = complexes(at(j, "location"));
  t.distance = reals(at(j, "distance"));
  t.dispersion = real(at(j, "dispersion"));
  t.fit = optional_fit(at(j, "fit"));
  return t;
}

json tracks_json(const std::vector<TrackRecord>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(track_json(t));
  return out;
}

std::vector<TrackRecord> tracks_from(const json& j) {
  std::vector<TrackRecord> out;
  for (const json& t : j) out.push_back(track_from(t));
  return out;
}

json sequence_json(const SequenceRecord& s) {
  json approx = json::array();
  for (const auto& a : s.approx)
    approx.push_back({{"probe", a.probe},
                      {"function", a.function},
                      {"probe_norm", real(a.probe_norm)},
                      {"predicted_rate", real(a.predicted_rate)},
                      {"n", a.n},
                      {"errors", reals(a.errors)},
                      {"fit", optional_fit(a.fit)}});
  json derivs = json::array();
  for (const auto& d : s.derivatives) {
    json fits = json::array();
    for (const auto& f : d.fits) fits.push_back(fit_json(f));
    derivs.push_back({{"xi", complex(d.xi)},
                      {"fits", fits},
                      {"running_max", reals(d.running_max)},
                      {"predicted", reals(d.predicted)}});
  }
  return {{"multi_index", s.multi_index},
          {"n", s.n},
          {"q_ref", complexes(s.q_ref)},
          {"self_reference", s.self_reference},
          {"q_errors", reals(s.q_errors)},
          {"sigma_min", reals(s.sigma_min)},
          {"sigma_gap", reals(s.sigma_gap)},
          {"pole_tracks", tracks_json(s.tracks)},
          {"fit", optional_fit(s.fit)},
          {"fitted_theta", real(s.fitted_theta)},
          {"predicted_theta", optional_real(s.predicted_theta)},
          {"max_dispersion", real(s.max_dispersion)},
          {"converged", s.converged},
          {"approx_errors", approx},
          {"derivative_rates", derivs}};
}

SequenceRecord sequence_from(const json& j) {
  SequenceRecord s;
  s.multi_index = at(j, "multi_index").get<std::vector<int>>();
  s.n = at(j, "n").get<std::vector<int>>();
  s.q_ref = complexes(at(j, "q_ref"));
  s.self_reference = at(j, "self_reference").get<bool>();
  s.q_errors = reals(at(j, "q_errors"));
  s.sigma_min = reals(at(j, "sigma_min"));
  s.sigma_gap = reals(at(j, "sigma_gap"));
  s.tracks = tracks_from(at(j, "pole_tracks"));
  s.fit = optional_fit(at(j, "fit"));
  s.fitted_theta = real(at(j, "fitted_theta"));
  s.predicted_theta = optional_real(at(j, "predicted_theta"));
  s.max_dispersion = real(at(j, "max_dispersion"));
  s.converged = at(j, "converged").get<bool>();
  for (const json& a : at(j, "approx_errors")) {
    ApproxRecord r;
    r.probe = at(a, "probe").get<std::string>();
    r.function = at(a, "function").get<std::size_t>();
    r.probe_norm = real(at(a, "probe_norm"));
    r.predicted_rate = real(at(a, "predicted_rate"));
    r.n = at(a, "n").get<std::vector<int>>();
    r.errors = reals(at(a, "errors"));
    r.fit = optional_fit(at(a, "fit"));
    s.approx.push_back(std::move(r));
  }
  for (const json& d : at(j, "derivative_rates")) {
    DerivativeRecord r;
    r.xi = complex(at(d, "xi"));
    for (const json& f : at(d, "fits")) r.fits.push_back(fit_from(f));
    r.running_max = reals(at(d, "running_max"));
    r.predicted = reals(at(d, "predicted"));
    s.derivatives.push_back(std::move(r));
  }
  return s;
}

json optional_sequence(const std::optional<SequenceRecord>& s) { return s ? sequence_json(*s) : json(nullptr); }

std::optional<SequenceRecord> optional_sequence(const json& j) {
  if (j.is_null()) return std::nullopt;
  return sequence_from(j);
}

json oracle_json(const OracleRecord& o) {
  json poles = json::array();
  for (const auto& p : o.poles)
    poles.push_back({{"location", complex(p.location)},
                     {"order", p.order},
                     {"level", real(p.level)},
                     {"rho", reals(p.rho)},
                     {"R", reals(p.R)},
                     {"R_xi", real(p.R_xi)}});
  return {{"supported", o.supported},
          {"message", o.message},
          {"poles", poles},
          {"q_mf", complexes(o.q_mf)},
          {"R_k", reals(o.R_k)},
          {"R_k_star", reals(o.R_k_star)},
          {"total_order", o.total_order},
          {"total_index", o.total_index},
          {"predicted_theta", optional_real(o.predicted_theta)},
          {"independent", o.independent ? json(*o.independent) : json(nullptr)}};
}

OracleRecord oracle_from(const json& j) {
  OracleRecord o;
  o.supported = at(j, "supported").get<bool>();
  o.message = at(j, "message").get<std::string>();
  for (const json& p : at(j, "poles")) {
    PoleRecord r;
    r.location = complex(at(p, "location"));
    r.order = at(p, "order").get<int>();
    r.level = real(at(p, "level"));
    r.rho = reals(at(p, "rho"));
    r.R = reals(at(p, "R"));
    r.R_xi = real(at(p, "R_xi"));
    o.poles.push_back(std::move(r));
  }
  o.q_mf = complexes(at(j, "q_mf"));
  o.R_k = reals(at(j, "R_k"));
  o.R_k_star = reals(at(j, "R_k_star"));
  o.total_order = at(j, "total_order").get<int>();
  o.total_index = at(j, "total_index").get<int>();
  o.predicted_theta = optional_real(at(j, "predicted_theta"));
  const json& ind = at(j, "independent");
  if (!ind.is_null()) o.independent = ind.get<bool>();
  return o;
}

CheckStatus status_from(const std::string& s) {
  if (s == "pass") return CheckStatus::pass;
  if (s == "fail") return CheckStatus::fail;
  if (s == "error") return CheckStatus::error;
  throw std::runtime_error("unknown check status '" + s + "'");
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

FitRecord FitRecord::from(const RateFit& f) {
  return {f.rate, f.slope, f.intercept, f.residual, f.n_lo, f.n_hi, f.points, f.exact};
}

double FitRecord::at(int n) const { return exact ? 0.0 : std::exp(intercept + slope * n); }

SequenceRecord SequenceRecord::from(const ConvergenceReport& r) {
  SequenceRecord s;
  s.multi_index = r.multi_index;
  for (const MhpResult& m : r.results) s.n.push_back(m.n);
  s.q_ref = r.q_ref.coeffs();
  s.self_reference = r.self_reference;
  s.q_errors = r.q_errors;
  for (const auto& [lo, gap] : r.sigma_history) {
    s.sigma_min.push_back(lo);
    s.sigma_gap.push_back(gap);
  }
  for (const PoleTrack& t : r.pole_tracks) s.tracks.push_back({t.reference, t.n, t.location, t.distance, t.dispersion, {}});
  if (r.fit) s.fit = FitRecord::from(*r.fit);
  s.fitted_theta = r.fitted_theta;
  s.predicted_theta = r.predicted_theta;
  s.max_dispersion = r.max_dispersion;
  s.converged = r.converged;
  for (const ApproxScan& a : r.approx_errors) {
    ApproxRecord rec{a.probe, a.function_index, a.probe_norm, a.predicted_rate, a.n, a.errors, {}};
    if (a.fit) rec.fit = FitRecord::from(*a.fit);
    s.approx.push_back(std::move(rec));
  }
  for (const DerivativeRates& d : r.derivative_rates) {
    DerivativeRecord rec{d.xi, {}, d.running_max, d.predicted};
    for (const RateFit& f : d.fits) rec.fits.push_back(FitRecord::from(f));
    s.derivatives.push_back(std::move(rec));
  }
  return s;
}

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::error: return "error";
  }
  return "error";
}

std::string emit_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"status", status_name(c.status)},
                      {"message", c.message},
                      {"measured", optional_real(c.measured)},
                      {"predicted", optional_real(c.predicted)},
                      {"tolerance", real(c.tolerance)},
                      {"series", c.series}});
  json series = json::array();
  for (const auto& s : r.series)
    series.push_back({{"name", s.name},
                      {"n", s.n},
                      {"value", reals(s.value)},
                      {"reference", reals(s.reference)},
                      {"predicted_rate", optional_real(s.predicted_rate)}});
  const json doc = {{"name", r.name},
                    {"description", r.description},
                    {"multi_index", r.multi_index},
                    {"n_range", r.n_range},
                    {"oracle", oracle_json(r.oracle)},
                    {"sequence", optional_sequence(r.sequence)},
                    {"converse", optional_sequence(r.converse)},
                    {"incomplete_tracks", tracks_json(r.incomplete_tracks)},
                    {"checks", checks},
                    {"series", series},
                    {"exit_code", r.exit_code}};
  return doc.dump(2) + "\n";
}

Report parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    Report r;
    r.name = at(j, "name").get<std::string>();
    r.description = at(j, "description").get<std::string>();
    r.multi_index = at(j, "multi_index").get<std::vector<int>>();
    r.n_range = at(j, "n_range").get<std::vector<int>>();
    r.oracle = oracle_from(at(j, "oracle"));
    r.sequence = optional_sequence(at(j, "sequence"));
    r.converse = optional_sequence(at(j, "converse"));
    r.incomplete_tracks = tracks_from(at(j, "incomplete_tracks"));
    for (const json& c : at(j, "checks")) {
      CheckRecord rec;
      rec.name = at(c, "name").get<std::string>();
      rec.status = status_from(at(c, "status").get<std::string>());
      rec.message = at(c, "message").get<std::string>();
      rec.measured = optional_real(at(c, "measured"));
      rec.predicted = optional_real(at(c, "predicted"));
      rec.tolerance = real(at(c, "tolerance"));
      rec.series = at(c, "series").get<std::vector<std::string>>();
      r.checks.push_back(std::move(rec));
    }
    for (const json& s : at(j, "series")) {
      SeriesRecord rec;
      rec.name = at(s, "name").get<std::string>();
      rec.n = at(s, "n").get<std::vector<int>>();
      rec.value = reals(at(s, "value"));
      rec.reference = reals(at(s, "reference"));
      rec.predicted_rate = optional_real(at(s, "predicted_rate"));
      r.series.push_back(std::move(rec));
    }
    r.exit_code = at(j, "exit_code").get<int>();
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report schema violation: ") + e.what());
  }
}

void write_csv(const std::filesystem::path& path, const SeriesRecord& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "n,value,reference\n";
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    out << s.n[i] << ',' << format_real(s.value[i]) << ',';
    out << (i < s.reference.size() ? format_real(s.reference[i]) : std::string("nan")) << '\n';
  }
}

}  // namespace hpade::cli
