#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hpade/errors.hpp"
#include "plot.hpp"

namespace hpade::cli {

namespace {

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

std::string file_safe(const std::string& s) {
  std::string out;
  for (const char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') ? c : '_';
  return out;
}

SeriesRecord make_series(const std::string& name, const std::vector<int>& ns, const std::vector<double>& values,
                         const std::optional<RateFit>& fit, std::optional<double> predicted) {
  SeriesRecord s{name, ns, values, {}, predicted};
  if (fit) {
    const FitRecord f = FitRecord::from(*fit);
    for (const int n : ns) s.reference.push_back(f.at(n));
  }
  return s;
}

double settled_max(const std::vector<double>& v, int transient) {
  double worst = 0.0;
  const auto start = std::min(static_cast<std::size_t>(std::max(transient, 0)), v.empty() ? 0 : v.size() - 1);
  for (std::size_t i = start; i < v.size(); ++i) worst = std::max(worst, v[i]);
  return worst;
}

/// Rate check against a predicted rate: within the log band, or for a
/// prediction of 0 an exact fit or values at rounding level.
bool rate_matches(const std::optional<RateFit>& fit, const std::vector<double>& values, double predicted,
                  bool one_sided) {
  if (predicted == 0.0)
    return (fit && fit->exact) || settled_max(values, FitOptions{}.transient) <= kExactTolerance;
  if (!fit) return false;
  return one_sided ? below_log_tolerance(fit->rate, predicted, kRateTolerance)
                   : within_log_tolerance(fit->rate, predicted, kRateTolerance);
}

class Runner {
 public:
  explicit Runner(const ExperimentConfig& cfg) : cfg_(cfg), sys_(cfg.system()) {}

  Report run() {
    rep_.name = cfg_.name;
    rep_.description = cfg_.description;
    rep_.multi_index = cfg_.multi_index;
    rep_.n_range = {cfg_.n_lo, cfg_.n_hi};
    consult_oracle();
    for (const Check c : cfg_.checks) {
      CheckRecord rec;
      rec.name = check_name(c);
      try {
        switch (c) {
          case Check::rate: rate(rec); break;
          case Check::rho0: rho0(rec); break;
          case Check::approx: approx(rec); break;
          case Check::derivative: derivative(rec); break;
          case Check::incomplete: incomplete(rec); break;
          case Check::independence: independence(rec); break;
        }
      } catch (const CheckFailed& e) {
        rec.status = CheckStatus::fail;
        rec.message = e.what();
      } catch (const Error& e) {
        rec.status = CheckStatus::error;
        rec.message = e.what();
      }
      rep_.checks.push_back(std::move(rec));
    }
    if (seq_) {
      SequenceRecord s = SequenceRecord::from(*seq_);
      rep_.sequence = std::move(s);
    }
    rep_.exit_code = kPass;
    for (const CheckRecord& c : rep_.checks) {
      if (c.status == CheckStatus::error) rep_.exit_code = kNumericalFailure;
      if (c.status == CheckStatus::fail && rep_.exit_code == kPass) rep_.exit_code = kCheckFailure;
    }
    return std::move(rep_);
  }

 private:
  void consult_oracle() {
    OracleRecord& o = rep_.oracle;
    o.total_index = sys_.total_index();
    try {
      sps_ = analyze_system(sys_);
    } catch (const UnsupportedFunctionError& e) {
      o.supported = false;
      o.message = e.what();
      return;
    }
    for (const SystemPole& p : sps_->poles) o.poles.push_back({p.location, p.order, p.level, p.rho, p.R, p.R_xi});
    o.q_mf = sps_->q_mf.coeffs();
    for (const FunctionRates& f : sps_->per_function) {
      o.R_k.push_back(f.R_k);
      o.R_k_star.push_back(f.R_k_star);
    }
    o.total_order = sps_->total_order();
    try {
      theta_ = predicted_theta(*sps_, sys_.geometry());
      o.predicted_theta = theta_;
    } catch (const IncompletePoleCountError& e) {
      o.message = e.what();
    }
    o.independent = polynomial_independence(sys_);
  }

  const SystemPoleSet& oracle(const char* check) const {
    if (!sps_) throw CheckFailed(std::string(check) + ": oracle does not support this system (" + rep_.oracle.message + ")");
    return *sps_;
  }

  /// Row sequence against the oracle denominator, computed once.
  ConvergenceReport& sequence(const char* check) {
    oracle(check);
    if (!theta_) throw CheckFailed(std::string(check) + ": " + rep_.oracle.message);
    if (!seq_) {
      seq_ = run_row_sequence(sys_, cfg_.n_lo, cfg_.n_hi, sps_->q_mf);
      seq_->predicted_theta = theta_;
    }
    return *seq_;
  }

  void add_series(CheckRecord& rec, SeriesRecord s) {
    rec.series.push_back(s.name);
    rep_.series.push_back(std::move(s));
  }

  void rate(CheckRecord& rec) {
    rec.tolerance = kRateTolerance;
    oracle("rate");
    if (!theta_) {
      converse(rec);
      return;
    }
    const ConvergenceReport& s = sequence("rate");
    rec.predicted = *theta_;
    rec.measured = s.fitted_theta;
    add_series(rec, make_series("rate", s.n_range, s.q_errors, s.fit, *theta_ > 0.0 ? theta_ : std::nullopt));
    if (*theta_ == 0.0) {
      const double worst = settled_max(s.q_errors, FitOptions{}.transient);
      rec.message = (s.fit && s.fit->exact) ? "exact" : "largest settled error " + fmt(worst);
      if (!rate_matches(s.fit, s.q_errors, 0.0, false)) throw CheckFailed(rec.message);
      return;
    }
    if (!s.fit) throw CheckFailed("too few usable points for a rate fit");
    rec.message = "fitted theta " + fmt(s.fitted_theta) + ", predicted " + fmt(*theta_);
    if (!rate_matches(s.fit, s.q_errors, *theta_, false)) throw CheckFailed(rec.message);
  }

  /// Fewer system poles than |m|: no rate is predicted, and the denominators
  /// measured against their own last member should not decay geometrically.
  void converse(CheckRecord& rec) {
    const ConvergenceReport s = run_self_referenced(sys_, cfg_.n_lo, cfg_.n_hi);
    const DecayTest d = geometric_decay_test(s.n_range, s.q_errors);
    rep_.converse = SequenceRecord::from(s);
    rec.measured = d.fit.rate;
    std::optional<RateFit> fit;
    if (d.fit.points > 0) fit = d.fit;
    add_series(rec, make_series("rate", s.n_range, s.q_errors, fit, std::nullopt));
    rec.message = "pole count incomplete; self-referenced decay test: " +
                  std::string(d.geometric ? "geometric" : "not geometric") + " (rate " + fmt(d.fit.rate) +
                  ", residual " + fmt(d.fit.residual) + ", stability " + fmt(d.stability) + ")";
    if (d.geometric) throw CheckFailed(rec.message);
  }

  void rho0(CheckRecord& rec) {
    rec.tolerance = kRho0Tolerance;
    const GeometrySpec& g = sys_.geometry();
    std::string summary;
    bool ok = true;
    for (std::size_t k = 0; k < sys_.dimension(); ++k) {
      const FunctionModel& f = sys_.functions()[k];
      const double truth = rho_zero(f, g);
      const Rho0Estimate est = estimate_rho0(f, sys_.table(), cfg_.n_hi);
      std::vector<int> ns;
      for (std::size_t n = 0; n < est.magnitudes.size(); ++n) ns.push_back(static_cast<int>(n));
      const std::optional<double> guide =
          std::isfinite(truth) ? std::optional<double>(1.0 / (g.capacity_constant() * truth)) : std::nullopt;
      std::optional<RateFit> fit;
      if (est.fit.points > 0) fit = est.fit;
      const std::string name = sys_.dimension() == 1 ? "rho0" : "rho0_f" + std::to_string(k);
      add_series(rec, make_series(name, ns, est.magnitudes, fit, guide));
      const bool good = (std::isinf(truth) && est.infinite) ||
                        (std::isfinite(truth) && std::abs(est.value / truth - 1.0) <= kRho0Tolerance);
      ok = ok && good;
      if (k == 0) {
        rec.measured = est.value;
        rec.predicted = truth;
      }
      summary += (k ? "; " : "") + std::string("f") + std::to_string(k) + ": estimate " + fmt(est.value) +
                 ", true " + fmt(truth);
    }
    rec.message = summary;
    if (!ok) throw CheckFailed(summary);
  }

  void approx(CheckRecord& rec) {
    rec.tolerance = kRateTolerance;
    const SystemPoleSet& sps = oracle("approx");
    ConvergenceReport& s = sequence("approx");
    std::string failures;
    for (std::size_t k = 0; k < sys_.dimension(); ++k) {
      for (const Probe& p : cfg_.probes) {
        ApproxScan scan;
        try {
          scan = approximant_error_scan(sys_, s, sps, k, p);
        } catch (const ProbeError& e) {
          failures += "f" + std::to_string(k) + " " + p.name() + ": " + e.what() + "; ";
          continue;
        }
        const std::string name = "approx_f" + std::to_string(k) + "_" + file_safe(scan.probe);
        const std::optional<double> guide = scan.predicted_rate > 0.0 ? std::optional(scan.predicted_rate) : std::nullopt;
        add_series(rec, make_series(name, scan.n, scan.errors, scan.fit, guide));
        if (!rec.measured) {
          rec.measured = scan.fit ? scan.fit->rate : NAN;
          rec.predicted = scan.predicted_rate;
        }
        if (!rate_matches(scan.fit, scan.errors, scan.predicted_rate, true))
          failures += "f" + std::to_string(k) + " " + scan.probe + ": rate " + (scan.fit ? fmt(scan.fit->rate) : "n/a") +
                      " above " + fmt(scan.predicted_rate) + "; ";
        s.approx_errors.push_back(std::move(scan));
      }
    }
    rec.message = failures.empty() ? "all probes within the bound" : failures;
    if (!failures.empty()) throw CheckFailed(failures);
  }

  void derivative(CheckRecord& rec) {
    rec.tolerance = kRateTolerance;
    const SystemPoleSet& sps = oracle("derivative");
    ConvergenceReport& s = sequence("derivative");
    std::string failures;
    for (std::size_t i = 0; i < sps.poles.size(); ++i) {
      const SystemPole& p = sps.poles[i];
      DerivativeRates d;
      try {
        d = derivative_rate_check(s, sps, p.location, p.order - 1, sys_.geometry());
      } catch (const FitWindowError& e) {
        // values at rounding level throughout; compare directly
        for (int j = 0; j < p.order; ++j) {
          std::vector<double> vals;
          for (const MhpResult& r : s.results) vals.push_back(std::abs(r.q.monic().derivative_at(p.location, j)));
          const double R = p.R.empty() ? kInfinity : p.R[static_cast<std::size_t>(j)];
          const double predicted = std::isfinite(R) ? p.level / R : 0.0;
          add_series(rec, make_series("derivative_p" + std::to_string(i) + "_j" + std::to_string(j), s.n_range, vals,
                                      std::nullopt, std::nullopt));
          if (!rate_matches(std::nullopt, vals, predicted, false))
            failures += "pole " + std::to_string(i) + " j=" + std::to_string(j) + ": " + e.what() + "; ";
        }
        continue;
      }
      for (std::size_t j = 0; j < d.fits.size(); ++j) {
        const std::optional<double> guide = d.predicted[j] > 0.0 ? std::optional(d.predicted[j]) : std::nullopt;
        add_series(rec, make_series("derivative_p" + std::to_string(i) + "_j" + std::to_string(j), s.n_range,
                                    d.values[j], d.fits[j], guide));
        std::optional<RateFit> running = d.fits[j];
        running->rate = d.running_max[j];
        if (!rate_matches(running, d.values[j], d.predicted[j], false))
          failures += "pole " + std::to_string(i) + " l=" + std::to_string(j) + ": running max " +
                      fmt(d.running_max[j]) + ", predicted " + fmt(d.predicted[j]) + "; ";
      }
      if (!rec.measured) {
        rec.measured = d.running_max.front();
        rec.predicted = d.predicted.front();
      }
      s.derivative_rates.push_back(std::move(d));
    }
    rec.message = failures.empty() ? "every running max matches" : failures;
    if (!failures.empty()) throw CheckFailed(failures);
  }

  void incomplete(CheckRecord& rec) {
    rec.tolerance = kRateTolerance;
    const IncompleteSpec& spec = *cfg_.incomplete;
    const FunctionModel& f = sys_.functions()[spec.function];
    const GeometrySpec& g = sys_.geometry();
    const IncompleteReport ir =
        run_incomplete_sequence(f, sys_.table(), cfg_.n_lo, cfg_.n_hi, spec.m, spec.m_star, spec.references);
    const double rho = rho_meromorphy(f, g, spec.m_star);
    std::string failures;
    for (std::size_t i = 0; i < ir.tracks.size(); ++i) {
      const PoleTrack& t = ir.tracks[i];
      TrackRecord tr{t.reference, t.n, t.location, t.distance, t.dispersion, {}};
      if (ir.fits[i]) tr.fit = FitRecord::from(*ir.fits[i]);
      rep_.incomplete_tracks.push_back(tr);
      const bool declared = std::any_of(spec.references.begin(), spec.references.end(),
                                        [&](cplx r) { return r == t.reference; });
      if (!declared) continue;
      const double predicted = std::isfinite(rho) ? g.level(t.reference) / rho : 0.0;
      add_series(rec, make_series("incomplete_t" + std::to_string(i), t.n, t.distance, ir.fits[i],
                                  predicted > 0.0 ? std::optional(predicted) : std::nullopt));
      if (!rec.measured) {
        rec.measured = ir.fits[i] ? ir.fits[i]->rate : NAN;
        rec.predicted = predicted;
      }
      if (!rate_matches(ir.fits[i], t.distance, predicted, true))
        failures += "track to " + fmt(t.reference.real()) + (t.reference.imag() < 0 ? "" : "+") +
                    fmt(t.reference.imag()) + "i: rate " + (ir.fits[i] ? fmt(ir.fits[i]->rate) : "n/a") +
                    " above " + fmt(predicted) + "; ";
    }
    if (rec.series.size() != spec.references.size()) failures += "not every reference pole has a track; ";
    rec.message = failures.empty() ? "every reference pole captured at the predicted rate" : failures;
    if (!failures.empty()) throw CheckFailed(failures);
  }

  void independence(CheckRecord& rec) {
    const bool ind = rep_.oracle.independent ? *rep_.oracle.independent : polynomial_independence(sys_);
    rec.measured = ind ? 1.0 : 0.0;
    rec.message = ind ? "polynomially independent" : "polynomially dependent";
    if (!ind) throw CheckFailed(rec.message);
  }

  const ExperimentConfig& cfg_;
  SystemModel sys_;
  Report rep_;
  std::optional<SystemPoleSet> sps_;
  std::optional<double> theta_;
  std::optional<ConvergenceReport> seq_;
};

}  // namespace

Report run_checks(const ExperimentConfig& cfg) { return Runner(cfg).run(); }

int run(const std::filesystem::path& config, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(config);
    if (opts.output_dir) cfg.output_dir = *opts.output_dir;
    if (opts.n_max) {
      if (*opts.n_max < cfg.n_lo) throw ConfigError("--n-max must be >= n_range[0] = " + std::to_string(cfg.n_lo));
      cfg.n_hi = *opts.n_max;
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }

  Report rep;
  try {
    rep = run_checks(cfg);
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    err << "cannot create output directory " << cfg.output_dir.string() << ": " << ec.message() << "\n";
    return kConfigError;
  }
  try {
    for (const SeriesRecord& s : rep.series) {
      write_csv(cfg.output_dir / (s.name + ".csv"), s);
      if (!opts.json_only) write_svg(cfg.output_dir / (s.name + ".svg"), s, cfg.name + ": " + s.name);
    }
    std::ofstream json(cfg.output_dir / "report.json", std::ios::binary);
    if (!json) throw std::runtime_error("cannot write report.json");
    json << emit_json(rep);
  } catch (const std::runtime_error& e) {
    err << e.what() << "\n";
    return kConfigError;
  }

  for (const CheckRecord& c : rep.checks) out << c.name << ": " << status_name(c.status) << " (" << c.message << ")\n";
  out << "report: " << (cfg.output_dir / "report.json").string() << "\n";
  return rep.exit_code;
}

}  // namespace hpade::cli
