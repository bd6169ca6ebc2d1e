#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hpade/functions.hpp"
#include "hpade/geometry.hpp"
#include "hpade/mhp.hpp"
#include "hpade/oracle.hpp"
#include "hpade/polynomial.hpp"

namespace hpade {

struct FitOptions {
  /// Leading entries skipped as transient.
  int transient = 3;
  /// Values at or below this are treated as rounding noise and skipped.
  double noise_floor = 1e-13;
  std::size_t min_points = 5;
  /// A sequence whose post-transient values all lie below this is "exact".
  double exact_threshold = 1e-9;
};

/// Least-squares fit of log(value) against n.
struct RateFit {
  double rate = 0.0;  ///< exp(slope); 0 when exact
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS of the log residuals
  int n_lo = 0;
  int n_hi = 0;
  std::size_t points = 0;
  bool exact = false;
};

/// Throws FitWindowError when fewer than min_points values survive the
/// transient and noise-floor trimming (unless the sequence is exact).
RateFit fit_geometric_rate(const std::vector<int>& ns, const std::vector<double>& values, const FitOptions& opts = {});

/// Largest relative change of the fitted rate when the window loses two
/// points at either end.
double fit_stability(const std::vector<int>& ns, const std::vector<double>& values, const FitOptions& opts = {});

/// Verdict of the geometric-decay test used for the converse probe.
struct DecayTest {
  RateFit fit;
  double stability = 0.0;
  bool geometric = false;
};

inline constexpr double kDecayRateMax = 0.9;
inline constexpr double kDecayResidualMax = 0.5;
inline constexpr double kDecayStabilityMax = 0.1;

/// Geometric when exact, or when the fit succeeds with rate below 0.9, RMS log
/// residual at most 0.5 and window-shrink stability within 10%.
DecayTest geometric_decay_test(const std::vector<int>& ns, const std::vector<double>& values,
                               const FitOptions& opts = {});

/// Is |log fit - log predicted| <= tol * |log predicted|?
bool within_log_tolerance(double fitted, double predicted, double tol = 0.15);
/// One-sided variant: log fit <= log predicted + tol * |log predicted|.
bool below_log_tolerance(double fitted, double predicted, double tol = 0.15);

struct PoleTrack {
  cplx reference;
  std::vector<int> n;
  std::vector<cplx> location;
  std::vector<double> distance;  ///< |location - reference|
  /// Largest distance from the mean location over the entries past the transient.
  double dispersion = 0.0;
};

/// Follows roots across consecutive n by greedy nearest-neighbour matching.
/// Each track is then paired greedily with the nearest unused reference root,
/// or references its own final location when none is left.
std::vector<PoleTrack> track_roots(const std::vector<int>& ns, const std::vector<std::vector<cplx>>& roots,
                                   const std::vector<cplx>& references, int transient = 3);

struct ApproxScan {
  std::string probe;
  std::size_t function_index = 0;
  double probe_norm = 1.0;  ///< max(1, max |phi| over the probe)
  double predicted_rate = 0.0;
  std::vector<int> n;
  std::vector<double> errors;
  std::optional<RateFit> fit;
};

struct DerivativeRates {
  cplx xi;
  /// fits[j] for |Q^{(j)}(xi)| with monic Q.
  std::vector<RateFit> fits;
  std::vector<std::vector<double>> values;
  /// running_max[l] = max_{j<=l} fits[j].rate, predicted[l] = |phi(xi)| / R_{xi,l+1}.
  std::vector<double> running_max;
  std::vector<double> predicted;
};

struct ConvergenceReport {
  std::vector<int> multi_index;
  std::vector<int> n_range;
  ComplexPolynomial q_ref;
  bool self_reference = false;
  std::vector<double> q_errors;
  std::vector<PoleTrack> pole_tracks;
  std::optional<RateFit> fit;  ///< empty when the window is too small
  double fitted_theta = 0.0;
  std::optional<double> predicted_theta;
  std::vector<std::pair<double, double>> sigma_history;  ///< (sigma_min, sigma_gap)
  /// Largest track dispersion; above 0.1 the row sequence is flagged non-convergent.
  double max_dispersion = 0.0;
  bool converged = true;
  std::vector<ApproxScan> approx_errors;
  std::vector<DerivativeRates> derivative_rates;
  std::vector<MhpResult> results;
};

inline constexpr double kDispersionLimit = 0.1;

struct SequenceOptions {
  MhpOptions mhp;
  FitOptions fit;
};

/// Approximants for n in [n_lo, n_hi] measured against q_ref (monic, degree |m|).
ConvergenceReport run_row_sequence(const SystemModel& sys, int n_lo, int n_hi, const ComplexPolynomial& q_ref,
                                   const SequenceOptions& opts = {});

/// Same with the oracle's Q_m^f as reference and the oracle's predicted theta.
/// Throws IncompletePoleCountError when the oracle finds fewer than |m| system poles.
ConvergenceReport run_row_sequence(const SystemModel& sys, int n_lo, int n_hi, const SequenceOptions& opts = {});

/// Reference is the monic denominator at n_hi; used when no system pole
/// structure is known.
ConvergenceReport run_self_referenced(const SystemModel& sys, int n_lo, int n_hi, const SequenceOptions& opts = {});

/// Cauchy-Hadamard estimate of rho_0(f) from the integrals of f / a_{n+1} over
/// a fixed level curve, n = 0..n_hi.
struct Rho0Estimate {
  double value = 0.0;  ///< +inf when the integrals decay super-geometrically
  bool infinite = false;
  RateFit fit;
  std::vector<double> magnitudes;  ///< |integral| per n, 0 below the noise floor
};
Rho0Estimate estimate_rho0(const FunctionModel& f, const NodeTable& table, int n_hi, const MhpOptions& opts = {});

struct Probe {
  enum class Kind { grid_in_e, level_curve, disk_grid };
  Kind kind = Kind::grid_in_e;
  double rho = 0.0;  ///< level_curve
  cplx center;       ///< disk_grid
  double radius = 0.0;
  double step = 0.0;

  std::string name() const;
};

inline constexpr std::size_t kProbePoints = 100;

/// Sunflower points in a disk or ellipse, equispaced points on a segment,
/// points of a level curve, or a square grid clipped to a disk.
std::vector<cplx> probe_points(const Probe& probe, const GeometrySpec& g);

/// Sup over the probe of |approximant - f_k| per n, fitted and compared with
/// ||Phi||_probe / R_k*. Throws ProbeError when a probe point lies within 1e-3
/// of a system pole or outside D_k*.
ApproxScan approximant_error_scan(const SystemModel& sys, const ConvergenceReport& report,
                                  const SystemPoleSet& sps, std::size_t k, const Probe& probe,
                                  const FitOptions& opts = {});

/// Fits |Q_n^{(j)}(xi)|, j = 0..max_j, for the monic denominators in the report.
DerivativeRates derivative_rate_check(const ConvergenceReport& report, const SystemPoleSet& sps, cplx xi, int max_j,
                                      const GeometrySpec& g, const FitOptions& opts = {});

/// Row sequence of incomplete approximants of type (n, m, m_star).
struct IncompleteReport {
  int m = 0;
  int m_star = 0;
  std::vector<int> n_range;
  std::vector<PoleTrack> tracks;
  /// fits[i] fits tracks[i].distance; empty when the window is too small.
  std::vector<std::optional<RateFit>> fits;
  std::vector<MhpResult> results;
};

IncompleteReport run_incomplete_sequence(const FunctionModel& f, const NodeTable& table, int n_lo, int n_hi, int m,
                                         int m_star, const std::vector<cplx>& references,
                                         const SequenceOptions& opts = {});

}  // namespace hpade
