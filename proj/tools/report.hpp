#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hpade/analysis.hpp"
#include "hpade/oracle.hpp"

namespace hpade::cli {

struct FitRecord {
  double rate = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  int n_lo = 0;
  int n_hi = 0;
  std::size_t points = 0;
  bool exact = false;

  static FitRecord from(const RateFit& f);
  /// exp(intercept + slope n), or 0 for an exact sequence.
  double at(int n) const;
  bool operator==(const FitRecord&) const = default;
};

struct PoleRecord {
  cplx location;
  int order = 0;
  double level = 0.0;
  std::vector<double> rho;
  std::vector<double> R;
  double R_xi = 0.0;
  bool operator==(const PoleRecord&) const = default;
};

struct OracleRecord {
  bool supported = true;
  std::string message;
  std::vector<PoleRecord> poles;
  std::vector<cplx> q_mf;
  std::vector<double> R_k;
  std::vector<double> R_k_star;
  int total_order = 0;
  int total_index = 0;
  std::optional<double> predicted_theta;
  std::optional<bool> independent;
  bool operator==(const OracleRecord&) const = default;
};

struct TrackRecord {
  cplx reference;
  std::vector<int> n;
  std::vector<cplx> location;
  std::vector<double> distance;
  double dispersion = 0.0;
  std::optional<FitRecord> fit;
  bool operator==(const TrackRecord&) const = default;
};

struct ApproxRecord {
  std::string probe;
  std::size_t function = 0;
  double probe_norm = 1.0;
  double predicted_rate = 0.0;
  std::vector<int> n;
  std::vector<double> errors;
  std::optional<FitRecord> fit;
  bool operator==(const ApproxRecord&) const = default;
};

struct DerivativeRecord {
  cplx xi;
  std::vector<FitRecord> fits;
  std::vector<double> running_max;
  std::vector<double> predicted;
  bool operator==(const DerivativeRecord&) const = default;
};

struct SequenceRecord {
  std::vector<int> multi_index;
  std::vector<int> n;
  std::vector<cplx> q_ref;
  bool self_reference = false;
  std::vector<double> q_errors;
  std::vector<double> sigma_min;
  std::vector<double> sigma_gap;
  std::vector<TrackRecord> tracks;
  std::optional<FitRecord> fit;
  double fitted_theta = 0.0;
  std::optional<double> predicted_theta;
  double max_dispersion = 0.0;
  bool converged = true;
  std::vector<ApproxRecord> approx;
  std::vector<DerivativeRecord> derivatives;

  static SequenceRecord from(const ConvergenceReport& r);
  bool operator==(const SequenceRecord&) const = default;
};

/// One CSV file and one plot: value per n with a reference column (the fitted
/// line) and, when known, the predicted rate for the guide line.
struct SeriesRecord {
  std::string name;
  std::vector<int> n;
  std::vector<double> value;
  std::vector<double> reference;
  std::optional<double> predicted_rate;
  bool operator==(const SeriesRecord&) const = default;
};

enum class CheckStatus { pass, fail, error };

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string message;
  std::optional<double> measured;
  std::optional<double> predicted;
  double tolerance = 0.0;
  std::vector<std::string> series;  ///< names of the SeriesRecords it produced
  bool operator==(const CheckRecord&) const = default;
};

struct Report {
  std::string name;
  std::string description;
  std::vector<int> multi_index;
  std::vector<int> n_range;
  OracleRecord oracle;
  std::optional<SequenceRecord> sequence;
  std::optional<SequenceRecord> converse;
  std::vector<TrackRecord> incomplete_tracks;
  std::vector<CheckRecord> checks;
  std::vector<SeriesRecord> series;
  int exit_code = 0;
  bool operator==(const Report&) const = default;
};

std::string status_name(CheckStatus s);

/// JSON text of the report. Infinite and NaN reals are written as the strings
/// "inf", "-inf" and "nan"; complex numbers as [re, im].
std::string emit_json(const Report& r);
/// Inverse of emit_json. Throws std::runtime_error on schema violations.
Report parse_json(const std::string& text);

/// Writes "n,value,reference" with %.17g values.
void write_csv(const std::filesystem::path& path, const SeriesRecord& s);

}  // namespace hpade::cli
