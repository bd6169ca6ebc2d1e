#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpade/analysis.hpp"
#include "hpade/functions.hpp"
#include "hpade/geometry.hpp"

namespace hpade::cli {

/// Invalid or unreadable experiment configuration. The message names the
/// offending field and, when known, its line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Check { rate, rho0, approx, derivative, incomplete, independence };

std::string check_name(Check c);

struct IncompleteSpec {
  int m = 0;
  int m_star = 0;
  std::size_t function = 0;
  std::vector<cplx> references;
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  GeometrySpec geometry = GeometrySpec::disk(0.0, 1.0);
  NodeTable::Scheme scheme = RepeatedPoint{0.0};
  std::vector<FunctionModel> functions;
  std::vector<int> multi_index;
  int n_lo = 0;
  int n_hi = 0;
  std::vector<Probe> probes;
  std::vector<Check> checks;
  std::optional<IncompleteSpec> incomplete;
  std::filesystem::path output_dir;

  NodeTable table() const { return NodeTable(geometry, scheme); }
  SystemModel system() const { return SystemModel(functions, multi_index, geometry, table()); }
  bool enabled(Check c) const;
};

/// Parses and validates a TOML experiment description. Relative output
/// directories are resolved against the config file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view text, const std::string& source = "config");

struct ExampleEntry {
  std::filesystem::path path;
  std::string name;
  std::string description;
};

/// Configs in the bundled directory, then in the custom one. Unreadable files
/// and missing directories produce a line in warnings and are skipped.
std::vector<ExampleEntry> list_examples(const std::filesystem::path& bundled,
                                        const std::optional<std::filesystem::path>& custom,
                                        std::vector<std::string>& warnings);

}  // namespace hpade::cli
