#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "doctest.h"
#include "plot.hpp"
#include "report.hpp"
#include "runner.hpp"

using namespace hpade;
using namespace hpade::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = HPADE_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hpade_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_quiet(const fs::path& config, const RunOptions& opts, std::string* errors = nullptr) {
  std::ostringstream out, err;
  const int code = run(config, opts, out, err);
  if (errors) *errors = err.str();
  return code;
}

const CheckRecord* find_check(const Report& r, const std::string& name) {
  for (const CheckRecord& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

const std::string kMinimal = R"(
name = "minimal"
multi_index = [1]
n_range = [2, 12]
checks = ["rate"]

[geometry]
kind = "disk"
radius = 0.5

[table]
scheme = "repeated_point"

[[functions]]
[[functions.terms]]
kind = "rational"
poles = [[1.0, 0.0]]
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("geometric config: exit 0 and the exact flag") {
  const fs::path out = scratch("geometric");
  RunOptions opts;
  opts.output_dir = out;
  CHECK(run_quiet(kConfigs / "geometric.toml", opts) == kPass);
  const Report r = parse_json(slurp(out / "report.json"));
  REQUIRE(r.sequence);
  REQUIRE(r.sequence->fit);
  CHECK(r.sequence->fit->exact);
  const CheckRecord* rate = find_check(r, "rate");
  REQUIRE(rate != nullptr);
  CHECK(rate->status == CheckStatus::pass);
  CHECK(rate->message == "exact");
  CHECK(r.exit_code == kPass);
}

TEST_CASE("pole-branch config: exit 0 with theta in the band") {
  const fs::path out = scratch("pole_branch");
  RunOptions opts;
  opts.output_dir = out;
  CHECK(run_quiet(kConfigs / "pole_branch.toml", opts) == kPass);
  const Report r = parse_json(slurp(out / "report.json"));
  REQUIRE(r.sequence);
  CHECK(r.sequence->fitted_theta >= 0.28);
  CHECK(r.sequence->fitted_theta <= 0.39);
  REQUIRE(r.oracle.predicted_theta);
  CHECK(*r.oracle.predicted_theta == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  for (const char* f : {"rate.csv", "rate.svg", "rho0.csv", "approx_f0_grid_in_e.csv", "derivative_p0_j0.csv"})
    CHECK(fs::exists(out / f));
  CHECK(slurp(out / "rate.csv").rfind("n,value,reference\n", 0) == 0);
}

TEST_CASE("bundled configs all validate") {
  for (const char* name : {"geometric.toml", "pole_branch.toml", "two_functions.toml"}) {
    const ExperimentConfig cfg = load_config(kConfigs / name);
    CHECK(!cfg.name.empty());
    CHECK(!cfg.description.empty());
    CHECK_NOTHROW(cfg.system());
  }
}

TEST_CASE("malformed multi_index: configuration error naming the field") {
  const std::string bad = replace(kMinimal, "multi_index = [1]", "multi_index = [0]");
  try {
    parse_config(bad);
    FAIL("accepted m_k = 0");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("multi_index") != std::string::npos);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  const fs::path dir = scratch("bad_config");
  std::ofstream(dir / "bad.toml") << bad;
  std::string err;
  CHECK(run_quiet(dir / "bad.toml", {}, &err) == kConfigError);
  CHECK(err.find("multi_index") != std::string::npos);
  CHECK(!fs::exists(dir / "out"));
}

TEST_CASE("other validation errors") {
  CHECK_NOTHROW(parse_config(kMinimal));
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(replace(kMinimal, "n_range = [2, 12]", "n_range = [0, 12]")).find("n_range[0]") != std::string::npos);
  CHECK(message(replace(kMinimal, "n_range = [2, 12]", "n_range = [5, 4]")).find("n_range[1]") != std::string::npos);
  CHECK(message(replace(kMinimal, "kind = \"disk\"", "kind = \"square\"")).find("geometry.kind") != std::string::npos);
  CHECK(message(replace(kMinimal, "radius = 0.5", "radius = -0.5")).find("geometry") != std::string::npos);
  CHECK(message(replace(kMinimal, "\"rate\"", "\"speed\"")).find("checks[0]") != std::string::npos);
  CHECK(message(replace(kMinimal, "multi_index = [1]", "multi_index = [1, 1]")).find("multi_index") != std::string::npos);
  CHECK(message(replace(kMinimal, "poles = [[1.0, 0.0]]", "poles = [[0.2, 0.0]]")).find("functions") != std::string::npos);
  CHECK(message(replace(kMinimal, "poles = [[1.0, 0.0]]", "poles = [[1.0, 0.0, 2.0]]")).find("functions[0].terms[0].poles[0]") !=
        std::string::npos);
  CHECK(message(replace(kMinimal, "\"rate\"", "\"approx\"")).find("probes") != std::string::npos);
  CHECK(message(replace(kMinimal, "\"rate\"", "\"incomplete\"")).find("incomplete") != std::string::npos);
  CHECK(message(replace(kMinimal, "name = \"minimal\"", "name = ")).find("line 2") != std::string::npos);
  CHECK(message(replace(kMinimal, "name = \"minimal\"\n", "")).find("'name'") != std::string::npos);
}

TEST_CASE("complex numbers as pairs or plain reals") {
  const ExperimentConfig a = parse_config(kMinimal);
  const ExperimentConfig b = parse_config(replace(kMinimal, "poles = [[1.0, 0.0]]", "poles = [1]"));
  CHECK(a.functions[0].singularities()[0].location == b.functions[0].singularities()[0].location);
  const ExperimentConfig c = parse_config(replace(kMinimal, "poles = [[1.0, 0.0]]", "poles = [[0.0, 2.0]]"));
  CHECK(c.functions[0].singularities()[0].location == cplx(0.0, 2.0));
}

TEST_CASE("report.json round-trips") {
  const Report r = run_checks(load_config(kConfigs / "pole_branch.toml"));
  const Report back = parse_json(emit_json(r));
  CHECK(back == r);
  CHECK(emit_json(back) == emit_json(r));

  // infinities survive as strings
  Report inf = r;
  inf.oracle.poles.at(0).R_xi = kInfinity;
  inf.checks.at(0).predicted = -kInfinity;
  CHECK(parse_json(emit_json(inf)) == inf);
  CHECK(emit_json(inf).find("\"inf\"") != std::string::npos);

  CHECK_THROWS_AS(parse_json("{"), std::runtime_error);
  CHECK_THROWS_AS(parse_json("{\"name\": \"x\"}"), std::runtime_error);
}

TEST_CASE("two runs write byte-identical CSV files") {
  const fs::path a = scratch("determinism_a"), b = scratch("determinism_b");
  RunOptions oa, ob;
  oa.output_dir = a;
  ob.output_dir = b;
  REQUIRE(run_quiet(kConfigs / "pole_branch.toml", oa) == kPass);
  REQUIRE(run_quiet(kConfigs / "pole_branch.toml", ob) == kPass);
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }
  CHECK(files >= 4);
}

TEST_CASE("overrides: n-max and json-only") {
  const fs::path out = scratch("overrides");
  RunOptions opts;
  opts.output_dir = out;
  opts.n_max = 16;
  opts.json_only = true;
  CHECK(run_quiet(kConfigs / "geometric.toml", opts) == kPass);
  const Report r = parse_json(slurp(out / "report.json"));
  CHECK(r.n_range == std::vector<int>{1, 16});
  for (const auto& entry : fs::directory_iterator(out)) CHECK(entry.path().extension() != ".svg");

  opts.n_max = 0;
  CHECK(run_quiet(kConfigs / "geometric.toml", opts) == kConfigError);
}

TEST_CASE("too few system poles: the rate check runs the converse probe") {
  const std::string text = replace(replace(kMinimal, "kind = \"rational\"\npoles = [[1.0, 0.0]]", "kind = \"sqrt\"\nbranch_at = 3.0"),
                                   "n_range = [2, 12]", "n_range = [6, 24]");
  const Report r = run_checks(parse_config(text));
  CHECK(!r.oracle.predicted_theta);
  CHECK(r.oracle.total_order == 0);
  CHECK(r.converse);
  CHECK(!r.sequence);
  const CheckRecord* rate = find_check(r, "rate");
  REQUIRE(rate != nullptr);
  CHECK(rate->message.find("pole count incomplete") != std::string::npos);
  CHECK(rate->status != CheckStatus::error);
  CHECK(r.exit_code == (rate->status == CheckStatus::pass ? kPass : kCheckFailure));
}

TEST_CASE("dependent system: the independence check fails with exit 1") {
  std::string text = replace(kMinimal, "multi_index = [1]", "multi_index = [1, 1]");
  text = replace(text, "checks = [\"rate\"]", "checks = [\"independence\"]");
  text += "\n[[functions]]\n[[functions.terms]]\nkind = \"rational\"\nnumerator = [2.0]\npoles = [1.0]\n";
  const Report r = run_checks(parse_config(text));
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].status == CheckStatus::fail);
  CHECK(r.exit_code == kCheckFailure);
}

TEST_CASE("incomplete check captures the pole at 1") {
  std::string text = replace(kMinimal, "checks = [\"rate\"]", "checks = [\"incomplete\"]");
  text = replace(text, "n_range = [2, 12]", "n_range = [6, 24]");
  text += "\n[[functions.terms]]\nkind = \"sqrt\"\nbranch_at = 3.0\n";
  text += "\n[incomplete]\nm = 2\nm_star = 1\nreferences = [1.0]\n";
  const Report r = run_checks(parse_config(text));
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].status == CheckStatus::pass);
  CHECK(r.incomplete_tracks.size() == 2);
}

TEST_CASE("list-examples") {
  std::vector<std::string> warnings;
  const auto bundled = list_examples(kConfigs, std::nullopt, warnings);
  CHECK(bundled.size() == 3);
  CHECK(warnings.empty());
  for (const auto& e : bundled) CHECK(!e.description.empty());

  const fs::path empty = scratch("examples_empty");
  CHECK(list_examples(kConfigs, empty, warnings).size() == 3);
  CHECK(warnings.empty());

  const fs::path corrupt = scratch("examples_corrupt");
  std::ofstream(corrupt / "broken.toml") << "name = [unterminated\n";
  std::ofstream(corrupt / "good.toml") << kMinimal;
  const auto listed = list_examples(kConfigs, corrupt, warnings);
  CHECK(listed.size() == 4);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("broken.toml") != std::string::npos);

  warnings.clear();
  CHECK(list_examples(kConfigs, corrupt / "missing", warnings).size() == 3);
  CHECK(warnings.size() == 1);
}

TEST_CASE("SVG plot") {
  SeriesRecord s{"rate", {1, 2, 3, 4}, {1e-1, 1e-2, 1e-3, 0.0}, {1e-1, 1e-2, 1e-3, 1e-4}, 0.1};
  const std::string svg = render_svg(s, "a < b");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("a &lt; b") != std::string::npos);
  CHECK(svg.find("predicted slope") != std::string::npos);
  s.predicted_rate.reset();
  CHECK(render_svg(s, "t").find("predicted slope") == std::string::npos);
}
