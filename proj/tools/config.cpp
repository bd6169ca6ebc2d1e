#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#define TOML_ENABLE_FORMATTERS 0
#include "toml.hpp"

#include "hpade/errors.hpp"

namespace hpade::cli {

namespace {

[[noreturn]] void fail(const std::string& field, const toml::node* node, const std::string& what) {
  std::string where = "field '" + field + "'";
  if (node != nullptr && node->source().begin.line > 0) where += " (line " + std::to_string(node->source().begin.line) + ")";
  throw ConfigError(where + ": " + what);
}

const toml::node* require(const toml::table& t, const std::string& key, const std::string& path) {
  const toml::node* n = t.get(key);
  if (n == nullptr) throw ConfigError("field '" + path + "': missing");
  return n;
}

double as_real(const toml::node* n, const std::string& path) {
  if (auto v = n->value<double>()) return *v;
  fail(path, n, "expected a number");
}

int as_int(const toml::node* n, const std::string& path) {
  if (!n->is_integer()) fail(path, n, "expected an integer");
  return static_cast<int>(n->as_integer()->get());
}

std::string as_string(const toml::node* n, const std::string& path) {
  if (!n->is_string()) fail(path, n, "expected a string");
  return n->as_string()->get();
}

/// [re, im] or a plain real number.
cplx as_complex(const toml::node* n, const std::string& path) {
  if (n->is_number()) return as_real(n, path);
  const toml::array* a = n->as_array();
  if (a == nullptr || a->size() != 2) fail(path, n, "expected a complex number [re, im]");
  return {as_real(a->get(0), path + "[0]"), as_real(a->get(1), path + "[1]")};
}

const toml::array& as_array(const toml::node* n, const std::string& path) {
  if (!n->is_array()) fail(path, n, "expected an array");
  return *n->as_array();
}

const toml::table& as_table(const toml::node* n, const std::string& path) {
  if (!n->is_table()) fail(path, n, "expected a table");
  return *n->as_table();
}

std::vector<cplx> complex_list(const toml::node* n, const std::string& path) {
  std::vector<cplx> out;
  const toml::array& a = as_array(n, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_complex(a.get(i), path + "[" + std::to_string(i) + "]"));
  return out;
}

cplx complex_or(const toml::table& t, const std::string& key, const std::string& path, cplx fallback) {
  const toml::node* n = t.get(key);
  return n == nullptr ? fallback : as_complex(n, path + "." + key);
}

/// Runs a library constructor and reports its validation error against the field.
template <class F>
auto validated(const std::string& path, const toml::node* node, F&& make) {
  try {
    return make();
  } catch (const hpade::Error& e) {
    fail(path, node, e.what());
  }
}

GeometrySpec parse_geometry(const toml::table& t, const toml::node* node) {
  const std::string kind = as_string(require(t, "kind", "geometry.kind"), "geometry.kind");
  return validated("geometry", node, [&] {
    if (kind == "disk")
      return GeometrySpec::disk(complex_or(t, "center", "geometry", 0.0),
                                as_real(require(t, "radius", "geometry.radius"), "geometry.radius"));
    if (kind == "segment")
      return GeometrySpec::segment(as_complex(require(t, "a", "geometry.a"), "geometry.a"),
                                   as_complex(require(t, "b", "geometry.b"), "geometry.b"));
    if (kind == "ellipse") {
      const toml::node* rot = t.get("rotation");
      return GeometrySpec::ellipse(complex_or(t, "center", "geometry", 0.0),
                                   as_real(require(t, "semi_major", "geometry.semi_major"), "geometry.semi_major"),
                                   as_real(require(t, "semi_minor", "geometry.semi_minor"), "geometry.semi_minor"),
                                   rot ? as_real(rot, "geometry.rotation") : 0.0);
    }
    fail("geometry.kind", t.get("kind"), "unknown kind '" + kind + "' (disk, segment, ellipse)");
  });
}

NodeTable::Scheme parse_scheme(const toml::table& t) {
  const std::string scheme = as_string(require(t, "scheme", "table.scheme"), "table.scheme");
  if (scheme == "repeated_point") return RepeatedPoint{complex_or(t, "point", "table", 0.0)};
  if (scheme == "chebyshev") return ChebyshevNodes{};
  if (scheme == "fejer") return FejerNodes{};
  fail("table.scheme", t.get("scheme"), "unknown scheme '" + scheme + "' (repeated_point, chebyshev, fejer)");
}

Term parse_term(const toml::table& t, const std::string& path, const toml::node* node) {
  const std::string kind = as_string(require(t, "kind", path + ".kind"), path + ".kind");
  const cplx scale = complex_or(t, "scale", path, 1.0);
  if (kind == "rational") {
    const toml::node* num = t.get("numerator");
    ComplexPolynomial numerator = num ? ComplexPolynomial(complex_list(num, path + ".numerator")) : ComplexPolynomial{1.0};
    numerator *= scale;
    if (const toml::node* poles = t.get("poles")) {
      if (t.get("denominator")) fail(path, node, "give either poles or denominator, not both");
      std::vector<cplx> ps = complex_list(poles, path + ".poles");
      if (ps.empty()) fail(path + ".poles", poles, "needs at least one pole");
      return RationalTerm::from_poles(numerator, std::move(ps));
    }
    const toml::node* den = t.get("denominator");
    if (den == nullptr) fail(path, node, "rational term needs poles or denominator");
    const ComplexPolynomial d(complex_list(den, path + ".denominator"));
    return validated(path + ".denominator", den, [&] { return RationalTerm(numerator, d); });
  }
  if (kind == "sqrt") return SqrtBranchTerm{as_complex(require(t, "branch_at", path + ".branch_at"), path + ".branch_at"), scale};
  if (kind == "log") return LogBranchTerm{as_complex(require(t, "branch_at", path + ".branch_at"), path + ".branch_at"), scale};
  if (kind == "exp") return EntireExpTerm{scale};
  fail(path + ".kind", t.get("kind"), "unknown term kind '" + kind + "' (rational, sqrt, log, exp)");
}

Probe parse_probe(const toml::table& t, const std::string& path) {
  const std::string kind = as_string(require(t, "kind", path + ".kind"), path + ".kind");
  Probe p;
  if (kind == "grid_in_e") {
    p.kind = Probe::Kind::grid_in_e;
  } else if (kind == "level_curve") {
    p.kind = Probe::Kind::level_curve;
    p.rho = as_real(require(t, "rho", path + ".rho"), path + ".rho");
    if (!(p.rho > 1.0)) fail(path + ".rho", t.get("rho"), "must exceed 1");
  } else if (kind == "disk_grid") {
    p.kind = Probe::Kind::disk_grid;
    p.center = as_complex(require(t, "center", path + ".center"), path + ".center");
    p.radius = as_real(require(t, "radius", path + ".radius"), path + ".radius");
    p.step = as_real(require(t, "step", path + ".step"), path + ".step");
    if (!(p.radius > 0.0)) fail(path + ".radius", t.get("radius"), "must be positive");
    if (!(p.step > 0.0)) fail(path + ".step", t.get("step"), "must be positive");
  } else {
    fail(path + ".kind", t.get("kind"), "unknown probe '" + kind + "' (grid_in_e, level_curve, disk_grid)");
  }
  return p;
}

Check parse_check(const toml::node* n, const std::string& path) {
  const std::string s = as_string(n, path);
  for (const Check c : {Check::rate, Check::rho0, Check::approx, Check::derivative, Check::incomplete, Check::independence})
    if (check_name(c) == s) return c;
  fail(path, n, "unknown check '" + s + "' (rate, rho0, approx, derivative, incomplete, independence)");
}

ExperimentConfig build(const toml::table& root) {
  ExperimentConfig cfg;
  cfg.name = as_string(require(root, "name", "name"), "name");
  if (const toml::node* d = root.get("description")) cfg.description = as_string(d, "description");

  const toml::node* geo = require(root, "geometry", "geometry");
  cfg.geometry = parse_geometry(as_table(geo, "geometry"), geo);
  const toml::node* tab = require(root, "table", "table");
  cfg.scheme = parse_scheme(as_table(tab, "table"));
  validated("table", tab, [&] { return cfg.table(); });

  const toml::node* fns = require(root, "functions", "functions");
  const toml::array& fa = as_array(fns, "functions");
  if (fa.empty()) fail("functions", fns, "needs at least one function");
  for (std::size_t k = 0; k < fa.size(); ++k) {
    const std::string fpath = "functions[" + std::to_string(k) + "]";
    const toml::table& ft = as_table(fa.get(k), fpath);
    const toml::node* terms = require(ft, "terms", fpath + ".terms");
    const toml::array& ta = as_array(terms, fpath + ".terms");
    if (ta.empty()) fail(fpath + ".terms", terms, "needs at least one term");
    std::vector<Term> parsed;
    for (std::size_t i = 0; i < ta.size(); ++i) {
      const std::string tpath = fpath + ".terms[" + std::to_string(i) + "]";
      parsed.push_back(parse_term(as_table(ta.get(i), tpath), tpath, ta.get(i)));
    }
    cfg.functions.push_back(validated(fpath, fa.get(k), [&] { return FunctionModel(std::move(parsed)); }));
  }

  const toml::node* mi = require(root, "multi_index", "multi_index");
  const toml::array& ma = as_array(mi, "multi_index");
  for (std::size_t k = 0; k < ma.size(); ++k) {
    const std::string path = "multi_index[" + std::to_string(k) + "]";
    const int m = as_int(ma.get(k), path);
    if (m < 1) fail(path, ma.get(k), "must be >= 1");
    cfg.multi_index.push_back(m);
  }
  if (cfg.multi_index.size() != cfg.functions.size())
    fail("multi_index", mi, "needs one entry per function (" + std::to_string(cfg.functions.size()) + ")");

  const toml::node* nr = require(root, "n_range", "n_range");
  const toml::array& na = as_array(nr, "n_range");
  if (na.size() != 2) fail("n_range", nr, "expected [lo, hi]");
  cfg.n_lo = as_int(na.get(0), "n_range[0]");
  cfg.n_hi = as_int(na.get(1), "n_range[1]");
  int total = 0;
  for (const int m : cfg.multi_index) total += m;
  if (cfg.n_lo < total) fail("n_range[0]", na.get(0), "must be >= |m| = " + std::to_string(total));
  if (cfg.n_hi < cfg.n_lo) fail("n_range[1]", na.get(1), "must be >= n_range[0]");

  validated("functions", fns, [&] { return cfg.system(); });

  if (const toml::node* pr = root.get("probes")) {
    const toml::array& pa = as_array(pr, "probes");
    for (std::size_t i = 0; i < pa.size(); ++i) {
      const std::string path = "probes[" + std::to_string(i) + "]";
      cfg.probes.push_back(parse_probe(as_table(pa.get(i), path), path));
    }
  }

  const toml::node* ch = require(root, "checks", "checks");
  const toml::array& ca = as_array(ch, "checks");
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const Check c = parse_check(ca.get(i), "checks[" + std::to_string(i) + "]");
    if (!cfg.enabled(c)) cfg.checks.push_back(c);
  }
  if (cfg.enabled(Check::approx) && cfg.probes.empty()) fail("probes", ch, "the approx check needs at least one probe");

  if (const toml::node* inc = root.get("incomplete")) {
    const toml::table& it = as_table(inc, "incomplete");
    IncompleteSpec spec;
    spec.m = as_int(require(it, "m", "incomplete.m"), "incomplete.m");
    spec.m_star = as_int(require(it, "m_star", "incomplete.m_star"), "incomplete.m_star");
    if (const toml::node* f = it.get("function")) spec.function = static_cast<std::size_t>(as_int(f, "incomplete.function"));
    spec.references = complex_list(require(it, "references", "incomplete.references"), "incomplete.references");
    if (!(spec.m >= spec.m_star && spec.m_star >= 1)) fail("incomplete", inc, "requires m >= m_star >= 1");
    if (spec.function >= cfg.functions.size()) fail("incomplete.function", it.get("function"), "out of range");
    if (cfg.n_lo < spec.m) fail("n_range[0]", na.get(0), "must be >= incomplete.m");
    if (spec.references.empty()) fail("incomplete.references", it.get("references"), "needs at least one pole");
    cfg.incomplete = spec;
  }
  if (cfg.enabled(Check::incomplete) && !cfg.incomplete) fail("incomplete", ch, "the incomplete check needs an [incomplete] table");

  if (const toml::node* od = root.get("output_dir")) cfg.output_dir = as_string(od, "output_dir");
  return cfg;
}

}  // namespace

std::string check_name(Check c) {
  switch (c) {
    case Check::rate: return "rate";
    case Check::rho0: return "rho0";
    case Check::approx: return "approx";
    case Check::derivative: return "derivative";
    case Check::incomplete: return "incomplete";
    case Check::independence: return "independence";
  }
  return "unknown";
}

bool ExperimentConfig::enabled(Check c) const { return std::find(checks.begin(), checks.end(), c) != checks.end(); }

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ConfigError(source + " line " + std::to_string(e.source().begin.line) + ": " + std::string(e.description()));
  }
  return build(root);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_config(buf.str(), path.string());
  if (cfg.output_dir.empty()) cfg.output_dir = std::filesystem::path("out") / cfg.name;
  if (cfg.output_dir.is_relative()) cfg.output_dir = path.parent_path() / cfg.output_dir;
  return cfg;
}

std::vector<ExampleEntry> list_examples(const std::filesystem::path& bundled,
                                        const std::optional<std::filesystem::path>& custom,
                                        std::vector<std::string>& warnings) {
  std::vector<ExampleEntry> out;
  auto scan = [&](const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
      warnings.push_back("examples directory " + dir.string() + " is not readable");
      return;
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
      if (entry.path().extension() == ".toml") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        const ExperimentConfig cfg = load_config(f);
        out.push_back({f, cfg.name, cfg.description});
      } catch (const ConfigError& e) {
        warnings.push_back("skipping " + f.string() + ": " + e.what());
      }
    }
  };
  scan(bundled);
  if (custom) scan(*custom);
  return out;
}

}  // namespace hpade::cli
