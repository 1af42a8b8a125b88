#include "berrylab/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "berrylab/errors.hpp"

namespace berrylab {

namespace {

enum class ValueType { Int, UInt, Double, Bool, Enum, DoubleList, PointList, Text };

struct KeySpec {
  const char* section;
  const char* name;
  ValueType type;
  const char* fallback;
  const char* help;
  std::vector<std::string> options = {};
};

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"experiment", "kind", ValueType::Enum, "", "experiment to run (required)",
       {"berry-expectation-test", "marginal-distribution-test", "covariance-profile-test",
        "translation-invariance-test", "inverse-localize", "il-scan", "strong-il-measure-estimate"}},
      {"experiment", "seed", ValueType::UInt, "1", "master seed"},
      {"experiment", "confidence", ValueType::Double, "0.99", "confidence level of every reported radius"},
      {"experiment", "point", ValueType::DoubleList, "", "marginal probe point y (default origin)"},
      {"experiment", "separations", ValueType::DoubleList, "0,0.25,0.5,0.75,1,1.25,1.5,1.75,2,2.5,3,3.5,4",
       "covariance separations r"},
      {"experiment", "direction", ValueType::DoubleList, "", "covariance direction (default e1)"},
      {"experiment", "shift", ValueType::DoubleList, "", "translation shift y (default 0.5 e1)"},
      {"experiment", "epsilon", ValueType::Double, "0.5", "strong-IL ball radius"},
      {"experiment", "order", ValueType::Int, "1", "C^r order of inverse-localization errors"},
      {"experiment", "base_point", ValueType::DoubleList, "",
       "inverse-localization base point (torus coordinates or unit 3-vector; default origin / north pole)"},
      {"experiment", "control", ValueType::Bool, "false", "add a Berry-sampler control row"},
      {"experiment", "control_samples", ValueType::UInt, "2000", "strong-IL control draws"},
      {"manifold", "kind", ValueType::Enum, "torus", "manifold", {"torus", "sphere"}},
      {"manifold", "sides", ValueType::DoubleList, "1,1", "torus side lengths"},
      {"manifold", "irrational", ValueType::Bool, "false", "declared irrational torus"},
      {"sequence", "source", ValueType::Enum, "eigenfunctions",
       "population: eigenfunction localizations or Berry sampler draws", {"eigenfunctions", "berry"}},
      {"sequence", "eigenvalues", ValueType::DoubleList, "", "explicit eigenvalues"},
      {"sequence", "max_eigenvalue", ValueType::Double, "0", "every eigenvalue up to this bound"},
      {"sequence", "rule", ValueType::Enum, "random", "coefficient rule", {"random", "deterministic"}},
      {"sequence", "coefficient_seed", ValueType::UInt, "1", "seed of random coefficients"},
      {"sequence", "mode_index", ValueType::Int, "0", "basis index of the deterministic rule"},
      {"sampling", "policy", ValueType::Enum, "monte-carlo", "base-point policy", {"monte-carlo", "quadrature"}},
      {"sampling", "base_points", ValueType::UInt, "1000", "Monte Carlo base points M (sampler draws when source = berry)"},
      {"sampling", "chart", ValueType::Int, "-1", "restrict to one chart (-1: whole manifold)"},
      {"sampling", "quadrature_nodes", ValueType::Int, "32", "quadrature nodes per axis"},
      {"sampler", "kind", ValueType::Enum, "plane-wave", "Berry sampler", {"plane-wave", "bessel-fourier"}},
      {"sampler", "directions", ValueType::Int, "256", "plane-wave directions K"},
      {"sampler", "degree_cap", ValueType::Int, "16", "Bessel-Fourier degree cap"},
      {"sampler", "samples", ValueType::UInt, "1000", "Berry reference draws M'"},
      {"grid", "radius", ValueType::Double, "1", "ball radius R"},
      {"grid", "resolution", ValueType::Int, "33", "lattice points per axis"},
      {"grid", "order", ValueType::Int, "2", "derivative order sampled"},
      {"functional", "kind", ValueType::Enum, "moment", "test functional",
       {"point-eval", "moment", "pair-product", "chi-norm", "nodal-count"}},
      {"functional", "points", ValueType::PointList, "0,0", "probe points, ';' separated"},
      {"functional", "power", ValueType::Int, "2", "moment power k"},
      {"functional", "order", ValueType::Int, "1", "chi-norm C^r order"},
      {"functional", "epsilon", ValueType::Double, "0.5", "chi-norm cutoff"},
      {"functional", "radius", ValueType::Double, "1", "chi-norm ball radius"},
      {"functional", "threshold", ValueType::Double, "0", "nodal-count level"},
      {"target", "kind", ValueType::Enum, "radial", "target field h",
       {"radial", "harmonic", "plane-wave", "eigenfunction"}},
      {"target", "degree", ValueType::Int, "0", "harmonic degree l"},
      {"target", "index", ValueType::Int, "1", "harmonic index m (1-based)"},
      {"target", "scale", ValueType::Double, "1", "amplitude"},
      {"target", "direction", ValueType::DoubleList, "", "plane-wave direction (default e1)"},
      {"target", "phase", ValueType::Double, "0", "plane-wave phase"},
      {"target", "degree_cap", ValueType::Int, "16", "plane-wave expansion degree cap"},
      {"target", "normalize", ValueType::Bool, "false", "rescale to unit C^r norm on the grid"},
      {"frechet", "enabled", ValueType::Bool, "false", "report the Frechet distance of IL minimizers"},
      {"frechet", "kmax", ValueType::Int, "8", "derivative orders in the series"},
      {"frechet", "nmax", ValueType::Int, "6", "radii in the series"},
      {"frechet", "spacing", ValueType::Double, "0.0625", "sampling lattice spacing"},
      {"output", "directory", ValueType::Text, "out", "output directory (--out-dir overrides)"},
  };
  return keys;
}

const KeySpec* find_key(const std::string& section, const std::string& name) {
  for (const KeySpec& k : schema()) {
    if (section == k.section && name == k.name) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size() && std::isfinite(out);
}

bool parse_int(const std::string& s, long long& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

bool parse_uint(const std::string& s, std::uint64_t& out) {
  const std::string t = trim(s);
  if (t.empty() || t[0] == '-') return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// Normalized form of a raw value, or an error message.
bool normalize(const KeySpec& key, const std::string& raw, std::string& out, std::string& error) {
  const std::string v = trim(raw);
  switch (key.type) {
    case ValueType::Int: {
      long long x = 0;
      if (!parse_int(v, x)) {
        error = "expected an integer, got '" + v + "'";
        return false;
      }
      out = std::to_string(x);
      return true;
    }
    case ValueType::UInt: {
      std::uint64_t x = 0;
      if (!parse_uint(v, x)) {
        error = "expected a nonnegative integer, got '" + v + "'";
        return false;
      }
      out = std::to_string(x);
      return true;
    }
    case ValueType::Double: {
      double x = 0.0;
      if (!parse_double(v, x)) {
        error = "expected a finite number, got '" + v + "'";
        return false;
      }
      out = format_double(x);
      return true;
    }
    case ValueType::Bool: {
      const std::string l = lower(v);
      if (l == "true" || l == "yes" || l == "1" || l == "on") {
        out = "true";
      } else if (l == "false" || l == "no" || l == "0" || l == "off") {
        out = "false";
      } else {
        error = "expected true or false, got '" + v + "'";
        return false;
      }
      return true;
    }
    case ValueType::Enum: {
      const std::string l = lower(v);
      if (std::find(key.options.begin(), key.options.end(), l) == key.options.end()) {
        std::string opts;
        for (const auto& o : key.options) opts += (opts.empty() ? "" : "|") + o;
        error = "expected one of " + opts + ", got '" + v + "'";
        return false;
      }
      out = l;
      return true;
    }
    case ValueType::DoubleList: {
      out.clear();
      if (v.empty()) return true;
      for (const std::string& part : split(v, ',')) {
        double x = 0.0;
        if (!parse_double(part, x)) {
          error = "expected comma-separated numbers, got '" + v + "'";
          return false;
        }
        out += (out.empty() ? "" : ",") + format_double(x);
      }
      return true;
    }
    case ValueType::Text:
      if (v.empty()) {
        error = "must not be empty";
        return false;
      }
      out = v;
      return true;
    case ValueType::PointList: {
      out.clear();
      if (v.empty()) return true;
      bool first = true;
      for (const std::string& point : split(v, ';')) {
        std::string norm;
        const KeySpec list{key.section, key.name, ValueType::DoubleList, "", ""};
        if (point.empty() || !normalize(list, point, norm, error)) {
          error = "expected ';'-separated points of comma-separated numbers, got '" + v + "'";
          return false;
        }
        out += (first ? "" : ";") + norm;
        first = false;
      }
      return true;
    }
  }
  return false;
}

std::vector<double> as_list(const std::string& v) {
  std::vector<double> out;
  if (v.empty()) return out;
  for (const std::string& p : split(v, ',')) {
    double x = 0.0;
    parse_double(p, x);
    out.push_back(x);
  }
  return out;
}

double as_double(const std::string& v) {
  double x = 0.0;
  parse_double(v, x);
  return x;
}

long long as_int(const std::string& v) {
  long long x = 0;
  parse_int(v, x);
  return x;
}

std::uint64_t as_uint(const std::string& v) {
  std::uint64_t x = 0;
  parse_uint(v, x);
  return x;
}

class Builder {
 public:
  Builder(const std::map<std::string, std::string>& values, std::vector<std::string>& errors)
      : values_(values), errors_(errors) {}

  const std::string& raw(const std::string& key) const { return values_.at(key); }
  double real(const std::string& key) const { return as_double(raw(key)); }
  bool flag(const std::string& key) const { return raw(key) == "true"; }
  std::vector<double> list(const std::string& key) const { return as_list(raw(key)); }

  int integer(const std::string& key, long long lo, long long hi) {
    const long long v = as_int(raw(key));
    if (v < lo || v > hi) {
      fail(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(v));
      return static_cast<int>(std::clamp(v, lo, hi));
    }
    return static_cast<int>(v);
  }

  std::uint64_t count(const std::string& key, std::uint64_t lo) {
    const std::uint64_t v = as_uint(raw(key));
    if (v < lo) fail(key, "must be at least " + std::to_string(lo) + ", got " + std::to_string(v));
    return v;
  }

  double positive(const std::string& key) {
    const double v = real(key);
    if (!(v > 0.0)) fail(key, "must be positive, got " + raw(key));
    return v;
  }

  Point point(const std::string& key, int dim, const Point& fallback) {
    const std::vector<double> v = list(key);
    if (v.empty()) return fallback;
    if (static_cast<int>(v.size()) != dim) {
      fail(key, "needs " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
      return fallback;
    }
    Point p{};
    std::copy(v.begin(), v.end(), p.begin());
    return p;
  }

  void fail(const std::string& key, const std::string& message) { errors_.push_back(key + ": " + message); }

 private:
  const std::map<std::string, std::string>& values_;
  std::vector<std::string>& errors_;
};

std::string render_canonical(const std::map<std::string, std::string>& values) {
  std::ostringstream os;
  std::string section;
  for (const KeySpec& k : schema()) {
    if (section != k.section) {
      if (!section.empty()) os << "\n";
      section = k.section;
      os << "[" << section << "]\n";
    }
    os << k.name << " = " << values.at(std::string(k.section) + "." + k.name) << "\n";
  }
  return os.str();
}

void build_typed(ExperimentConfig& c, const std::map<std::string, std::string>& values,
                 std::vector<std::string>& errors) {
  Builder b(values, errors);
  c.kind = *experiment_from_name(b.raw("experiment.kind"));
  c.seed = as_uint(b.raw("experiment.seed"));
  c.confidence = b.real("experiment.confidence");
  if (!(c.confidence > 0.0 && c.confidence < 1.0)) b.fail("experiment.confidence", "must lie in (0, 1)");

  if (b.raw("manifold.kind") == "sphere") {
    c.sequence.manifold = ManifoldSpec::sphere();
  } else {
    const std::vector<double> sides = b.list("manifold.sides");
    bool ok = sides.size() == 2 || sides.size() == 3;
    if (!ok) b.fail("manifold.sides", "a torus needs 2 or 3 side lengths");
    for (double a : sides) {
      if (!(a > 0.0)) {
        b.fail("manifold.sides", "side lengths must be positive");
        ok = false;
        break;
      }
    }
    c.sequence.manifold = ok ? ManifoldSpec::torus(sides, b.flag("manifold.irrational"))
                             : ManifoldSpec::torus({1.0, 1.0}, b.flag("manifold.irrational"));
  }
  const int d = c.sequence.manifold.dimension();

  c.berry_source = b.raw("sequence.source") == "berry";
  c.sequence.eigenvalues = b.list("sequence.eigenvalues");
  for (double l : c.sequence.eigenvalues) {
    if (!(l > 0.0)) b.fail("sequence.eigenvalues", "eigenvalues must be positive");
  }
  c.sequence.max_eigenvalue = b.real("sequence.max_eigenvalue");
  if (c.sequence.max_eigenvalue < 0.0) b.fail("sequence.max_eigenvalue", "must be nonnegative");
  if (!c.berry_source && c.sequence.eigenvalues.empty() && !(c.sequence.max_eigenvalue > 0.0)) {
    b.fail("sequence", "set eigenvalues or a positive max_eigenvalue");
  }
  c.sequence.rule = b.raw("sequence.rule") == "deterministic" ? CoefficientRule::Deterministic : CoefficientRule::Random;
  c.sequence.coefficient_seed = as_uint(b.raw("sequence.coefficient_seed"));
  c.sequence.mode_index = b.integer("sequence.mode_index", 0, 1LL << 30);

  c.sampling.policy = b.raw("sampling.policy") == "quadrature" ? BasePolicy::Quadrature : BasePolicy::MonteCarlo;
  c.sampling.base_points = b.count("sampling.base_points", 1);
  if (c.berry_source && c.kind != ExperimentKind::BerryExpectation && c.kind != ExperimentKind::Marginal &&
      c.kind != ExperimentKind::Covariance) {
    b.fail("sequence.source", std::string("berry is not available for ") + experiment_name(c.kind));
  }
  c.sampling.chart = b.integer("sampling.chart", -1, 1);
  c.sampling.quadrature_nodes = b.integer("sampling.quadrature_nodes", 1, 4096);

  c.sampler.kind = b.raw("sampler.kind") == "bessel-fourier" ? SamplerKind::BesselFourier : SamplerKind::PlaneWave;
  c.sampler.dimension = d;
  c.sampler.directions = b.integer("sampler.directions", 1, 1 << 20);
  c.sampler.degree_cap = b.integer("sampler.degree_cap", 0, 200);
  c.berry_samples = b.count("sampler.samples", 1);

  c.grid.dimension = d;
  c.grid.radius = b.positive("grid.radius");
  c.grid.resolution = b.integer("grid.resolution", kMinGridResolution, 1025);
  c.grid.order = b.integer("grid.order", 0, kMaxUserDerivativeOrder);

  static const std::map<std::string, FunctionalKind> functionals = {
      {"point-eval", FunctionalKind::PointEval}, {"moment", FunctionalKind::Moment},
      {"pair-product", FunctionalKind::PairProduct}, {"chi-norm", FunctionalKind::ChiNorm},
      {"nodal-count", FunctionalKind::NodalCount}};
  c.functional.kind = functionals.at(b.raw("functional.kind"));
  for (const std::string& p : split(b.raw("functional.points"), ';')) {
    if (p.empty()) continue;
    const std::vector<double> v = as_list(p);
    if (static_cast<int>(v.size()) != d) {
      b.fail("functional.points", "each point needs " + std::to_string(d) + " coordinates");
      break;
    }
    Point q{};
    std::copy(v.begin(), v.end(), q.begin());
    c.functional.points.push_back(q);
  }
  c.functional.power = b.integer("functional.power", 1, 8);
  c.functional.order = b.integer("functional.order", 0, kMaxUserDerivativeOrder);
  c.functional.epsilon = b.positive("functional.epsilon");
  c.functional.radius = b.positive("functional.radius");
  c.functional.threshold = b.real("functional.threshold");

  static const std::map<std::string, TargetKind> targets = {{"radial", TargetKind::Radial},
                                                            {"harmonic", TargetKind::Harmonic},
                                                            {"plane-wave", TargetKind::PlaneWave},
                                                            {"eigenfunction", TargetKind::Eigenfunction}};
  c.target.kind = targets.at(b.raw("target.kind"));
  c.target.degree = b.integer("target.degree", 0, 200);
  c.target.index = b.integer("target.index", 1, 1 << 20);
  c.target.scale = b.real("target.scale");
  c.target.direction = b.point("target.direction", d, Point{1.0, 0.0, 0.0});
  c.target.phase = b.real("target.phase");
  c.target.degree_cap = b.integer("target.degree_cap", 0, 200);
  c.target.normalize = b.flag("target.normalize");

  c.point = b.point("experiment.point", d, Point{});
  c.separations = b.list("experiment.separations");
  for (double r : c.separations) {
    if (r < 0.0) b.fail("experiment.separations", "separations must be nonnegative");
  }
  c.direction = b.point("experiment.direction", d, Point{1.0, 0.0, 0.0});
  c.shift = b.point("experiment.shift", d, Point{0.5, 0.0, 0.0});
  c.epsilon = b.positive("experiment.epsilon");
  c.order = b.integer("experiment.order", 0, kMaxUserDerivativeOrder);
  c.base_point = b.list("experiment.base_point");
  if (c.base_point.empty()) {
    if (c.sequence.manifold.kind == ManifoldKind::Sphere) {
      c.base_point = {0.0, 0.0, 1.0};
    } else {
      c.base_point.assign(static_cast<std::size_t>(d), 0.0);
    }
  } else if (static_cast<int>(c.base_point.size()) != c.sequence.manifold.ambient_dimension()) {
    b.fail("experiment.base_point", "needs " + std::to_string(c.sequence.manifold.ambient_dimension()) + " coordinates");
  }
  c.control = b.flag("experiment.control");
  c.control_samples = b.count("experiment.control_samples", 1);

  c.frechet = b.flag("frechet.enabled");
  c.frechet_params.kmax = b.integer("frechet.kmax", 1, 9);
  c.frechet_params.nmax = b.integer("frechet.nmax", 1, 9);
  c.frechet_params.spacing = b.positive("frechet.spacing");

  c.output_directory = b.raw("output.directory");
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BerryExpectation: return "berry-expectation-test";
    case ExperimentKind::Marginal: return "marginal-distribution-test";
    case ExperimentKind::Covariance: return "covariance-profile-test";
    case ExperimentKind::Translation: return "translation-invariance-test";
    case ExperimentKind::InverseLocalize: return "inverse-localize";
    case ExperimentKind::IlScan: return "il-scan";
    case ExperimentKind::StrongIl: return "strong-il-measure-estimate";
  }
  return "unknown";
}

std::optional<ExperimentKind> experiment_from_name(const std::string& name) {
  for (int k = 0; k <= static_cast<int>(ExperimentKind::StrongIl); ++k) {
    const auto kind = static_cast<ExperimentKind>(k);
    if (name == experiment_name(kind)) return kind;
  }
  return std::nullopt;
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (int k = 0; k <= static_cast<int>(ExperimentKind::StrongIl); ++k) {
    out.emplace_back(experiment_name(static_cast<ExperimentKind>(k)));
  }
  return out;
}

ValidationReport validate_config_text(const std::string& text) {
  ValidationReport report;
  boost::property_tree::ptree tree;
  try {
    std::istringstream is(text);
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    report.errors.push_back("syntax: line " + std::to_string(e.line()) + ": " + e.message());
    return report;
  }

  std::map<std::string, std::string> values;
  std::set<std::string> given;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      report.errors.push_back(section + ": key outside any section");
      continue;
    }
    for (const auto& [name, node] : body) {
      const std::string full = section + "." + name;
      const KeySpec* key = find_key(section, name);
      if (key == nullptr) {
        report.errors.push_back(full + ": unknown key");
        continue;
      }
      std::string norm;
      std::string error;
      if (!normalize(*key, node.data(), norm, error)) {
        report.errors.push_back(full + ": " + error);
        continue;
      }
      values[full] = norm;
      given.insert(full);
    }
  }

  for (const KeySpec& k : schema()) {
    const std::string full = std::string(k.section) + "." + k.name;
    if (values.count(full)) continue;
    if (full == "experiment.kind") {
      if (!given.count(full)) report.errors.push_back("experiment.kind: required key missing");
      continue;
    }
    if (full == "experiment.seed") {
      report.notices.push_back("experiment.seed: not set, defaulting to " + std::string(k.fallback));
    }
    if (!given.count(full)) {
      std::string norm;
      std::string error;
      if (k.fallback[0] == '\0' || !normalize(k, k.fallback, norm, error)) norm = k.fallback;
      values[full] = norm;
    }
  }
  // Range checks run even after schema errors so the report is complete; a
  // missing or unknown kind is stood in for by one that accepts every key.
  const bool schema_ok = report.errors.empty();
  if (!values.count("experiment.kind") || !experiment_from_name(values.at("experiment.kind")))
    values["experiment.kind"] = experiment_name(ExperimentKind::BerryExpectation);

  ExperimentConfig config;
  build_typed(config, values, report.errors);
  if (!schema_ok || !report.errors.empty()) return report;
  config.canonical = render_canonical(values);
  config.hash = sha256_hex(config.canonical);
  report.config = std::move(config);
  report.ok = true;
  return report;
}

ValidationReport validate_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return validate_config_text(os.str());
}

namespace {

ExperimentConfig finish(ValidationReport report, std::optional<std::uint64_t> seed_override) {
  if (!report.ok) {
    std::string message = "config rejected";
    for (const auto& e : report.errors) message += "; " + e;
    throw ConfigError(message);
  }
  ExperimentConfig config = std::move(*report.config);
  if (seed_override && *seed_override != config.seed) {
    const std::string from = "seed = " + std::to_string(config.seed) + "\n";
    const std::string to = "seed = " + std::to_string(*seed_override) + "\n";
    const auto pos = config.canonical.find(from);
    config.canonical.replace(pos, from.size(), to);
    config.seed = *seed_override;
    config.hash = sha256_hex(config.canonical);
  }
  return config;
}

}  // namespace

ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  return finish(validate_config_file(path), seed_override);
}

ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
  return finish(validate_config_text(text), seed_override);
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int size = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &size, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < size; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

std::string experiment_catalogue() {
  static const std::vector<std::pair<const char*, const char*>> kinds = {
      {"berry-expectation-test",
       "E[F(phi_p)] per eigenvalue and chart vs the Berry sampler; uses manifold, sequence, sampling, sampler, grid, "
       "functional, target (chi-norm)"},
      {"marginal-distribution-test",
       "KS test of phi_p(point) against N(0,1); uses manifold, sequence, sampling, experiment.point, "
       "experiment.control, sampler"},
      {"covariance-profile-test",
       "E[phi_p(0) phi_p(r e)] vs the Berry kernel; uses manifold, sequence, sampling, experiment.separations, "
       "experiment.direction"},
      {"translation-invariance-test",
       "paired gap E[F(tau_y phi_p)] - E[F(phi_p)]; uses manifold, sequence, sampling, grid, functional, "
       "experiment.shift"},
      {"inverse-localize",
       "least-squares eigenfunction closest to the target at one base point (first eigenvalue); uses manifold, "
       "sequence, grid, target, experiment.base_point, experiment.order, frechet"},
      {"il-scan", "inverse-localize error over every selected eigenvalue; same keys as inverse-localize"},
      {"strong-il-measure-estimate",
       "fraction of base points with ||phi_p - h||_{C^r} < epsilon; uses manifold, sequence, sampling, grid, target, "
       "experiment.epsilon, experiment.order, experiment.control, experiment.control_samples, sampler"},
  };
  std::ostringstream os;
  os << "experiments:\n";
  for (const auto& [name, text] : kinds) os << "  " << name << "\n      " << text << "\n";
  os << "\nkeys (section.key [type] default: description):\n";
  for (const KeySpec& k : schema()) {
    static const char* types[] = {"int", "uint", "number", "bool", "enum", "list", "points", "text"};
    const char* type = types[static_cast<int>(k.type)];
    os << "  " << k.section << "." << k.name << " [" << type << "] ";
    if (std::string(k.section) == "experiment" && std::string(k.name) == "kind") {
      os << "required";
    } else if (k.fallback[0] == '\0') {
      os << "(derived)";
    } else {
      os << k.fallback;
    }
    os << ": " << k.help;
    if (!k.options.empty()) {
      os << " {";
      for (std::size_t i = 0; i < k.options.size(); ++i) os << (i ? "|" : "") << k.options[i];
      os << "}";
    }
    os << "\n";
  }
  return os.str();
}

SourcePtr build_target(const ExperimentConfig& config) {
  const TargetSpec& t = config.target;
  const int d = config.sequence.manifold.dimension();
  SourcePtr field;
  switch (t.kind) {
    case TargetKind::Radial:
      field = std::make_shared<BesselFourierFunction>(radial_wave(d, t.scale));
      break;
    case TargetKind::Harmonic:
      field = std::make_shared<BesselFourierFunction>(harmonic_wave(HarmonicIndex{d, t.degree, t.index}, t.scale));
      break;
    case TargetKind::PlaneWave: {
      Point e = t.direction;
      double n = 0.0;
      for (double v : e) n += v * v;
      n = std::sqrt(n);
      if (!(n > 0.0)) throw DomainError("target direction must be nonzero");
      for (double& v : e) v /= n;
      field = std::make_shared<BesselFourierFunction>(plane_wave_expansion(d, e, t.phase, t.scale, t.degree_cap));
      break;
    }
    case TargetKind::Eigenfunction: {
      const std::vector<EigenvalueEntry> entries = resolve_eigenvalues(config.sequence);
      auto psi = std::make_shared<const Eigenfunction>(sequence_member(config.sequence, entries.front(), 0));
      const BasePoint p = make_base_point(config.sequence.manifold, config.base_point);
      field = std::make_shared<LocalizedEigenfunction>(psi, p);
      break;
    }
  }
  if (t.normalize) {
    GridSpec g = config.grid;
    g.order = config.order;
    g.layout = GridLayout::Ball;
    const double norm = cr_norm(sample(*field, g), config.order, g.radius);
    if (!(norm > 0.0)) throw NumericalError("target vanishes on the grid; cannot normalize");
    field = std::make_shared<ScaledField>(field, 1.0 / norm);
  }
  return field;
}

}  // namespace berrylab
