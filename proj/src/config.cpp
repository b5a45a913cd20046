#include "fpp/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fpp/bypass.hpp"
#include "fpp/errors.hpp"

namespace fpp {

namespace {

std::string trim(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

std::vector<std::string> split(const std::string& text, const char* seps) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(seps));
  std::vector<std::string> out;
  for (auto& p : parts) {
    p = trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
  if (pos != t.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return d;
}

long long to_integer(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  std::size_t pos = 0;
  long long n = 0;
  try {
    n = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
  if (pos != t.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
  return n;
}

int to_int(const std::string& key, const std::string& v) {
  const long long n = to_integer(key, v);
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
    throw ConfigError(key + ": out of range");
  return static_cast<int>(n);
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const long long n = to_integer(key, v);
  if (n < 0) throw ConfigError(key + ": must be non-negative");
  return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = boost::algorithm::to_lower_copy(trim(v));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

// Accepts plain numbers and multiples of pi: "pi/4", "3pi/8", "0.25 pi".
double to_angle(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  const auto at = t.find("pi");
  if (at == std::string::npos) return to_double(key, t);
  std::string coef = trim(t.substr(0, at));
  std::string rest = trim(t.substr(at + 2));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double c = coef.empty() ? 1.0 : to_double(key, coef);
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError(key + ": bad angle '" + v + "'");
    c /= to_double(key, rest.substr(1));
  }
  return c * std::numbers::pi;
}

template <class T, class F>
std::vector<T> to_list(const std::string& key, const std::string& v, F&& conv) {
  std::vector<T> out;
  for (const auto& part : split(v, ",")) out.push_back(conv(key, part));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>)
      s += fmt(xs[i]);
    else
      s += std::to_string(xs[i]);
  }
  return s;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment.kind", [](auto& c, auto&, auto& v) { c.kind = parse_kind(trim(v)); }},
      {"experiment.name", [](auto& c, auto&, auto& v) { c.name = trim(v); }},
      {"distribution.atoms", [](auto& c, auto&, auto& v) { c.atoms_text = trim(v); }},
      {"distribution.continuous", [](auto& c, auto&, auto& v) { c.continuous_text = trim(v); }},
      {"geometry.R", [](auto& c, auto& k, auto& v) { c.R = to_int(k, v); }},
      {"geometry.n_list", [](auto& c, auto& k, auto& v) { c.n_list = to_list<int>(k, v, to_int); }},
      {"geometry.R_list", [](auto& c, auto& k, auto& v) { c.R_list = to_list<int>(k, v, to_int); }},
      {"geometry.angles", [](auto& c, auto& k, auto& v) { c.angles = to_list<double>(k, v, to_angle); }},
      {"geometry.angle_grid", [](auto& c, auto& k, auto& v) { c.angle_grid = to_int(k, v); }},
      {"geometry.theta", [](auto& c, auto& k, auto& v) { c.theta = to_angle(k, v); }},
      {"geometry.seed_radius", [](auto& c, auto& k, auto& v) { c.seed_radius = to_double(k, v); }},
      {"geometry.seed_angles",
       [](auto& c, auto& k, auto& v) { c.seed_angles = to_list<double>(k, v, to_angle); }},
      {"statistics.reps", [](auto& c, auto& k, auto& v) { c.reps = to_count(k, v); }},
      {"statistics.alpha_reps", [](auto& c, auto& k, auto& v) { c.alpha_reps = to_count(k, v); }},
      {"statistics.seed",
       [](auto& c, auto& k, auto& v) {
         try {
           std::size_t pos = 0;
           c.seed = std::stoull(trim(v), &pos, 0);
           if (pos != trim(v).size()) throw ConfigError("");
         } catch (const std::exception&) {
           throw ConfigError(k + ": not an unsigned 64-bit seed: '" + v + "'");
         }
       }},
      {"statistics.ci_level", [](auto& c, auto& k, auto& v) { c.ci_level = to_double(k, v); }},
      {"statistics.threads", [](auto& c, auto& k, auto& v) { c.threads = to_int(k, v); }},
      {"statistics.parallel", [](auto& c, auto& k, auto& v) { c.parallel = to_bool(k, v); }},
      {"parameters.a", [](auto& c, auto& k, auto& v) { c.a = to_int(k, v); }},
      {"parameters.p", [](auto& c, auto& k, auto& v) { c.p = to_double(k, v); }},
      {"parameters.p_grid", [](auto& c, auto& k, auto& v) { c.p_grid = to_list<double>(k, v, to_double); }},
      {"parameters.N", [](auto& c, auto& k, auto& v) { c.N = to_int(k, v); }},
      {"parameters.y", [](auto& c, auto& k, auto& v) { c.y = to_double(k, v); }},
      {"parameters.zeta", [](auto& c, auto& k, auto& v) { c.zeta = to_double(k, v); }},
      {"parameters.kappa", [](auto& c, auto& k, auto& v) { c.kappa = to_double(k, v); }},
      {"parameters.kappa_prime", [](auto& c, auto& k, auto& v) { c.kappa_prime = to_double(k, v); }},
      {"parameters.J", [](auto& c, auto& k, auto& v) { c.J = to_double(k, v); }},
      {"parameters.theta1", [](auto& c, auto& k, auto& v) { c.theta1 = to_angle(k, v); }},
      {"parameters.eps", [](auto& c, auto& k, auto& v) { c.eps = to_double(k, v); }},
      {"parameters.K", [](auto& c, auto& k, auto& v) { c.K = to_int(k, v); }},
      {"parameters.tol", [](auto& c, auto& k, auto& v) { c.tol = to_double(k, v); }},
      {"parameters.r_fraction", [](auto& c, auto& k, auto& v) { c.r_fraction = to_double(k, v); }},
      {"parameters.pc_estimate", [](auto& c, auto& k, auto& v) { c.pc_estimate = to_double(k, v); }},
      {"parameters.gammas", [](auto& c, auto& k, auto& v) { c.gammas = to_list<double>(k, v, to_double); }},
      {"parameters.profile", [](auto& c, auto&, auto& v) { c.profile = trim(v); }},
      {"parameters.expect_slope", [](auto& c, auto&, auto& v) { c.expect_slope = trim(v); }},
      {"parameters.oracle_n", [](auto& c, auto& k, auto& v) { c.oracle_n = to_int(k, v); }},
      {"parameters.oracle_m", [](auto& c, auto& k, auto& v) { c.oracle_m = to_int(k, v); }},
      {"parameters.oracle_p", [](auto& c, auto&, auto& v) { c.oracle_p = trim(v); }},
      {"parameters.c1", [](auto& c, auto&, auto& v) { c.c1 = trim(v); }},
      {"parameters.c2", [](auto& c, auto&, auto& v) { c.c2 = trim(v); }},
      {"parameters.holes", [](auto& c, auto& k, auto& v) { c.holes = to_list<int>(k, v, to_int); }},
  };
  return table;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void require_ascending(const std::vector<int>& xs, int lo, const std::string& key) {
  require(!xs.empty(), key + ": must not be empty");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] >= lo, key + ": values must be >= " + std::to_string(lo));
    if (i) require(xs[i] > xs[i - 1], key + ": values must be strictly ascending");
  }
}

bool uses_distribution(ExperimentKind k) {
  return k != ExperimentKind::bypass && k != ExperimentKind::oriented_scan && k != ExperimentKind::oracle;
}

}  // namespace

const std::vector<std::string>& experiment_kind_names() {
  static const std::vector<std::string> names = {"shape",    "flatedge", "variance",      "exponents",
                                                 "trapping", "heavy",    "compare",       "bypass",
                                                 "oriented-scan", "compete", "ends",      "oracle"};
  return names;
}

std::string to_string(ExperimentKind k) { return experiment_kind_names()[static_cast<std::size_t>(k)]; }

ExperimentKind parse_kind(const std::string& name) {
  const auto& names = experiment_kind_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("unknown experiment kind '" + name + "'");
  return static_cast<ExperimentKind>(it - names.begin());
}

std::vector<Atom> parse_atoms(const std::string& text) {
  std::vector<Atom> atoms;
  for (const auto& part : split(text, ",")) {
    const auto kv = split(part, ":");
    if (kv.size() != 2) throw ConfigError("distribution.atoms: expected value:mass, got '" + part + "'");
    atoms.push_back({to_double("distribution.atoms", kv[0]), to_double("distribution.atoms", kv[1])});
  }
  return atoms;
}

std::vector<ContinuousPiece> parse_pieces(const std::string& text) {
  std::vector<ContinuousPiece> pieces;
  const std::string key = "distribution.continuous";
  for (const auto& part : split(text, ";")) {
    const auto w = split(part, " \t");
    if (w.empty()) continue;
    ContinuousPiece c{};
    if (w[0] == "uniform") {
      if (w.size() != 4) throw ConfigError(key + ": uniform needs 'lower upper mass'");
      c = {PieceKind::uniform, to_double(key, w[1]), to_double(key, w[2]), 0.0, to_double(key, w[3])};
    } else if (w[0] == "exponential") {
      if (w.size() != 5) throw ConfigError(key + ": exponential needs 'lower upper rate mass'");
      c = {PieceKind::exponential, to_double(key, w[1]), to_double(key, w[2]), to_double(key, w[3]),
           to_double(key, w[4])};
    } else {
      throw ConfigError(key + ": unknown piece kind '" + w[0] + "'");
    }
    pieces.push_back(c);
  }
  return pieces;
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> m;
  m["experiment.kind"] = to_string(kind);
  m["experiment.name"] = name;
  m["distribution.atoms"] = atoms_text;
  m["distribution.continuous"] = continuous_text;
  m["geometry.R"] = std::to_string(R);
  m["geometry.n_list"] = join(n_list);
  m["geometry.R_list"] = join(R_list);
  m["geometry.angles"] = join(angle_list());
  m["geometry.angle_grid"] = std::to_string(angle_grid);
  m["geometry.theta"] = fmt(theta);
  m["geometry.seed_radius"] = fmt(seed_radius);
  m["geometry.seed_angles"] = join(seed_angles);
  m["statistics.reps"] = std::to_string(reps);
  m["statistics.alpha_reps"] = std::to_string(alpha_reps);
  m["statistics.seed"] = std::to_string(seed);
  m["statistics.ci_level"] = fmt(ci_level);
  m["statistics.threads"] = std::to_string(threads);
  m["statistics.parallel"] = parallel ? "true" : "false";
  m["parameters.a"] = std::to_string(a);
  m["parameters.p"] = fmt(p);
  m["parameters.p_grid"] = join(p_grid);
  m["parameters.N"] = std::to_string(N);
  m["parameters.y"] = fmt(y);
  m["parameters.zeta"] = fmt(zeta);
  m["parameters.kappa"] = fmt(kappa);
  m["parameters.kappa_prime"] = fmt(kappa_prime);
  m["parameters.J"] = fmt(J);
  m["parameters.theta1"] = fmt(theta1);
  m["parameters.eps"] = fmt(eps);
  m["parameters.K"] = std::to_string(K);
  m["parameters.tol"] = fmt(tol);
  m["parameters.r_fraction"] = fmt(r_fraction);
  m["parameters.pc_estimate"] = fmt(pc_estimate);
  m["parameters.gammas"] = join(gammas);
  m["parameters.profile"] = profile;
  m["parameters.expect_slope"] = expect_slope;
  m["parameters.oracle_n"] = std::to_string(oracle_n);
  m["parameters.oracle_m"] = std::to_string(oracle_m);
  m["parameters.oracle_p"] = oracle_p;
  m["parameters.c1"] = c1;
  m["parameters.c2"] = c2;
  m["parameters.holes"] = join(holes);
  return m;
}

std::uint64_t ExperimentConfig::hash() const {
  // Scheduling knobs do not change results, so they stay out of the hash.
  std::string text;
  for (const auto& [k, v] : echo()) {
    if (k == "statistics.threads" || k == "statistics.parallel") continue;
    text += k + "=" + v + "\n";
  }
  if (dist) text += "canonical=" + dist->canonical() + "\n";
  return fnv1a64(text);
}

std::string ExperimentConfig::hash_hex() const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

const WeightDistribution& ExperimentConfig::distribution() const {
  if (!dist) throw ConfigError("configuration has no distribution");
  return *dist;
}

std::vector<double> ExperimentConfig::angle_list() const {
  if (!angles.empty()) return angles;
  std::vector<double> out;
  if (angle_grid < 2) return {0.0};
  for (int i = 0; i < angle_grid; ++i) out.push_back(i * (std::numbers::pi / 4) / (angle_grid - 1));
  return out;
}

void ExperimentConfig::validate() const {
  const double half_pi = std::numbers::pi / 2;
  require(reps >= 1, "statistics.reps: must be >= 1");
  require(ci_level > 0 && ci_level < 1, "statistics.ci_level: must lie in (0, 1)");
  require(threads >= 0, "statistics.threads: must be >= 0");
  if (uses_distribution(kind)) require(dist.has_value(), "distribution: missing");
  const bool directional = kind == ExperimentKind::variance || kind == ExperimentKind::exponents ||
                           kind == ExperimentKind::trapping || kind == ExperimentKind::heavy ||
                           kind == ExperimentKind::compare;
  if (directional) {
    require(theta >= 0 && theta <= half_pi, "geometry.theta: must lie in [0, pi/2]");
    require_ascending(n_list, 1, "geometry.n_list");
  }
  switch (kind) {
    case ExperimentKind::shape:
    case ExperimentKind::flatedge: {
      require(R >= 64, "geometry.R: must be >= 64");
      const auto al = angle_list();
      require(std::is_sorted(al.begin(), al.end()) && al.front() >= 0 && al.back() <= half_pi + 1e-12,
              "geometry.angles: must be ascending within [0, pi/2]");
      require(tol > 0 && tol < 1, "parameters.tol: must lie in (0, 1)");
      if (kind == ExperimentKind::flatedge) require(alpha_reps >= 2, "statistics.alpha_reps: must be >= 2");
      break;
    }
    case ExperimentKind::variance:
      require(n_list.size() >= 2, "geometry.n_list: variance fits need at least two sizes");
      require(expect_slope == "any" || expect_slope == "positive" || expect_slope == "zero",
              "parameters.expect_slope: one of any, positive, zero");
      break;
    case ExperimentKind::exponents:
      require(n_list.size() >= 2, "geometry.n_list: exponent fits need at least two sizes");
      break;
    case ExperimentKind::trapping:
      require(!profile.empty(), "parameters.profile: trapping needs a shape-profile file");
      require(zeta > (kappa + 1) / 2 && zeta < 1, "parameters.zeta: must lie in ((kappa+1)/2, 1)");
      require(theta1 > theta, "parameters.theta1: must exceed geometry.theta");
      break;
    case ExperimentKind::heavy:
      require(zeta > 0 && zeta < 1, "parameters.zeta: must lie in (0, 1)");
      require(J > 1, "parameters.J: must exceed 1");
      require(dist->tail_mass(y) > 0, "parameters.y: mu([y, inf)) must be positive");
      break;
    case ExperimentKind::compare:
      require(dist->tail_mass(y) > 0, "parameters.y: mu([y, inf)) must be positive");
      break;
    case ExperimentKind::bypass:
      require(a >= 2, "parameters.a: must be >= 2");
      require(p > 0 && p <= 1, "parameters.p: must lie in (0, 1]");
      require(n_list.size() == 1 && n_list.front() >= 1, "geometry.n_list: bypass takes one n");
      break;
    case ExperimentKind::oriented_scan:
      require(!p_grid.empty() && std::is_sorted(p_grid.begin(), p_grid.end()),
              "parameters.p_grid: must be ascending and non-empty");
      for (double q : p_grid) require(q > 0 && q <= 1, "parameters.p_grid: values must lie in (0, 1]");
      require(N >= 1, "parameters.N: must be >= 1");
      break;
    case ExperimentKind::compete:
      require(R >= 8, "geometry.R: must be >= 8");
      require(seed_angles.size() >= 1 && seed_angles.size() <= 254, "geometry.seed_angles: 1..254 seeds");
      require(seed_radius >= 0 && seed_radius < R, "geometry.seed_radius: must lie in [0, R)");
      break;
    case ExperimentKind::ends:
      require_ascending(R_list, 8, "geometry.R_list");
      require(r_fraction >= 0 && r_fraction < 0.5, "parameters.r_fraction: must lie in [0, 1/2)");
      break;
    case ExperimentKind::oracle: {
      require(oracle_n >= 1 && oracle_n <= 3, "parameters.oracle_n: must lie in 1..3");
      require(oracle_m >= 1 && oracle_m <= 2, "parameters.oracle_m: must lie in 1..2");
      const Rational q = parse_rational(oracle_p);
      require(q > 0 && q <= 1, "parameters.oracle_p: must lie in (0, 1]");
      const Rational cf = parse_rational(c1) - parse_rational(c2);
      require(cf > 0, "parameters.c1, c2: need C_f = c1 - c2 > 0");
      break;
    }
  }
}

ExperimentConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  bool have_kind = false;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("config: key '" + section + "' outside any section");
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError("config: unknown key '" + full + "'");
      it->second(cfg, full, node.data());
      if (full == "experiment.kind") have_kind = true;
    }
  }
  if (!have_kind) throw ConfigError("config: [experiment] kind is required");
  if (uses_distribution(cfg.kind)) {
    try {
      cfg.dist = WeightDistribution(parse_atoms(cfg.atoms_text), parse_pieces(cfg.continuous_text));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("distribution: ") + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace fpp
