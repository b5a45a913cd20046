#include "fpp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>
#include <omp.h>

#include "fpp/bypass.hpp"
#include "fpp/errors.hpp"
#include "fpp/field.hpp"
#include "fpp/growth.hpp"
#include "fpp/metric.hpp"
#include "fpp/oriented.hpp"
#include "fpp/rng.hpp"
#include "fpp/shapefluct.hpp"
#include "fpp/stats.hpp"

namespace fpp {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const Interval& ci) { return json{{"lo", ci.lo}, {"hi", ci.hi}}; }

std::string rational_text(const Rational& r) { return r.str(); }
double rational_value(const Rational& r) { return static_cast<double>(r); }

// Long-format record table: one row per (slot, replication, statistic).
class Records {
 public:
  Records(const ExperimentConfig& cfg) : hash_(cfg.hash_hex()) {
    out_ << "# fpplab records schema_version=" << kSchemaVersion << " kind=" << to_string(cfg.kind)
         << " config_hash=" << hash_ << '\n';
    out_ << "config_hash,slot,n,replication,statistic,value,warning\n";
  }

  void add(std::size_t slot, long long n, long long rep, const char* stat, double value,
           const char* warning = "") {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out_ << hash_ << ',' << slot << ',' << n << ',' << rep << ',' << stat << ',' << buf << ',' << warning
         << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::string hash_;
  std::ostringstream out_;
};

struct Context {
  const ExperimentConfig& cfg;
  fs::path dir;
  Records records;
  json results = json::object();
  std::vector<GateCheck> gate;
  std::size_t failed = 0;
  std::vector<std::string> files;

  FitOptions fit() const { return {cfg.ci_level, cfg.threads, cfg.parallel, 0}; }
  ScanOptions scan() const { return {cfg.ci_level, cfg.threads, cfg.parallel, 0}; }
  double z() const { return z_for_level(cfg.ci_level); }

  void check(const std::string& name, bool ok, const std::string& detail) { gate.push_back({name, ok, detail}); }

  std::ofstream open(const std::string& name, bool binary = false) {
    const fs::path p = dir / name;
    std::ofstream f(p, binary ? std::ios::binary : std::ios::out);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    files.push_back(p.string());
    return f;
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

json profile_json(const ShapeProfile& p) {
  std::ostringstream s;
  p.write_json(s);
  return json::parse(s.str());
}

ShapeProfile load_profile(const ExperimentConfig& cfg) {
  std::ifstream in(cfg.profile);
  if (!in) throw ConfigError("parameters.profile: cannot open '" + cfg.profile + "'");
  ShapeProfile p = ShapeProfile::read_json(in);
  if (p.dist_hash != cfg.distribution().hash())
    throw ConfigError("parameters.profile: profile was measured for a different distribution");
  return p;
}

void shape_records(Context& c, const ShapeProfile& prof) {
  for (std::size_t rep = 0; rep < prof.samples.size(); ++rep) {
    for (std::size_t i = 0; i < prof.angles.size(); ++i)
      c.records.add(i, prof.R, static_cast<long long>(rep), "tau_over_R", prof.samples[rep][i]);
  }
}

json cone_json(const FlatEdgeReport& r) {
  return json{{"tol", r.tol},
              {"empty", r.cone_empty},
              {"endpoint", r.cone_endpoint},
              {"endpoint_lo", r.endpoint_lo},
              {"endpoint_hi", r.endpoint_hi},
              {"endpoint_se", r.endpoint_se}};
}

void run_shape(Context& c) {
  const auto& cfg = c.cfg;
  const ShapeProfile prof = shape_estimate(cfg.distribution(), cfg.R, cfg.angle_list(), cfg.reps, cfg.seed, c.fit());
  c.failed = prof.failed;
  shape_records(c, prof);
  {
    auto f = c.open("shape_profile.json");
    prof.write_json(f);
  }
  FlatEdgeReport cone;
  empirical_cone(prof, cfg.tol, c.z(), cone);
  c.results["profile"] = profile_json(prof);
  c.results["cone"] = cone_json(cone);

  json cover = json::array();
  std::vector<int> Ms = {100, 200, 400};
  std::vector<double> counts;
  std::size_t uncovered_total = 0;
  for (int M : Ms) {
    const auto boundary = profile_boundary_sites(prof, M);
    const auto centers = covering_points(boundary, M, cfg.kappa_prime);
    const std::size_t bad = uncovered_count(boundary, centers, std::pow(M, cfg.kappa_prime));
    uncovered_total += bad;
    counts.push_back(static_cast<double>(centers.size()));
    cover.push_back({{"M", M}, {"boundary_sites", boundary.size()}, {"centers", centers.size()}, {"uncovered", bad}});
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    lx.push_back(std::log(Ms[i]));
    ly.push_back(std::log(counts[i]));
  }
  const LinearFit fit = ordinary_least_squares(lx, ly);
  c.results["covering"] = {{"kappa_prime", cfg.kappa_prime}, {"points", cover}, {"loglog_slope", fit.slope}};
  c.check("symmetric", prof.symmetric, "g(theta) and g(pi/2 - theta) agree within CI");
  c.check("covering", uncovered_total == 0, "uncovered boundary sites: " + std::to_string(uncovered_total));
}

void run_flatedge(Context& c) {
  const auto& cfg = c.cfg;
  const FlatEdgeReport r = flat_edge_check(cfg.distribution(), cfg.R, cfg.angle_list(), cfg.reps, cfg.alpha_reps,
                                           cfg.tol, cfg.pc_estimate, cfg.seed, c.fit());
  c.failed = r.profile.failed;
  shape_records(c, r.profile);
  for (std::size_t i = 0; i < r.alpha_values.size(); ++i)
    c.records.add(0, 2LL * cfg.R, static_cast<long long>(i), "alpha", r.alpha_values[i]);
  {
    auto f = c.open("shape_profile.json");
    r.profile.write_json(f);
  }
  c.results["p"] = r.p;
  c.results["supercritical"] = r.supercritical;
  c.results["alpha"] = r.alpha;
  c.results["alpha_se"] = r.alpha_se;
  c.results["theta_p"] = r.theta_p;
  c.results["theta_p_se"] = r.theta_p_se;
  c.results["M_p"] = {r.Mx, r.My};
  c.results["N_p"] = {r.Nx, r.Ny};
  c.results["cone"] = cone_json(r);
  c.results["z_score"] = r.z_score;
  c.results["agree"] = r.agree;
  c.results["profile"] = profile_json(r.profile);
  if (r.supercritical)
    c.check("cone-endpoint", r.agree, fmt("|endpoint - theta_p| / joint se = %.3g", r.z_score));
  else
    c.check("empty-cone", r.cone_empty, "subcritical law: the cone must be empty");
}

void run_variance(Context& c) {
  const auto& cfg = c.cfg;
  const VarianceProfile vp = variance_profile(cfg.distribution(), Direction{cfg.theta}, cfg.n_list, cfg.reps,
                                              cfg.seed, c.fit());
  json pts = json::array();
  for (std::size_t s = 0; s < vp.points.size(); ++s) {
    const auto& p = vp.points[s];
    c.failed += cfg.reps - p.reps;
    for (std::size_t rep = 0; rep < p.values.size(); ++rep)
      c.records.add(s, p.n, static_cast<long long>(rep), "tau", p.values[rep]);
    pts.push_back({{"n", p.n},
                   {"reps", p.reps},
                   {"mean", p.mean},
                   {"variance", p.variance},
                   {"variance_se", p.variance_se},
                   {"streaming_variance", p.streaming_variance},
                   {"truncation_warnings", p.truncation_warnings}});
  }
  c.results["theta"] = cfg.theta;
  c.results["points"] = pts;
  c.results["fit"] = {{"intercept", vp.fit.intercept},
                      {"slope", vp.fit.slope},
                      {"slope_se", vp.fit.se_slope},
                      {"weighted", vp.weighted},
                      {"slope_ci", to_json(vp.slope_ci)}};
  const std::string ci = fmt("slope CI [%.4g, %.4g]", vp.slope_ci.lo, vp.slope_ci.hi);
  if (cfg.expect_slope == "positive")
    c.check("slope-positive", vp.slope_ci.lo > 0, ci);
  else if (cfg.expect_slope == "zero")
    c.check("slope-zero", vp.slope_ci.lo <= 0 && vp.slope_ci.hi >= 0, ci);
}

void run_exponents(Context& c) {
  const auto& cfg = c.cfg;
  const ExponentEstimates e = exponent_estimates(cfg.distribution(), Direction{cfg.theta}, cfg.n_list, cfg.reps,
                                                 cfg.seed, cfg.gammas, c.fit());
  for (std::size_t s = 0; s < e.n_list.size(); ++s) {
    c.failed += cfg.reps - e.taus[s].size();
    for (std::size_t rep = 0; rep < e.taus[s].size(); ++rep) {
      c.records.add(s, e.n_list[s], static_cast<long long>(rep), "tau", e.taus[s][rep]);
      c.records.add(s, e.n_list[s], static_cast<long long>(rep), "width", e.widths[s][rep]);
    }
  }
  c.results["theta"] = cfg.theta;
  c.results["n_list"] = e.n_list;
  c.results["variance"] = e.variance;
  c.results["mean_width"] = e.mean_width;
  c.results["chi"] = {{"value", e.chi}, {"se", e.chi_se}, {"ci", to_json(e.chi_ci)}};
  c.results["xi"] = {{"value", e.xi}, {"se", e.xi_se}, {"ci", to_json(e.xi_ci)}};
  c.results["scaling_indicator"] = e.scaling_indicator;
  c.results["gammas"] = e.gammas;
  c.results["membership"] = e.membership;
}

void run_trapping(Context& c) {
  const auto& cfg = c.cfg;
  const ShapeProfile prof = load_profile(cfg);
  const auto pts = trapping_frequency(cfg.distribution(), Direction{cfg.theta}, cfg.n_list, cfg.zeta, cfg.theta1,
                                      prof, cfg.reps, cfg.seed, c.fit());
  json rows = json::array();
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const auto& p = pts[s];
    c.failed += p.failed;
    for (std::size_t rep = 0; rep < p.hit.size(); ++rep)
      c.records.add(s, p.n, static_cast<long long>(rep), "hit", p.hit[rep]);
    rows.push_back({{"n", p.n}, {"M", p.M}, {"hits", p.hits}, {"reps", p.reps}, {"frequency", p.frequency},
                    {"ci", to_json(p.ci)}});
  }
  c.results["theta"] = cfg.theta;
  c.results["zeta"] = cfg.zeta;
  c.results["theta1"] = cfg.theta1;
  c.results["points"] = rows;
  if (pts.size() >= 2) {
    const auto& a = pts.front();
    const auto& b = pts.back();
    c.check("frequency-decreases", b.ci.hi < a.ci.lo,
            fmt("first %.4g, last %.4g", a.frequency, b.frequency));
  }
}

void run_heavy(Context& c) {
  const auto& cfg = c.cfg;
  const HeavyThreshold th = HeavyThreshold::make(cfg.distribution(), cfg.y);
  std::optional<ShapeProfile> prof;
  if (!cfg.profile.empty()) prof = load_profile(cfg);
  const auto pts = heavy_edge_count(cfg.distribution(), th, Direction{cfg.theta}, cfg.n_list, cfg.zeta, cfg.J,
                                    prof ? &*prof : nullptr, cfg.reps, cfg.seed, c.fit());
  json rows = json::array();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool positive = true;
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const auto& p = pts[s];
    c.failed += p.failed;
    for (std::size_t rep = 0; rep < p.counts.size(); ++rep)
      c.records.add(s, p.n, static_cast<long long>(rep), "heavy_count", p.counts[rep]);
    rows.push_back({{"n", p.n}, {"reps", p.reps}, {"mean", p.mean}, {"se", p.se}, {"ratio", p.ratio},
                    {"ratio_ci", to_json(p.ratio_ci)}, {"annulus_mean", p.annulus_mean}});
    lo = std::min(lo, p.ratio);
    hi = std::max(hi, p.ratio);
    positive = positive && p.ratio_ci.lo > 0;
  }
  const double spread = hi > 0 ? (hi - lo) / hi : 0.0;
  c.results["theta"] = cfg.theta;
  c.results["y"] = cfg.y;
  c.results["q_heavy"] = th.q_heavy;
  c.results["points"] = rows;
  c.results["ratio_spread"] = spread;
  c.check("ratio-positive", positive, "every count/n CI excludes 0");
  c.check("ratio-stable", spread < 0.25, fmt("relative spread %.3g", spread));
}

void run_compare(Context& c) {
  const auto& cfg = c.cfg;
  const HeavyThreshold th = HeavyThreshold::make(cfg.distribution(), cfg.y);
  const ComparisonResult r = comparison_check(cfg.distribution(), th, Direction{cfg.theta}, cfg.n_list.front(),
                                              cfg.reps, cfg.seed, c.fit());
  c.failed = r.failed;
  for (std::size_t rep = 0; rep < r.mu_values.size(); ++rep) {
    c.records.add(0, r.n, static_cast<long long>(rep), "g_mu", r.mu_values[rep]);
    c.records.add(0, r.n, static_cast<long long>(rep), "g_nu", r.nu_values[rep]);
  }
  c.results["n"] = r.n;
  c.results["theta"] = cfg.theta;
  c.results["y"] = cfg.y;
  c.results["g_mu"] = {{"mean", r.g_mu}, {"se", r.se_mu}};
  c.results["g_nu"] = {{"mean", r.g_nu}, {"se", r.se_nu}};
  c.results["diff"] = {{"mean", r.diff}, {"se", r.diff_se}, {"ci", to_json(r.diff_ci)}};
  c.results["separation"] = r.separation;
  c.check("strict-comparison", r.diff > 0 && r.separation >= 3, fmt("diff / se = %.3g", r.separation));
}

void run_bypass(Context& c) {
  const auto& cfg = c.cfg;
  const LinearFunctional f{rational_value(parse_rational(cfg.c1)), rational_value(parse_rational(cfg.c2))};
  if (!(f.c_f() > 0)) throw ConfigError("parameters.c1, c2: need C_f > 0");
  const int n = cfg.n_list.front();
  const BypassEnsemble e = bypass_ensemble(cfg.p, cfg.a, n, cfg.reps, cfg.seed, f, c.scan());
  c.failed = e.failed;
  std::vector<int> K;
  std::vector<double> k_over_n, gain1, gainK, hit1;
  for (std::size_t rep = 0; rep < e.runs.size(); ++rep) {
    const auto& r = e.runs[rep];
    K.push_back(r.K_n());
    k_over_n.push_back(static_cast<double>(r.K_n()) / n);
    const double f0 = r.f_base.back(), f1 = r.f_first.back(), fK = r.f_current.back();
    const char* warn = std::isfinite(f0) ? "" : "front-died";
    c.records.add(0, n, static_cast<long long>(rep), "K_n", r.K_n(), warn);
    c.records.add(0, n, static_cast<long long>(rep), "f0", f0, warn);
    c.records.add(0, n, static_cast<long long>(rep), "f1", f1, warn);
    c.records.add(0, n, static_cast<long long>(rep), "fK", fK, warn);
    if (std::isfinite(f0)) {
      gain1.push_back(f1 - f0);
      gainK.push_back(fK - f0);
    }
    hit1.push_back(r.tau.empty() ? 0.0 : 1.0);
  }
  {
    auto out = c.open("trajectories.csv");
    write_trajectory_csv(out, e.runs);
  }
  {
    auto out = c.open("trajectory_summary.csv");
    write_trajectory_summary_csv(out, e.runs);
  }
  const double rho = rho_a_exact(cfg.a, cfg.p);
  const ChiSquareTest chi = binomial_chi_square(K, n, rho);
  const Summary sk = summarize(k_over_n), s1 = summarize(gain1), sK = summarize(gainK), sh = summarize(hit1);
  const double cf = f.c_f();
  c.results["p"] = cfg.p;
  c.results["a"] = cfg.a;
  c.results["n"] = n;
  c.results["rho_a"] = rho;
  c.results["K_over_n"] = {{"mean", sk.mean}, {"se", sk.se}};
  c.results["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value},
                             {"cell_lo", chi.cell_lo}};
  c.results["first_bypass_gain"] = {{"mean", s1.mean}, {"se", s1.se},
                                    {"bound", cfg.a * cf * sh.mean}};
  c.results["total_gain"] = {{"mean", sK.mean}, {"se", sK.se}, {"bound", cfg.a * cf * n * rho}};
  const double zk = sk.se > 0 ? std::abs(sk.mean - rho) / sk.se : 0.0;
  c.check("binomial-law", chi.p_value > 0.01, fmt("chi-square p = %.4g", chi.p_value));
  c.check("mean-K", zk <= 3, fmt("|mean K/n - rho_a| / se = %.3g", zk));
}

void run_oriented_scan(Context& c) {
  const auto& cfg = c.cfg;
  const SurvivalScan scan = survival_scan(cfg.p_grid, cfg.N, cfg.reps, cfg.seed, c.scan());
  c.failed = scan.failed;
  for (std::size_t rep = 0; rep < scan.critical.size(); ++rep)
    c.records.add(0, cfg.N, static_cast<long long>(rep), "critical_value", scan.critical[rep]);
  {
    auto out = c.open("survival.csv");
    scan.write_csv(out);
  }
  json rows = json::array();
  for (const auto& r : scan.rows)
    rows.push_back({{"p", r.p}, {"survived", r.survived}, {"frequency", r.frequency}, {"ci", to_json(r.ci)}});
  c.results["N"] = scan.N;
  c.results["rows"] = rows;
  c.results["pc_estimate"] = scan.pc_estimate;
  c.results["pc_uncertainty"] = scan.pc_uncertainty;
  c.results["separated"] = scan.separated;
  c.check("steepest-rise-separated", scan.separated, fmt("p_c about %.4g", scan.pc_estimate));
}

void run_compete(Context& c) {
  const auto& cfg = c.cfg;
  const auto seeds = seeds_at_radius(cfg.seed_radius, cfg.seed_angles);
  const CoexistenceEstimate est = coexistence_frequency(cfg.distribution(), seeds, cfg.R, cfg.reps, cfg.seed,
                                                        cfg.ci_level, cfg.threads, cfg.parallel, 0);
  c.failed = est.failed;
  for (std::size_t rep = 0; rep < est.outcomes.size(); ++rep)
    c.records.add(0, cfg.R, static_cast<long long>(rep), "coexist", est.outcomes[rep]);
  {
    // Raster of replication 0, on the same field the estimate used.
    const BoxLattice lat(cfg.R);
    const auto field = WeightField::sample(lat, cfg.distribution(), derive_key(cfg.seed, cell_id(0, 0, 0)));
    const auto outcome = compete(field, seeds);
    auto out = c.open("competition.fppr", true);
    write_raster(out, field, outcome);
  }
  json seed_list = json::array();
  for (const Site& s : seeds) seed_list.push_back({s.x, s.y});
  c.results["R"] = cfg.R;
  c.results["seeds"] = seed_list;
  c.results["coexist"] = est.coexist;
  c.results["reps"] = est.reps;
  c.results["frequency"] = est.frequency;
  c.results["ci"] = to_json(est.ci);
  c.results["nested_frequency"] = est.nested_frequency;
  c.check("coexistence", est.ci.lo > 0, fmt("frequency %.4g, CI low %.4g", est.frequency, est.ci.lo));
}

void run_ends(Context& c) {
  const auto& cfg = c.cfg;
  const auto pts = ends_experiment(cfg.distribution(), cfg.R_list, cfg.r_fraction, cfg.reps, cfg.seed,
                                   cfg.ci_level, cfg.threads, cfg.parallel, 0);
  json rows = json::array();
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const auto& p = pts[s];
    c.failed += p.failed;
    for (std::size_t rep = 0; rep < p.counts.size(); ++rep)
      c.records.add(s, p.R, static_cast<long long>(rep), "components", p.counts[rep]);
    rows.push_back({{"R", p.R}, {"r", p.r}, {"reps", p.reps}, {"mean", p.mean}, {"se", p.se}, {"ci", to_json(p.ci)}});
  }
  c.results["r_fraction"] = cfg.r_fraction;
  c.results["points"] = rows;
  const auto& last = pts.back();
  c.check("at-least-four", last.mean >= 4, fmt("mean at largest R = %.4g", last.mean));
  if (pts.size() >= 2)
    c.check("grows-with-R", last.ci.lo > pts.front().ci.hi,
            fmt("first %.4g, last %.4g", pts.front().mean, last.mean));
}

void run_oracle(Context& c) {
  const auto& cfg = c.cfg;
  const Rational p = parse_rational(cfg.oracle_p);
  const OracleResult r = durrett_oracle(cfg.oracle_n, cfg.oracle_m, p, parse_rational(cfg.c1),
                                        parse_rational(cfg.c2), cfg.holes);
  auto both = [](const Rational& q) { return json{{"exact", rational_text(q)}, {"value", rational_value(q)}}; };
  c.results["n"] = r.n;
  c.results["m"] = r.m;
  c.results["p"] = rational_text(r.p);
  c.results["c_f"] = rational_text(r.c_f);
  c.results["holes"] = r.holes;
  c.results["e_ray"] = both(r.e_ray);
  c.results["e_ray_ext"] = both(r.e_ray_ext);
  c.results["e_A"] = both(r.e_A);
  c.results["e_A_ext"] = both(r.e_A_ext);
  c.results["diff_ray"] = both(r.diff_ray());
  c.results["diff_A"] = both(r.diff_A());
  c.results["ordering_holds"] = r.ordering_holds();
  c.records.add(0, r.n, -1, "e_ray", rational_value(r.e_ray));
  c.records.add(0, r.n, -1, "e_ray_ext", rational_value(r.e_ray_ext));
  c.records.add(0, r.n, -1, "e_A", rational_value(r.e_A));
  c.records.add(0, r.n, -1, "e_A_ext", rational_value(r.e_A_ext));
  c.check("ordering", r.ordering_holds(), "diff_A >= diff_ray >= C_f m, exactly");
}

}  // namespace

bool RunOutcome::gate_passed() const {
  if (incomplete) return false;
  for (const auto& g : gate) {
    if (!g.passed) return false;
  }
  return true;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + out_dir + "': " + ec.message());
  Context c{cfg, fs::path(out_dir), Records(cfg), json::object(), {}, 0, {}};

  switch (cfg.kind) {
    case ExperimentKind::shape: run_shape(c); break;
    case ExperimentKind::flatedge: run_flatedge(c); break;
    case ExperimentKind::variance: run_variance(c); break;
    case ExperimentKind::exponents: run_exponents(c); break;
    case ExperimentKind::trapping: run_trapping(c); break;
    case ExperimentKind::heavy: run_heavy(c); break;
    case ExperimentKind::compare: run_compare(c); break;
    case ExperimentKind::bypass: run_bypass(c); break;
    case ExperimentKind::oriented_scan: run_oriented_scan(c); break;
    case ExperimentKind::compete: run_compete(c); break;
    case ExperimentKind::ends: run_ends(c); break;
    case ExperimentKind::oracle: run_oracle(c); break;
  }

  RunOutcome out;
  out.incomplete = c.failed > 0;
  out.gate = c.gate;
  {
    auto f = c.open("records.csv");
    f << c.records.str();
  }
  json summary;
  summary["kind"] = "summary";
  summary["schema_version"] = kSchemaVersion;
  summary["config_hash"] = cfg.hash_hex();
  summary["experiment"] = to_string(cfg.kind);
  json echo = json::object();
  for (const auto& [k, v] : cfg.echo()) {
    if (k != "statistics.threads" && k != "statistics.parallel") echo[k] = v;
  }
  if (cfg.dist) echo["distribution.canonical"] = cfg.dist->canonical();
  summary["config"] = echo;
  summary["failed_replications"] = c.failed;
  summary["incomplete"] = out.incomplete;
  summary["results"] = c.results;
  json gate = json::array();
  for (const auto& g : c.gate) gate.push_back({{"name", g.name}, {"passed", g.passed}, {"detail", g.detail}});
  summary["gate"] = {{"checks", gate}, {"passed", out.gate_passed()}};
  {
    auto f = c.open("summary.json");
    f << summary.dump(2) << '\n';
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    auto f = c.open("timing.json");
    json t;
    t["config_hash"] = cfg.hash_hex();
    t["wall_seconds"] = out.wall_seconds;
    t["threads"] = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
    t["parallel"] = cfg.parallel;
    f << t.dump(2) << '\n';
  }
  out.files = c.files;
  return out;
}

}  // namespace fpp
