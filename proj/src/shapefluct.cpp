#include "fpp/shapefluct.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

double l1_of_angle(double theta) { return std::abs(std::cos(theta)) + std::abs(std::sin(theta)); }

RunOptions run_options(const FitOptions& o) { return RunOptions{o.threads, o.parallel}; }

// Slope of log y on log x, skipping non-positive y. Fewer than two usable
// points give a zero slope; two points give the exact slope with no error bar.
LinearFit loglog_fit(const std::vector<int>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] > 0) {
      lx.push_back(std::log(static_cast<double>(xs[i])));
      ly.push_back(std::log(ys[i]));
    }
  }
  LinearFit fit;
  if (lx.size() < 2) return fit;
  if (lx.size() == 2) {
    fit.slope = (ly[1] - ly[0]) / (lx[1] - lx[0]);
    fit.intercept = ly[0] - fit.slope * lx[0];
    return fit;
  }
  return ordinary_least_squares(lx, ly);
}

}  // namespace

double ShapeProfile::radius(double phi) const {
  if (angles.empty()) throw ConfigError("ShapeProfile: empty profile");
  double a = std::fmod(phi, kHalfPi);
  if (a < 0) a += kHalfPi;
  // Profiles measured on [0, pi/4] only are extended by the diagonal reflection.
  if (a > angles.back() + 1e-12 && angles.back() <= kPi / 4 + 1e-9) a = kHalfPi - a;
  auto r_at = [this](std::size_t i) { return 1.0 / g_hat[i]; };
  if (a <= angles.front()) return r_at(0);
  if (a >= angles.back()) return r_at(angles.size() - 1);
  const auto it = std::upper_bound(angles.begin(), angles.end(), a);
  const std::size_t j = static_cast<std::size_t>(it - angles.begin());
  const double t = (a - angles[j - 1]) / (angles[j] - angles[j - 1]);
  return (1 - t) * r_at(j - 1) + t * r_at(j);
}

double ShapeProfile::norm(double x, double y) const {
  const double r = std::hypot(x, y);
  if (r == 0) return 0.0;
  return r / radius(std::atan2(y, x));
}

void ShapeProfile::write_json(std::ostream& out) const {
  nlohmann::json j;
  j["kind"] = "shape-profile";
  j["schema_version"] = 1;
  j["R"] = R;
  j["reps"] = reps;
  j["dist_hash"] = dist_hash;
  j["ci_level"] = ci_level;
  j["angles"] = angles;
  j["g_hat"] = g_hat;
  j["se"] = se;
  j["l1_ratio"] = l1_ratio;
  j["l1_ratio_se"] = l1_ratio_se;
  std::vector<double> radii;
  for (double g : g_hat) radii.push_back(1.0 / g);
  j["radius"] = radii;
  j["truncation_warnings"] = truncation_warnings;
  j["symmetric"] = symmetric;
  j["convexity_defect"] = convexity_defect;
  j["max_ci_width"] = max_ci_width;
  out << j.dump(2) << '\n';
}

ShapeProfile ShapeProfile::read_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("ShapeProfile: unreadable profile: ") + e.what());
  }
  if (j.value("kind", "") != "shape-profile") throw ConfigError("ShapeProfile: not a shape profile");
  ShapeProfile p;
  p.R = j.at("R").get<int>();
  p.reps = j.at("reps").get<std::size_t>();
  p.dist_hash = j.at("dist_hash").get<std::uint64_t>();
  p.ci_level = j.value("ci_level", 0.95);
  p.angles = j.at("angles").get<std::vector<double>>();
  p.g_hat = j.at("g_hat").get<std::vector<double>>();
  p.se = j.at("se").get<std::vector<double>>();
  p.l1_ratio = j.value("l1_ratio", std::vector<double>{});
  p.l1_ratio_se = j.value("l1_ratio_se", std::vector<double>{});
  if (p.angles.empty() || p.angles.size() != p.g_hat.size() || p.se.size() != p.g_hat.size())
    throw ConfigError("ShapeProfile: inconsistent arrays");
  return p;
}

ShapeProfile shape_estimate(const WeightDistribution& dist, int R, const std::vector<double>& angles,
                            std::size_t reps, std::uint64_t seed, const FitOptions& opts) {
  if (R < 64) throw DomainError("shape_estimate: R must be >= 64");
  if (angles.empty() || !std::is_sorted(angles.begin(), angles.end()) || angles.front() < 0 ||
      angles.back() > kHalfPi + 1e-12)
    throw ConfigError("shape_estimate: angles must be ascending within [0, pi/2]");
  std::vector<Site> targets;
  int max_l1 = 0;
  for (double th : angles) {
    targets.push_back(Direction{th}.target(R));
    max_l1 = std::max(max_l1, l1_norm(targets.back()));
  }
  const BoxLattice lat(padded_radius(max_l1));
  struct Cell {
    std::vector<double> g, ratio;
    std::size_t truncated = 0;
  };
  auto cells = replicate<Cell>(
      reps,
      [&](std::size_t rep) {
        const auto field = WeightField::sample(lat, dist, derive_key(seed, cell_id(opts.stage, 0, rep)));
        SearchOptions so;
        for (const Site& t : targets) so.targets.push_back(lat.id(t));
        const DistanceField df = single_source(field, lat.id({0, 0}), so);
        Cell c;
        for (const Site& t : targets) {
          const double tau = field.to_time(df.dist[lat.id(t)]);
          c.g.push_back(tau / R);
          c.ratio.push_back(l1_norm(t) > 0 ? tau / l1_norm(t) : 1.0);
          if (truncation_possible(lat, {0, 0}, tau)) ++c.truncated;
        }
        return c;
      },
      run_options(opts));
  ShapeProfile prof;
  const auto rows = successful(cells, &prof.failed);
  const double z = z_for_level(opts.ci_level);
  prof.angles = angles;
  prof.R = R;
  prof.reps = rows.size();
  prof.dist_hash = dist.hash();
  prof.ci_level = opts.ci_level;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    std::vector<double> xs;
    for (const auto& r : rows) xs.push_back(r.g[i]);
    const Summary s = summarize(xs);
    prof.g_hat.push_back(s.mean);
    prof.se.push_back(s.se);
    std::vector<double> rs;
    for (const auto& r : rows) rs.push_back(r.ratio[i]);
    const Summary sr = summarize(rs);
    prof.l1_ratio.push_back(sr.mean);
    prof.l1_ratio_se.push_back(sr.se);
    // CI width of the boundary radius 1/g by the delta method.
    prof.max_ci_width = std::max(prof.max_ci_width, 2 * z * s.se / (s.mean * s.mean));
  }
  for (const auto& r : rows) {
    prof.truncation_warnings += r.truncated;
    prof.samples.push_back(r.g);
  }

  for (std::size_t i = 0; i < angles.size(); ++i) {
    for (std::size_t j = i + 1; j < angles.size(); ++j) {
      if (std::abs(angles[i] + angles[j] - kHalfPi) > 1e-9) continue;
      const double joint = z * std::hypot(prof.se[i], prof.se[j]);
      // Rounding the two targets differs by at most one site.
      if (std::abs(prof.g_hat[i] - prof.g_hat[j]) > joint + 2.0 / R) prof.symmetric = false;
    }
  }
  for (std::size_t i = 1; i + 1 < angles.size(); ++i) {
    auto pt = [&](std::size_t k) {
      const double r = 1.0 / prof.g_hat[k];
      return std::pair{r * std::cos(angles[k]), r * std::sin(angles[k])};
    };
    const auto [ax, ay] = pt(i - 1);
    const auto [bx, by] = pt(i);
    const auto [cx, cy] = pt(i + 1);
    // Distance of b from the chord ac, positive when b lies on the origin's side.
    const double len = std::hypot(cx - ax, cy - ay);
    if (len == 0) continue;
    const double cross_b = (cx - ax) * (by - ay) - (cy - ay) * (bx - ax);
    const double cross_o = (cx - ax) * (0 - ay) - (cy - ay) * (0 - ax);
    const double d = std::abs(cross_b) / len;
    if ((cross_b > 0) == (cross_o > 0) && cross_b != 0) prof.convexity_defect = std::max(prof.convexity_defect, d);
  }
  return prof;
}

double theta_from_alpha(double alpha) {
  const double s = alpha / std::sqrt(2.0);
  return std::atan2(0.5 - s, 0.5 + s);
}

void empirical_cone(const ShapeProfile& prof, double tol, double z, FlatEdgeReport& r) {
  r.tol = tol;
  // Angles in [0, pi/4], scanned downward from the diagonal.
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < prof.angles.size(); ++i) {
    if (prof.angles[i] <= kPi / 4 + 1e-9) idx.push_back(i);
  }
  const bool have_ratio = prof.l1_ratio.size() == prof.angles.size();
  auto ratio = [&](std::size_t i, double shift) {
    if (have_ratio) return prof.l1_ratio[i] + shift * prof.l1_ratio_se[i];
    return (prof.g_hat[i] + shift * prof.se[i]) / l1_of_angle(prof.angles[i]);
  };
  auto crossing = [&](double shift, bool& empty) {
    empty = true;
    const double level = 1.0 + tol;
    for (std::size_t k = idx.size(); k-- > 0;) {
      const double rk = ratio(idx[k], shift);
      if (rk <= level) {
        empty = false;
        continue;
      }
      if (empty) continue;  // still above the level near the diagonal
      // Interpolate between idx[k] (above) and idx[k+1] (below).
      const double r_hi = rk, r_lo = ratio(idx[k + 1], shift);
      const double a0 = prof.angles[idx[k]], a1 = prof.angles[idx[k + 1]];
      return a0 + (a1 - a0) * (r_hi - level) / (r_hi - r_lo);
    }
    return empty ? kPi / 4 : prof.angles[idx.front()];
  };
  bool empty = true, e_lo = true, e_hi = true;
  r.cone_endpoint = crossing(0.0, empty);
  r.cone_empty = empty;
  r.endpoint_lo = crossing(-z, e_lo);
  r.endpoint_hi = crossing(+z, e_hi);
  r.endpoint_se = (r.endpoint_hi - r.endpoint_lo) / (2 * z);
}

FlatEdgeReport flat_edge_check(const WeightDistribution& dist, int R, const std::vector<double>& angles,
                               std::size_t shape_reps, std::size_t alpha_reps, double tol,
                               double pc_estimate, std::uint64_t seed, const FitOptions& opts) {
  FlatEdgeReport r;
  r.p = dist.infimum() == 1.0 ? dist.mass_at_infimum() : 0.0;
  FitOptions so = opts;
  so.stage = opts.stage;
  r.profile = shape_estimate(dist, R, angles, shape_reps, seed, so);
  const double z = z_for_level(opts.ci_level);
  empirical_cone(r.profile, tol, z, r);
  r.supercritical = r.p > pc_estimate;
  if (r.supercritical) {
    ScanOptions ao{opts.ci_level, opts.threads, opts.parallel, opts.stage + 1};
    const AlphaEstimate a = alpha_p_estimate(r.p, 2 * R, alpha_reps, seed, ao);
    r.alpha = a.mean;
    r.alpha_se = a.se;
    r.alpha_values = a.values;
  }
  r.theta_p = theta_from_alpha(r.alpha);
  const double h = 1e-6;
  r.theta_p_se = std::abs(theta_from_alpha(r.alpha + h) - theta_from_alpha(r.alpha - h)) / (2 * h) * r.alpha_se;
  const double s = r.alpha / std::sqrt(2.0);
  r.Mx = 0.5 - s;
  r.My = 0.5 + s;
  r.Nx = 0.5 + s;
  r.Ny = 0.5 - s;
  const double joint = std::hypot(r.endpoint_se, r.theta_p_se);
  const double gap = std::abs(r.cone_endpoint - r.theta_p);
  r.z_score = joint > 0 ? gap / joint : (gap == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  r.agree = r.supercritical && !r.cone_empty && r.z_score <= 3.0;
  return r;
}

VarianceProfile fit_variance(std::vector<VariancePoint> points, double z) {
  VarianceProfile vp;
  vp.points = std::move(points);
  std::vector<double> x, y, s;
  bool all_zero = true, all_positive_se = true;
  for (const auto& p : vp.points) {
    x.push_back(std::log(static_cast<double>(p.n)));
    y.push_back(p.variance);
    s.push_back(p.variance_se);
    if (p.variance != 0) all_zero = false;
    if (!(p.variance_se > 0)) all_positive_se = false;
  }
  if (all_zero || x.size() < 2) {
    vp.weighted = false;
    vp.slope_ci = {0.0, 0.0};
    return vp;
  }
  if (all_positive_se) {
    vp.fit = weighted_least_squares(x, y, s);
  } else {
    vp.weighted = false;
    vp.fit = ordinary_least_squares(x, y);
  }
  vp.slope_ci = {vp.fit.slope - z * vp.fit.se_slope, vp.fit.slope + z * vp.fit.se_slope};
  return vp;
}

VarianceProfile variance_profile(const WeightDistribution& dist, const Direction& dir,
                                 const std::vector<int>& n_list, std::size_t reps,
                                 std::uint64_t seed, const FitOptions& opts) {
  std::vector<std::size_t> trunc;
  const EstimateOptions eo{opts.ci_level, opts.threads, opts.parallel, opts.stage};
  const auto samples = passage_samples(dist, dir, n_list, reps, seed, eo, &trunc);
  std::vector<VariancePoint> pts;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    VariancePoint pt;
    pt.n = n_list[i];
    pt.reps = samples[i].size();
    const Summary s = summarize(samples[i]);
    pt.mean = s.mean;
    pt.variance = s.variance;
    pt.variance_se = jackknife_variance_se(samples[i]);
    StreamingMoments sm;
    for (double v : samples[i]) sm.add(v);
    pt.streaming_variance = sm.variance();
    pt.truncation_warnings = trunc[i];
    pt.values = samples[i];
    pts.push_back(pt);
  }
  return fit_variance(std::move(pts), z_for_level(opts.ci_level));
}

ExponentEstimates fit_exponents(const std::vector<int>& n_list,
                                const std::vector<std::vector<double>>& taus,
                                const std::vector<std::vector<double>>& widths, double z) {
  ExponentEstimates e;
  e.n_list = n_list;
  e.taus = taus;
  e.widths = widths;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    e.variance.push_back(summarize(taus[i]).variance);
    e.mean_width.push_back(widths.empty() ? 0.0 : summarize(widths[i]).mean);
  }
  const LinearFit fv = loglog_fit(n_list, e.variance);
  e.chi = fv.slope / 2;
  e.chi_se = fv.se_slope / 2;
  const LinearFit fw = loglog_fit(n_list, e.mean_width);
  e.xi = fw.slope;
  e.xi_se = fw.se_slope;
  e.chi_ci = {e.chi - z * e.chi_se, e.chi + z * e.chi_se};
  e.xi_ci = {e.xi - z * e.xi_se, e.xi + z * e.xi_se};
  const double slack = z * std::hypot(e.chi_se, e.xi_se / 2);
  e.scaling_indicator = e.chi >= (1 - e.xi) / 2 - slack;
  return e;
}

ExponentEstimates exponent_estimates(const WeightDistribution& dist, const Direction& dir,
                                     const std::vector<int>& n_list, std::size_t reps,
                                     std::uint64_t seed, const std::vector<double>& gammas,
                                     const FitOptions& opts) {
  std::vector<std::vector<double>> taus(n_list.size()), widths(n_list.size());
  const double sx = -std::sin(dir.theta), sy = std::cos(dir.theta);
  for (std::size_t slot = 0; slot < n_list.size(); ++slot) {
    const Site target = dir.target(n_list[slot]);
    const BoxLattice lat(padded_radius(l1_norm(target)));
    struct Cell {
      double tau, width;
    };
    auto cells = replicate<Cell>(
        reps,
        [&](std::size_t rep) {
          const auto field = WeightField::sample(lat, dist, derive_key(seed, cell_id(opts.stage, slot, rep)));
          const GeodesicDag dag(field, {0, 0}, target);
          double w = 0;
          for (const Site& s : dag.sites()) w = std::max(w, std::abs(sx * s.x + sy * s.y));
          return Cell{dag.total(), w};
        },
        run_options(opts));
    for (const auto& c : successful(cells)) {
      taus[slot].push_back(c.tau);
      widths[slot].push_back(c.width);
    }
  }
  ExponentEstimates e = fit_exponents(n_list, taus, widths, z_for_level(opts.ci_level));
  e.gammas = gammas;
  for (double g : gammas) {
    std::vector<double> row;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      const double tube = std::pow(static_cast<double>(n_list[i]), g);
      const auto inside = std::count_if(widths[i].begin(), widths[i].end(),
                                        [tube](double w) { return w <= tube; });
      row.push_back(widths[i].empty() ? 0.0 : static_cast<double>(inside) / widths[i].size());
    }
    e.membership.push_back(row);
  }
  return e;
}

bool hits_scaled_arc(Site z, const ShapeProfile& prof, double M, double theta1) {
  if (z.x == 0 && z.y == 0) return false;
  const double phi = std::atan2(static_cast<double>(z.y), static_cast<double>(z.x));
  if (std::abs(phi) < theta1) return false;
  return std::abs(std::hypot(z.x, z.y) - M * prof.radius(phi)) <= 1.0;
}

std::vector<TrappingPoint> trapping_frequency(const WeightDistribution& dist, const Direction& dir,
                                              const std::vector<int>& n_list, double zeta,
                                              double theta1, const ShapeProfile& prof,
                                              std::size_t reps, std::uint64_t seed,
                                              const FitOptions& opts) {
  if (prof.angles.empty()) throw ConfigError("trapping_frequency: a shape profile is required");
  if (!(theta1 > std::abs(dir.theta))) throw ConfigError("trapping_frequency: need theta1 > |theta|");
  const double z = z_for_level(opts.ci_level);
  std::vector<TrappingPoint> out;
  for (std::size_t slot = 0; slot < n_list.size(); ++slot) {
    const int n = n_list[slot];
    const Site target = dir.target(n);
    const BoxLattice lat(padded_radius(l1_norm(target)));
    const double M = std::pow(static_cast<double>(n), zeta);
    auto cells = replicate<int>(
        reps,
        [&](std::size_t rep) {
          const auto field = WeightField::sample(lat, dist, derive_key(seed, cell_id(opts.stage, slot, rep)));
          const GeodesicDag dag(field, {0, 0}, target);
          for (const Site& s : dag.sites()) {
            if (hits_scaled_arc(s, prof, M, theta1)) return 1;
          }
          return 0;
        },
        run_options(opts));
    TrappingPoint pt;
    const auto hits = successful(cells, &pt.failed);
    pt.hit = hits;
    pt.n = n;
    pt.M = M;
    pt.reps = hits.size();
    for (int h : hits) pt.hits += static_cast<std::size_t>(h);
    pt.frequency = pt.reps ? static_cast<double>(pt.hits) / pt.reps : 0.0;
    pt.ci = wilson_interval(pt.hits, pt.reps, z);
    out.push_back(pt);
  }
  return out;
}

int annulus_index(double norm, double M1, double J) {
  if (norm < M1) return 0;
  return 1 + static_cast<int>(std::floor(std::log(norm / M1) / std::log(J)));
}

HeavyCount heavy_edges_on_dag(const GeodesicDag& dag, double y, double M1, double J,
                              const ShapeProfile* prof) {
  const WeightField& field = dag.field();
  const BoxLattice& lat = field.lattice();
  const double threshold = field.exact() ? y * field.scale() : y;
  const auto arcs = dag.arcs();
  constexpr int kUnset = std::numeric_limits<int>::max();
  std::vector<int> best(lat.num_sites(), kUnset);
  std::vector<std::int64_t> via(lat.num_sites(), -1);
  const SiteId src = lat.id(dag.source()), dst = lat.id(dag.target());
  best[src] = 0;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& a = arcs[i];
    if (best[a.tail] == kUnset) continue;
    const int cand = best[a.tail] + (field.stored(a.edge) >= threshold ? 1 : 0);
    if (cand < best[a.head]) {
      best[a.head] = cand;
      via[a.head] = static_cast<std::int64_t>(i);
    }
  }
  HeavyCount hc;
  if (src == dst) return hc;
  hc.total = best[dst];
  for (SiteId v = dst; v != src;) {
    const auto& a = arcs[static_cast<std::size_t>(via[v])];
    if (field.stored(a.edge) >= threshold) {
      const Site s = lat.site(a.tail), t = lat.site(a.head);
      const double mx = 0.5 * (s.x + t.x), my = 0.5 * (s.y + t.y);
      const double nrm = prof ? prof->norm(mx, my) : std::abs(mx) + std::abs(my);
      const int k = annulus_index(nrm, M1, J);
      if (static_cast<int>(hc.per_annulus.size()) <= k) hc.per_annulus.resize(k + 1, 0);
      ++hc.per_annulus[k];
    }
    v = a.tail;
  }
  return hc;
}

std::vector<HeavyPoint> heavy_edge_count(const WeightDistribution& dist, const HeavyThreshold& th,
                                         const Direction& dir, const std::vector<int>& n_list,
                                         double zeta, double J, const ShapeProfile* prof,
                                         std::size_t reps, std::uint64_t seed,
                                         const FitOptions& opts) {
  if (!(J > 1)) throw ConfigError("heavy_edge_count: J must exceed 1");
  const double z = z_for_level(opts.ci_level);
  std::vector<HeavyPoint> out;
  for (std::size_t slot = 0; slot < n_list.size(); ++slot) {
    const int n = n_list[slot];
    const Site target = dir.target(n);
    const BoxLattice lat(padded_radius(l1_norm(target)));
    const double M1 = std::pow(static_cast<double>(n), zeta);
    auto cells = replicate<HeavyCount>(
        reps,
        [&](std::size_t rep) {
          const auto field = WeightField::sample(lat, dist, derive_key(seed, cell_id(opts.stage, slot, rep)));
          const GeodesicDag dag(field, {0, 0}, target);
          return heavy_edges_on_dag(dag, th.y, M1, J, prof);
        },
        run_options(opts));
    HeavyPoint pt;
    const auto rows = successful(cells, &pt.failed);
    pt.n = n;
    pt.reps = rows.size();
    std::vector<double> counts;
    std::size_t annuli = 0;
    for (const auto& r : rows) {
      counts.push_back(r.total);
      pt.counts.push_back(r.total);
      annuli = std::max(annuli, r.per_annulus.size());
    }
    const Summary s = summarize(counts);
    pt.mean = s.mean;
    pt.se = s.se;
    pt.ratio = s.mean / n;
    pt.ratio_ci = {(s.mean - z * s.se) / n, (s.mean + z * s.se) / n};
    pt.annulus_mean.assign(annuli, 0.0);
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.per_annulus.size(); ++k) pt.annulus_mean[k] += r.per_annulus[k];
    }
    for (double& v : pt.annulus_mean) v /= std::max<std::size_t>(rows.size(), 1);
    out.push_back(pt);
  }
  return out;
}

ComparisonResult comparison_check(const WeightDistribution& dist, const HeavyThreshold& th,
                                  const Direction& dir, int n, std::size_t reps, std::uint64_t seed,
                                  const FitOptions& opts) {
  const Site target = dir.target(n);
  // The transformed law has weights up to one unit larger: pad for that.
  const BoxLattice lat(padded_radius(l1_norm(target)));
  struct Cell {
    double mu, nu;
  };
  auto cells = replicate<Cell>(
      reps,
      [&](std::size_t rep) {
        const auto field = WeightField::sample(lat, dist, derive_key(seed, cell_id(opts.stage, 0, rep)));
        const auto other = field.transformed(th.y);
        SearchOptions so;
        so.target = lat.id(target);
        const double a = field.to_time(single_source(field, lat.id({0, 0}), so).dist[lat.id(target)]);
        const double b = other.to_time(single_source(other, lat.id({0, 0}), so).dist[lat.id(target)]);
        return Cell{a / n, b / n};
      },
      run_options(opts));
  std::size_t failed = 0;
  const auto rows = successful(cells, &failed);
  std::vector<double> mu, nu, diff;
  for (const auto& c : rows) {
    mu.push_back(c.mu);
    nu.push_back(c.nu);
    diff.push_back(c.nu - c.mu);
  }
  const double z = z_for_level(opts.ci_level);
  ComparisonResult r;
  r.n = n;
  r.reps = rows.size();
  const Summary sm = summarize(mu), sn = summarize(nu), sd = summarize(diff);
  r.g_mu = sm.mean;
  r.se_mu = sm.se;
  r.g_nu = sn.mean;
  r.se_nu = sn.se;
  r.diff = sd.mean;
  r.diff_se = sd.se;
  r.diff_ci = mean_interval(sd, z);
  r.failed = failed;
  r.mu_values = mu;
  r.nu_values = nu;
  r.separation = sd.se > 0 ? sd.mean / sd.se : (sd.mean > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  return r;
}

std::vector<Site> circle_boundary_sites(double M) {
  std::vector<Site> out;
  const int r = static_cast<int>(std::ceil(M + 2));
  for (int x = -r; x <= r; ++x) {
    for (int y = -r; y <= r; ++y) {
      if (std::abs(std::hypot(x, y) - M) <= 2.0) out.push_back({x, y});
    }
  }
  return out;
}

std::vector<Site> profile_boundary_sites(const ShapeProfile& prof, double M) {
  double rmax = 0;
  for (double g : prof.g_hat) rmax = std::max(rmax, 1.0 / g);
  std::vector<Site> out;
  const int r = static_cast<int>(std::ceil(M * rmax + 2));
  for (int x = -r; x <= r; ++x) {
    for (int y = -r; y <= r; ++y) {
      if (x == 0 && y == 0) continue;
      const double phi = std::atan2(static_cast<double>(y), static_cast<double>(x));
      if (std::abs(std::hypot(x, y) - M * prof.radius(phi)) <= 2.0) out.push_back({x, y});
    }
  }
  return out;
}

std::vector<Site> covering_points(const std::vector<Site>& boundary_sites, double M, double kappa) {
  if (boundary_sites.empty()) return {};
  const double radius = std::pow(M, kappa);
  std::vector<Site> order = boundary_sites;
  std::sort(order.begin(), order.end(), [](Site a, Site b) {
    const double pa = std::atan2(a.y, a.x), pb = std::atan2(b.y, b.x);
    if (pa != pb) return pa < pb;
    return a < b;
  });
  std::vector<Site> centers;
  for (const Site& s : order) {
    bool far = true;
    for (const Site& c : centers) {
      if (std::hypot(s.x - c.x, s.y - c.y) <= radius) {
        far = false;
        break;
      }
    }
    if (far) centers.push_back(s);
  }
  return centers;
}

std::size_t uncovered_count(const std::vector<Site>& boundary_sites, const std::vector<Site>& centers,
                            double radius) {
  std::size_t bad = 0;
  for (const Site& s : boundary_sites) {
    const bool ok = std::any_of(centers.begin(), centers.end(), [&](Site c) {
      return std::hypot(s.x - c.x, s.y - c.y) <= radius;
    });
    if (!ok) ++bad;
  }
  return bad;
}

}  // namespace fpp
