#include "fpp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"
#include "fpp/stats.hpp"

namespace fpp {

int padded_radius(double l1) {
  return std::max(4, static_cast<int>(std::ceil(1.5 * l1)));
}

bool truncation_possible(const BoxLattice& lat, Site src, double time) {
  return time >= static_cast<double>(lat.radius() - linf_norm(src));
}

namespace {

void require_interior(const BoxLattice& lat, Site s, const char* what) {
  if (!lat.contains(s) || lat.on_boundary(s))
    throw DomainError(std::string(what) + ": site must lie strictly inside the box");
}

std::vector<Site> canonical_path(const WeightField& field, const DistanceField& df, SiteId src,
                                 SiteId dst) {
  const BoxLattice& lat = field.lattice();
  std::vector<Site> rev{lat.site(dst)};
  std::array<std::pair<SiteId, EdgeId>, 4> nb;
  SiteId v = dst;
  while (v != src) {
    const int k = lat.neighbours(v, nb);
    std::optional<SiteId> best;
    for (int i = 0; i < k; ++i) {
      const SiteId u = nb[i].first;
      if (!df.is_settled(u)) continue;
      if (!same_length(field, df.dist[u] + field.stored(nb[i].second), df.dist[v])) continue;
      if (!best || lat.site(u) < lat.site(*best)) best = u;
    }
    if (!best) throw std::logic_error("canonical_path: broken predecessor chain");
    v = *best;
    rev.push_back(lat.site(v));
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

}  // namespace

PassageResult passage_time(const WeightField& field, Site src, Site dst, Engine engine) {
  const BoxLattice& lat = field.lattice();
  require_interior(lat, src, "passage_time");
  require_interior(lat, dst, "passage_time");
  PassageResult res;
  if (src == dst) {
    res.path = {src};
    return res;
  }
  SearchOptions opts;
  opts.target = lat.id(dst);
  opts.engine = engine;
  const DistanceField df = single_source(field, lat.id(src), opts);
  res.time = field.to_time(df.dist[lat.id(dst)]);
  res.path = canonical_path(field, df, lat.id(src), lat.id(dst));
  res.possible_truncation = truncation_possible(lat, src, res.time);
  return res;
}

GeodesicDag::GeodesicDag(const WeightField& field, Site src, Site dst, Engine engine)
    : field_(&field), src_(src), dst_(dst) {
  const BoxLattice& lat = field.lattice();
  require_interior(lat, src, "geodesic_dag");
  require_interior(lat, dst, "geodesic_dag");
  SearchOptions opts;
  opts.target = lat.id(dst);
  opts.engine = engine;
  single_source(field, lat.id(src), opts, fwd_);
  total_ = fwd_.dist[lat.id(dst)];
  SearchOptions back;
  back.target = lat.id(src);
  back.limit = total_;
  back.engine = engine;
  single_source(field, lat.id(dst), back, bwd_);
  const double t = field.to_time(total_);
  truncated_ = truncation_possible(lat, src, t) || truncation_possible(lat, dst, t);
}

bool GeodesicDag::oriented(SiteId u, SiteId v, EdgeId e) const {
  if (!fwd_.is_settled(u) || !bwd_.is_settled(v)) return false;
  return same_length(*field_, fwd_.dist[u] + field_->stored(e) + bwd_.dist[v], total_);
}

bool GeodesicDag::on_geodesic(EdgeId e) const {
  const BoxLattice& lat = field_->lattice();
  const Edge edge = lat.edge(e);
  const SiteId a = lat.id(edge.from), b = lat.id(edge.to());
  return oriented(a, b, e) || oriented(b, a, e);
}

bool GeodesicDag::on_geodesic(Site a, Site b) const {
  return on_geodesic(field_->lattice().edge_id(field_->lattice().edge_between(a, b)));
}

std::vector<GeodesicDag::Arc> GeodesicDag::arcs() const {
  const BoxLattice& lat = field_->lattice();
  std::vector<Arc> out;
  std::array<std::pair<SiteId, EdgeId>, 4> nb;
  // Tails in settle order, so every arc appears after the arcs into its tail.
  for (SiteId u : fwd_.settled) {
    if (!bwd_.is_settled(u)) continue;
    const int k = lat.neighbours(u, nb);
    for (int i = 0; i < k; ++i) {
      if (oriented(u, nb[i].first, nb[i].second)) out.push_back({u, nb[i].first, nb[i].second});
    }
  }
  return out;
}

std::vector<EdgeId> GeodesicDag::edges() const {
  std::vector<EdgeId> out;
  for (const Arc& a : arcs()) out.push_back(a.edge);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Site> GeodesicDag::sites() const {
  const BoxLattice& lat = field_->lattice();
  if (src_ == dst_) return {src_};
  std::vector<SiteId> ids;
  for (const Arc& a : arcs()) {
    ids.push_back(a.tail);
    ids.push_back(a.head);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Site> out;
  out.reserve(ids.size());
  for (SiteId i : ids) out.push_back(lat.site(i));
  std::sort(out.begin(), out.end());
  return out;
}

BallSnapshot ball_snapshot(const WeightField& field, double t) {
  if (!(t >= 0.0)) throw DomainError("ball_snapshot: t must be >= 0");
  const BoxLattice& lat = field.lattice();
  SearchOptions opts;
  // Stored units; the small slack keeps t * scale from rounding below an exact sum.
  opts.limit = field.exact() ? std::floor(t * field.scale() + 1e-9) : t;
  const DistanceField df = single_source(field, lat.id({0, 0}), opts);
  BallSnapshot ball;
  ball.sites.reserve(df.settled.size());
  for (SiteId v : df.settled) ball.sites.push_back(lat.site(v));
  ball.touches_boundary = df.reached_boundary;
  return ball;
}

bool square_meets_line(Site s, const LinearFunctional& f, double r) {
  // f over s + [0,1)^2 is f(s) + (sum of negative coefficients, sum of positive
  // ones); an end is closed only when no coefficient pushes toward it.
  const double base = f(s);
  double lo = 0.0, hi = 0.0;
  bool lo_open = false, hi_open = false;
  for (double c : {f.c1, f.c2}) {
    if (c > 0) {
      hi += c;
      hi_open = true;
    } else if (c < 0) {
      lo += c;
      lo_open = true;
    }
  }
  const double v = r - base;
  const bool above_lo = lo_open ? v > lo : v >= lo;
  const bool below_hi = hi_open ? v < hi : v <= hi;
  return above_lo && below_hi;
}

LineHit line_hitting_time(const WeightField& field, const LinearFunctional& f, double r) {
  if (!(r >= 1.0)) throw DomainError("line_hitting_time: r must be >= 1");
  const BoxLattice& lat = field.lattice();
  const double R = lat.radius();
  // The line has to pass through the open square (-R, R)^2.
  const double corners[4] = {f(-R, -R), f(R, -R), f(-R, R), f(R, R)};
  if (!(r > *std::min_element(corners, corners + 4) && r < *std::max_element(corners, corners + 4)))
    throw DomainError("line_hitting_time: line misses the box");

  const SiteId origin = lat.id({0, 0});
  const DistanceField df = single_source(field, origin);
  LineHit hit;
  for (SiteId v : df.settled) {
    const Site s = lat.site(v);
    if (square_meets_line(s, f, r)) {
      hit.time = field.to_time(df.dist[v]);
      hit.site = s;
      break;
    }
  }
  if (hit.time == kInf) throw DomainError("line_hitting_time: no lattice square meets the line");
  hit.possible_truncation = truncation_possible(lat, {0, 0}, hit.time);
  return hit;
}

std::vector<std::vector<double>> passage_samples(const WeightDistribution& dist,
                                                 const Direction& dir,
                                                 const std::vector<int>& n_list,
                                                 std::size_t reps, std::uint64_t seed,
                                                 const EstimateOptions& opts,
                                                 std::vector<std::size_t>* truncations) {
  std::vector<std::vector<double>> out(n_list.size());
  if (truncations) truncations->assign(n_list.size(), 0);
  for (std::size_t slot = 0; slot < n_list.size(); ++slot) {
    const int n = n_list[slot];
    const Site target = dir.target(n);
    const BoxLattice lat(padded_radius(l1_norm(target)));
    struct Cell {
      double tau;
      bool truncated;
    };
    auto cells = replicate<Cell>(
        reps,
        [&](std::size_t rep) {
          const auto field =
              WeightField::sample(lat, dist, derive_key(seed, cell_id(opts.stage, slot, rep)));
          SearchOptions so;
          so.target = lat.id(target);
          const DistanceField df = single_source(field, lat.id({0, 0}), so);
          const double tau = field.to_time(df.dist[lat.id(target)]);
          return Cell{tau, truncation_possible(lat, {0, 0}, tau)};
        },
        RunOptions{opts.threads, opts.parallel});
    for (const auto& c : cells) {
      if (!c.value) continue;
      out[slot].push_back(c.value->tau);
      if (truncations && c.value->truncated) ++(*truncations)[slot];
    }
  }
  return out;
}

GEstimate g_estimate(const WeightDistribution& dist, const Direction& dir,
                     const std::vector<int>& n_list, std::size_t reps, std::uint64_t seed,
                     const EstimateOptions& opts) {
  if (!std::is_sorted(n_list.begin(), n_list.end()) || n_list.empty() || n_list.front() < 1)
    throw ConfigError("g_estimate: n_list must be ascending positive integers");
  std::vector<std::size_t> trunc;
  const auto samples = passage_samples(dist, dir, n_list, reps, seed, opts, &trunc);
  const double z = z_for_level(opts.ci_level);
  GEstimate est;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    GPoint pt;
    pt.n = n_list[i];
    pt.target = dir.target(pt.n);
    pt.radius = padded_radius(l1_norm(pt.target));
    pt.reps = samples[i].size();
    pt.failed = reps - samples[i].size();
    std::vector<double> scaled(samples[i]);
    for (double& v : scaled) v /= pt.n;
    const Summary s = summarize(scaled);
    pt.mean = s.mean;
    pt.se = s.se;
    pt.variance = s.variance * pt.n * pt.n;
    pt.ci_lo = s.mean - z * s.se;
    pt.ci_hi = s.mean + z * s.se;
    pt.truncation_warnings = trunc[i];
    if (trunc[i] > 0)
      est.warnings.push_back("possible truncation at n=" + std::to_string(pt.n) + " in " +
                             std::to_string(trunc[i]) + " replications");
    if (pt.failed > 0)
      est.warnings.push_back(std::to_string(pt.failed) + " failed replications at n=" +
                             std::to_string(pt.n));
    est.points.push_back(pt);
  }
  for (const auto& a : est.points) {
    for (const auto& b : est.points) {
      if (b.n != 2 * a.n) continue;
      // Rounding of the targets moves each endpoint by less than one site.
      const double slack = z * (a.se + b.se) + 2.0 / a.n;
      if (b.mean > a.mean + slack) est.subadditive = false;
    }
  }
  return est;
}

}  // namespace fpp
