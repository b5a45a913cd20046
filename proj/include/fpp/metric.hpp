#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpp/distribution.hpp"
#include "fpp/field.hpp"
#include "fpp/lattice.hpp"
#include "fpp/shortest_path.hpp"

namespace fpp {

struct PassageResult {
  double time = 0.0;          // time units
  std::vector<Site> path;     // src ... dst; a single site when src == dst
  bool possible_truncation = false;
};

// Box radius for a target at l1 distance `l1` from the origin.
int padded_radius(double l1);

// Truncation guard: every weight is >= 1, so a path leaving the box costs at
// least the l-infinity gap from src to the box boundary.
bool truncation_possible(const BoxLattice& lat, Site src, double time);

// Minimal passage time and the canonical geodesic. Among optimal predecessors
// the lexicographically smallest site (x, then y) is taken at every step.
PassageResult passage_time(const WeightField& field, Site src, Site dst,
                           Engine engine = Engine::automatic);

class GeodesicDag {
 public:
  GeodesicDag(const WeightField& field, Site src, Site dst, Engine engine = Engine::automatic);

  Site source() const { return src_; }
  Site target() const { return dst_; }
  double total() const { return field_->to_time(total_); }
  double total_stored() const { return total_; }
  const DistanceField& forward() const { return fwd_; }
  const DistanceField& backward() const { return bwd_; }
  bool possible_truncation() const { return truncated_; }

  // Edge lies on some geodesic in at least one orientation.
  bool on_geodesic(EdgeId e) const;
  bool on_geodesic(Site a, Site b) const;

  // Reported edges (ascending index) and their endpoints (the set M_n).
  std::vector<EdgeId> edges() const;
  std::vector<Site> sites() const;

  // Reported edges oriented from source to target, as (tail, head, edge).
  struct Arc {
    SiteId tail;
    SiteId head;
    EdgeId edge;
  };
  std::vector<Arc> arcs() const;

  const WeightField& field() const { return *field_; }

 private:
  bool oriented(SiteId u, SiteId v, EdgeId e) const;

  const WeightField* field_;
  Site src_, dst_;
  DistanceField fwd_, bwd_;
  double total_ = 0.0;
  bool truncated_ = false;
};

inline GeodesicDag geodesic_dag(const WeightField& field, Site src, Site dst) {
  return GeodesicDag(field, src, dst);
}

struct BallSnapshot {
  std::vector<Site> sites;  // in settle order
  bool touches_boundary = false;
};

// B(t) = {y in box : tau(0, y) <= t}.
BallSnapshot ball_snapshot(const WeightField& field, double t);

// Unit square s + [0,1)^2 meets the line {f = r}.
bool square_meets_line(Site s, const LinearFunctional& f, double r);

struct LineHit {
  double time = kInf;
  Site site{};
  bool possible_truncation = false;
};

// b(r): minimal passage time from the origin to a site whose unit square meets
// the line {f = r}.
LineHit line_hitting_time(const WeightField& field, const LinearFunctional& f, double r);

struct GPoint {
  int n = 0;
  Site target{};
  int radius = 0;
  std::size_t reps = 0;
  std::size_t failed = 0;
  double mean = 0.0;   // mean of tau(0, target) / n
  double se = 0.0;
  double variance = 0.0;  // of tau itself
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t truncation_warnings = 0;
};

struct GEstimate {
  std::vector<GPoint> points;
  // For every n with 2n also in the list: mean(2n) <= mean(n) + slack.
  bool subadditive = true;
  std::vector<std::string> warnings;
};

struct EstimateOptions {
  double ci_level = 0.95;
  int threads = 0;
  bool parallel = true;
  std::uint64_t stage = 0;  // cell-id stage, to keep experiments on disjoint streams
};

// Per-n samples of tau(0, round(n w_theta)); one field per (n, rep) cell.
std::vector<std::vector<double>> passage_samples(const WeightDistribution& dist,
                                                 const Direction& dir,
                                                 const std::vector<int>& n_list,
                                                 std::size_t reps, std::uint64_t seed,
                                                 const EstimateOptions& opts,
                                                 std::vector<std::size_t>* truncations = nullptr);

GEstimate g_estimate(const WeightDistribution& dist, const Direction& dir,
                     const std::vector<int>& n_list, std::size_t reps, std::uint64_t seed,
                     const EstimateOptions& opts = {});

}  // namespace fpp
