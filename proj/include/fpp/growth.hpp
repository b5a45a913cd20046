#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fpp/distribution.hpp"
#include "fpp/field.hpp"
#include "fpp/lattice.hpp"
#include "fpp/stats.hpp"

namespace fpp {

constexpr std::uint8_t kUnoccupied = 255;

struct CompetitionOutcome {
  std::vector<std::uint8_t> labels;  // per site: species 1..k or kUnoccupied
  std::vector<Site> seeds;
  std::vector<bool> boundary_presence;  // species i-1 occupies a site of the box boundary
  std::size_t tolerance_ties = 0;       // near-ties resolved as ties (continuous laws only)

  bool coexist() const;
};

// Strict-winner rule on the passage times from each seed: a site belongs to
// species i when its distance to seed i is strictly below the distance to
// every other seed; otherwise it stays unoccupied.
CompetitionOutcome compete(const WeightField& field, const std::vector<Site>& seeds);

// Raster: "FPPR", u32 version=1, i32 R, u32 k, u64 seed, then one byte per
// site in site order (row-major by y).
void write_raster(std::ostream& out, const WeightField& field, const CompetitionOutcome& c);

// Seeds at radius `radius` in the given directions.
std::vector<Site> seeds_at_radius(double radius, const std::vector<double>& angles);

struct CoexistenceEstimate {
  std::size_t coexist = 0;
  std::size_t reps = 0;
  double frequency = 0.0;
  Interval ci;
  // For nested seed sets: frequency for the first j seeds, j = 1..k, on common fields.
  std::vector<double> nested_frequency;
  std::size_t failed = 0;
  std::vector<std::uint8_t> outcomes;  // per replication, full seed set
};

CoexistenceEstimate coexistence_frequency(const WeightDistribution& dist, const std::vector<Site>& seeds,
                                          int R, std::size_t reps, std::uint64_t seed,
                                          double ci_level = 0.95, int threads = 0, bool parallel = true,
                                          std::uint64_t stage = 0);

// Gamma(0): edges <u,v> with d(0,u) + tau_e = d(0,v) (either orientation).
struct InfectionGraph {
  const WeightField* field = nullptr;
  std::vector<EdgeId> edges;  // ascending
  std::vector<std::uint8_t> member;  // per edge

  bool contains(EdgeId e) const { return member[e] != 0; }
};

InfectionGraph infection_graph(const WeightField& field);

struct EndsCount {
  int r = 0;
  int components = 0;  // components of Gamma minus B_inf(r) containing a boundary site
};

std::vector<EndsCount> ends_estimate(const InfectionGraph& g, const std::vector<int>& r_list);

struct EndsPoint {
  int R = 0;
  int r = 0;
  std::size_t reps = 0;
  double mean = 0.0;
  double se = 0.0;
  Interval ci;
  std::size_t failed = 0;
  std::vector<int> counts;  // per replication
};

// Mean end count after deleting B_inf(r_fraction * R), per R.
std::vector<EndsPoint> ends_experiment(const WeightDistribution& dist, const std::vector<int>& R_list,
                                       double r_fraction, std::size_t reps, std::uint64_t seed,
                                       double ci_level = 0.95, int threads = 0, bool parallel = true,
                                       std::uint64_t stage = 0);

}  // namespace fpp
