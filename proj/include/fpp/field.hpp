#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fpp/distribution.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// Sampled edge weights on a box. Weights live in "stored units": for purely
// atomic laws with a tick scale s they are the exact integers value * s, so
// every sum and equality test on them is exact; otherwise s = 1 and they are
// the raw doubles. Immutable after construction.
class WeightField {
 public:
  // Edge e draws from the counter-based stream keyed by `seed` at index e, so the
  // field is a pure function of (dist, seed, R).
  static WeightField sample(const BoxLattice& lattice, const WeightDistribution& dist,
                            std::uint64_t seed);

  // Handcrafted weights (time units) in edge-index order.
  static WeightField from_weights(const BoxLattice& lattice, std::vector<double> weights);

  const BoxLattice& lattice() const { return lattice_; }
  std::span<const double> stored() const { return stored_; }
  double stored(EdgeId e) const { return stored_[e]; }
  double weight(EdgeId e) const { return stored_[e] / scale_; }
  double weight(const Edge& e) const { return weight(lattice_.edge_id(e)); }

  // Stored value of a unit weight; equals the tick scale in exact mode.
  double scale() const { return scale_; }
  double max_stored() const { return max_stored_; }
  bool exact() const { return exact_; }
  double to_time(double stored_value) const { return stored_value / scale_; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t dist_hash() const { return dist_hash_; }

  // Pointwise t -> t + 1 on edges with t >= y (the coupling behind the
  // more-variable comparison).
  WeightField transformed(double y) const;

  // Binary layout (little-endian): "FPPW", u32 version=1, i32 R, u64 seed,
  // u64 dist hash, f64 scale, u8 exact, u64 edge count, then f64 stored weights
  // in edge-index order.
  void dump(std::ostream& out) const;
  static WeightField load(std::istream& in);

 private:
  WeightField(const BoxLattice& lattice, std::vector<double> stored, double scale, bool exact,
              std::uint64_t seed, std::uint64_t dist_hash)
      : lattice_(lattice), stored_(std::move(stored)), scale_(scale), exact_(exact),
        seed_(seed), dist_hash_(dist_hash) {
    for (double w : stored_) max_stored_ = std::max(max_stored_, w);
  }

  BoxLattice lattice_;
  std::vector<double> stored_;
  double scale_ = 1.0;
  bool exact_ = false;
  std::uint64_t seed_ = 0;
  std::uint64_t dist_hash_ = 0;
  double max_stored_ = 0.0;
};

}  // namespace fpp
