#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "fpp/field.hpp"

namespace fpp {

enum class Engine {
  automatic,  // bucket queue when the field is exact with small integer weights
  bucket,     // Dial's circular bucket queue; exact fields only
  heap,       // binary heap; any weights. Also the reference engine in tests.
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Result of a single-source search in stored units. Every site whose true
// distance is <= limit is settled: dist[v] is exact and v appears in
// `settled` (nondecreasing distance order). Sites with dist[v] > limit are
// unsettled and their entries are only upper bounds.
struct DistanceField {
  std::vector<double> dist;
  std::vector<SiteId> settled;
  double limit = kInf;
  bool reached_boundary = false;  // some settled site lies on the box boundary

  bool is_settled(SiteId v) const { return dist[v] <= limit; }
};

struct SearchOptions {
  std::optional<SiteId> target;  // once settled, limit shrinks to its distance
  std::vector<SiteId> targets;   // as `target`, once every listed site is settled
  double limit = kInf;           // stored units
  Engine engine = Engine::automatic;
};

void single_source(const WeightField& field, SiteId source, const SearchOptions& opts,
                   DistanceField& out);

inline DistanceField single_source(const WeightField& field, SiteId source,
                                   const SearchOptions& opts = {}) {
  DistanceField out;
  single_source(field, source, opts, out);
  return out;
}

// Equality of stored-unit sums: exact for exact fields, relative 1e-12 otherwise.
inline bool same_length(const WeightField& field, double a, double b) {
  if (field.exact()) return a == b;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace fpp
