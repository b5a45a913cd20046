#pragma once

// Exhaustive path enumeration on a 4x4 block of sites {-1..2}^2 inside the
// radius-3 box. Every edge leaving the block weighs 100, more than any simple
// path inside it (15 edges of weight <= 3), so optima never leave the block.

#include <functional>
#include <set>
#include <vector>

#include "fpp/distribution.hpp"
#include "fpp/field.hpp"
#include "fpp/lattice.hpp"
#include "fpp/rng.hpp"

namespace brute {

constexpr int kLo = -1, kHi = 2;
constexpr double kBlocking = 100.0;

inline bool in_block(fpp::Site s) { return s.x >= kLo && s.x <= kHi && s.y >= kLo && s.y <= kHi; }

inline std::vector<fpp::Site> block_sites() {
  std::vector<fpp::Site> v;
  for (int y = kLo; y <= kHi; ++y)
    for (int x = kLo; x <= kHi; ++x) v.push_back({x, y});
  return v;
}

inline const fpp::WeightDistribution& law() {
  static const fpp::WeightDistribution d({{1.0, 0.5}, {2.0, 0.3}, {3.0, 0.2}});
  return d;
}

inline fpp::WeightField random_block_field(std::uint64_t seed) {
  const fpp::BoxLattice lat(3);
  auto rs = fpp::seed_stream(seed, 0);
  std::vector<double> w(lat.num_edges(), kBlocking);
  for (fpp::EdgeId e = 0; e < lat.num_edges(); ++e) {
    const fpp::Edge edge = lat.edge(e);
    if (in_block(edge.from) && in_block(edge.to())) w[e] = law().sample(rs);
  }
  return fpp::WeightField::from_weights(lat, std::move(w));
}

struct PathSet {
  double best = 1e300;
  std::vector<std::vector<fpp::EdgeId>> optimal;
};

// Every simple path from src to dst inside the block; keeps the optimal ones.
inline PathSet enumerate(const fpp::WeightField& f, fpp::Site src, fpp::Site dst) {
  const fpp::BoxLattice& lat = f.lattice();
  PathSet out;
  std::set<fpp::Site> seen{src};
  std::vector<fpp::EdgeId> path;
  std::function<void(fpp::Site, double)> dfs = [&](fpp::Site v, double len) {
    if (len > out.best + 1e-9) return;
    if (v == dst) {
      if (len < out.best - 1e-9) {
        out.best = len;
        out.optimal.clear();
      }
      out.optimal.push_back(path);
      return;
    }
    for (fpp::Site d : {fpp::Site{1, 0}, fpp::Site{-1, 0}, fpp::Site{0, 1}, fpp::Site{0, -1}}) {
      const fpp::Site u = v + d;
      if (!in_block(u) || seen.count(u)) continue;
      const fpp::EdgeId e = lat.edge_id(lat.edge_between(v, u));
      seen.insert(u);
      path.push_back(e);
      dfs(u, len + f.weight(e));
      path.pop_back();
      seen.erase(u);
    }
  };
  if (src == dst) {
    out.best = 0;
    out.optimal.push_back({});
    return out;
  }
  dfs(src, 0.0);
  return out;
}

inline double distance(const fpp::WeightField& f, fpp::Site a, fpp::Site b) { return enumerate(f, a, b).best; }

}  // namespace brute
