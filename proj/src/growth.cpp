#include "fpp/growth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"
#include "fpp/shortest_path.hpp"

namespace fpp {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }

  std::uint32_t find(std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::vector<std::uint32_t> parent;
};

// Labels from per-seed distance fields, using the first `k` of them.
CompetitionOutcome label(const WeightField& field, const std::vector<Site>& seeds,
                         const std::vector<DistanceField>& d, std::size_t k) {
  const BoxLattice& lat = field.lattice();
  CompetitionOutcome out;
  out.seeds.assign(seeds.begin(), seeds.begin() + static_cast<std::ptrdiff_t>(k));
  out.labels.assign(lat.num_sites(), kUnoccupied);
  out.boundary_presence.assign(k, false);
  for (SiteId v = 0; v < lat.num_sites(); ++v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < k; ++i) {
      if (d[i].dist[v] < d[best].dist[v]) best = i;
    }
    bool tie = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == best || !same_length(field, d[i].dist[v], d[best].dist[v])) continue;
      tie = true;
      if (d[i].dist[v] != d[best].dist[v]) ++out.tolerance_ties;
    }
    if (tie || d[best].dist[v] == kInf) continue;
    out.labels[v] = static_cast<std::uint8_t>(best + 1);
    if (lat.on_boundary(lat.site(v))) out.boundary_presence[best] = true;
  }
  return out;
}

std::vector<DistanceField> seed_distances(const WeightField& field, const std::vector<Site>& seeds) {
  const BoxLattice& lat = field.lattice();
  if (seeds.empty()) throw DomainError("compete: need at least one seed");
  if (seeds.size() > 254) throw DomainError("compete: at most 254 species");
  std::set<Site> uniq(seeds.begin(), seeds.end());
  if (uniq.size() != seeds.size()) throw DomainError("compete: duplicate seeds");
  for (const Site& s : seeds) {
    if (!lat.contains(s)) throw DomainError("compete: seed outside the box");
  }
  std::vector<DistanceField> d(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) single_source(field, lat.id(seeds[i]), {}, d[i]);
  return d;
}

}  // namespace

bool CompetitionOutcome::coexist() const {
  return std::all_of(boundary_presence.begin(), boundary_presence.end(), [](bool b) { return b; });
}

CompetitionOutcome compete(const WeightField& field, const std::vector<Site>& seeds) {
  const auto d = seed_distances(field, seeds);
  return label(field, seeds, d, seeds.size());
}

void write_raster(std::ostream& out, const WeightField& field, const CompetitionOutcome& c) {
  auto put = [&out](const auto& v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); };
  out.write("FPPR", 4);
  put(std::uint32_t{1});
  put(static_cast<std::int32_t>(field.lattice().radius()));
  put(static_cast<std::uint32_t>(c.seeds.size()));
  put(field.seed());
  out.write(reinterpret_cast<const char*>(c.labels.data()), static_cast<std::streamsize>(c.labels.size()));
}

std::vector<Site> seeds_at_radius(double radius, const std::vector<double>& angles) {
  std::vector<Site> out;
  for (double a : angles) out.push_back({static_cast<int>(std::lround(radius * std::cos(a))),
                                         static_cast<int>(std::lround(radius * std::sin(a)))});
  return out;
}

CoexistenceEstimate coexistence_frequency(const WeightDistribution& dist, const std::vector<Site>& seeds,
                                          int R, std::size_t reps, std::uint64_t seed,
                                          double ci_level, int threads, bool parallel,
                                          std::uint64_t stage) {
  const BoxLattice lat(R);
  const std::size_t k = seeds.size();
  auto cells = replicate<std::vector<std::uint8_t>>(
      reps,
      [&](std::size_t rep) {
        const auto field = WeightField::sample(lat, dist, derive_key(seed, cell_id(stage, 0, rep)));
        const auto d = seed_distances(field, seeds);
        std::vector<std::uint8_t> nested(k);
        for (std::size_t j = 1; j <= k; ++j) nested[j - 1] = label(field, seeds, d, j).coexist();
        return nested;
      },
      RunOptions{threads, parallel});
  CoexistenceEstimate est;
  const auto rows = successful(cells, &est.failed);
  est.reps = rows.size();
  est.nested_frequency.assign(k, 0.0);
  for (const auto& r : rows) {
    est.coexist += r[k - 1];
    est.outcomes.push_back(r[k - 1]);
    for (std::size_t j = 0; j < k; ++j) est.nested_frequency[j] += r[j];
  }
  for (double& f : est.nested_frequency) f /= std::max<std::size_t>(est.reps, 1);
  est.frequency = est.reps ? static_cast<double>(est.coexist) / est.reps : 0.0;
  est.ci = wilson_interval(est.coexist, est.reps, z_for_level(ci_level));
  return est;
}

InfectionGraph infection_graph(const WeightField& field) {
  const BoxLattice& lat = field.lattice();
  const DistanceField d = single_source(field, lat.id({0, 0}));
  InfectionGraph g;
  g.field = &field;
  g.member.assign(lat.num_edges(), 0);
  for (EdgeId e = 0; e < lat.num_edges(); ++e) {
    const Edge edge = lat.edge(e);
    const SiteId a = lat.id(edge.from), b = lat.id(edge.to());
    const double w = field.stored(e);
    if (same_length(field, d.dist[a] + w, d.dist[b]) || same_length(field, d.dist[b] + w, d.dist[a])) {
      g.member[e] = 1;
      g.edges.push_back(e);
    }
  }
  return g;
}

std::vector<EndsCount> ends_estimate(const InfectionGraph& g, const std::vector<int>& r_list) {
  const BoxLattice& lat = g.field->lattice();
  std::vector<EndsCount> out;
  for (int r : r_list) {
    if (r < 0 || 2 * r >= lat.radius()) throw DomainError("ends_estimate: need 0 <= r < R/2");
    DisjointSets ds(lat.num_sites());
    for (EdgeId e : g.edges) {
      const Edge edge = lat.edge(e);
      if (linf_norm(edge.from) <= r || linf_norm(edge.to()) <= r) continue;
      ds.unite(lat.id(edge.from), lat.id(edge.to()));
    }
    std::set<std::uint32_t> roots;
    const int R = lat.radius();
    for (int t = -R; t <= R; ++t) {
      for (const Site s : {Site{t, -R}, Site{t, R}, Site{-R, t}, Site{R, t}}) roots.insert(ds.find(lat.id(s)));
    }
    out.push_back({r, static_cast<int>(roots.size())});
  }
  return out;
}

std::vector<EndsPoint> ends_experiment(const WeightDistribution& dist, const std::vector<int>& R_list,
                                       double r_fraction, std::size_t reps, std::uint64_t seed,
                                       double ci_level, int threads, bool parallel,
                                       std::uint64_t stage) {
  const double z = z_for_level(ci_level);
  std::vector<EndsPoint> out;
  for (std::size_t slot = 0; slot < R_list.size(); ++slot) {
    const int R = R_list[slot];
    const int r = static_cast<int>(std::floor(r_fraction * R));
    const BoxLattice lat(R);
    auto cells = replicate<double>(
        reps,
        [&](std::size_t rep) {
          const auto field = WeightField::sample(lat, dist, derive_key(seed, cell_id(stage, slot, rep)));
          const InfectionGraph g = infection_graph(field);
          return static_cast<double>(ends_estimate(g, {r}).front().components);
        },
        RunOptions{threads, parallel});
    EndsPoint pt;
    const auto counts = successful(cells, &pt.failed);
    const Summary s = summarize(counts);
    pt.R = R;
    pt.r = r;
    pt.reps = counts.size();
    pt.mean = s.mean;
    pt.se = s.se;
    pt.ci = mean_interval(s, z);
    for (double c : counts) pt.counts.push_back(static_cast<int>(c));
    out.push_back(pt);
  }
  return out;
}

}  // namespace fpp
