#include <doctest.h>

#include <algorithm>
#include <set>

#include "brute.hpp"
#include "fpp/errors.hpp"
#include "fpp/growth.hpp"
#include "fpp/metric.hpp"
#include "fpp/shortest_path.hpp"

using namespace fpp;

namespace {

constexpr int kFields = 100;

WeightField ones(int R) {
  const BoxLattice lat(R);
  return WeightField::from_weights(lat, std::vector<double>(lat.num_edges(), 1.0));
}

double path_length(const WeightField& f, const std::vector<Site>& path) {
  double t = 0;
  for (std::size_t i = 1; i < path.size(); ++i) t += f.weight(f.lattice().edge_between(path[i - 1], path[i]));
  return t;
}

}  // namespace

TEST_CASE("passage time matches exhaustive enumeration on 4x4 blocks") {
  const auto sites = brute::block_sites();
  for (int k = 0; k < kFields; ++k) {
    const auto f = brute::random_block_field(1000 + k);
    const Site src = sites[k % sites.size()], dst = sites[(7 * k + 5) % sites.size()];
    const auto ps = brute::enumerate(f, src, dst);
    for (Engine e : {Engine::heap, Engine::bucket, Engine::automatic}) {
      const auto r = passage_time(f, src, dst, e);
      CHECK(r.time == ps.best);
      CHECK(r.path.front() == src);
      CHECK(r.path.back() == dst);
      CHECK(path_length(f, r.path) == r.time);
      std::vector<EdgeId> ids;
      for (std::size_t i = 1; i < r.path.size(); ++i)
        ids.push_back(f.lattice().edge_id(f.lattice().edge_between(r.path[i - 1], r.path[i])));
      CHECK(std::find(ps.optimal.begin(), ps.optimal.end(), ids) != ps.optimal.end());
    }
  }
}

TEST_CASE("geodesic DAG is the union of the optimal paths") {
  const auto sites = brute::block_sites();
  for (int k = 0; k < kFields; ++k) {
    const auto f = brute::random_block_field(2000 + k);
    const Site src = sites[(3 * k) % sites.size()], dst = sites[(5 * k + 11) % sites.size()];
    if (src == dst) continue;
    const auto ps = brute::enumerate(f, src, dst);
    std::set<EdgeId> expect;
    for (const auto& p : ps.optimal) expect.insert(p.begin(), p.end());
    const GeodesicDag dag(f, src, dst);
    const auto got = dag.edges();
    CHECK(std::set<EdgeId>(got.begin(), got.end()) == expect);
    CHECK(dag.total() == ps.best);
    for (const auto& arc : dag.arcs()) CHECK(expect.count(arc.edge) == 1);
  }
}

TEST_CASE("canonical geodesic is deterministic") {
  const auto f = brute::random_block_field(5);
  const auto a = passage_time(f, {-1, -1}, {2, 2}), b = passage_time(f, {-1, -1}, {2, 2});
  CHECK(a.path == b.path);
}

TEST_CASE("two-species competition matches brute-force labels") {
  const auto sites = brute::block_sites();
  for (int k = 0; k < kFields; ++k) {
    const auto f = brute::random_block_field(3000 + k);
    const Site s1 = sites[k % 16], s2 = sites[(k + 1 + k / 16) % 16];
    if (s1 == s2) continue;
    const auto out = compete(f, {s1, s2});
    for (Site z : sites) {
      const double d1 = brute::distance(f, s1, z), d2 = brute::distance(f, s2, z);
      const std::uint8_t expect = d1 < d2 ? 1 : d2 < d1 ? 2 : kUnoccupied;
      CHECK(out.labels[f.lattice().id(z)] == expect);
    }
  }
}

TEST_CASE("infection graph matches brute-force distances on block edges") {
  for (int k = 0; k < kFields; ++k) {
    const auto f = brute::random_block_field(4000 + k);
    const auto g = infection_graph(f);
    const BoxLattice& lat = f.lattice();
    for (EdgeId e = 0; e < lat.num_edges(); ++e) {
      const Edge edge = lat.edge(e);
      if (!brute::in_block(edge.from) || !brute::in_block(edge.to())) continue;
      const double du = brute::distance(f, {0, 0}, edge.from), dv = brute::distance(f, {0, 0}, edge.to());
      const bool expect = du + f.weight(e) == dv || dv + f.weight(e) == du;
      CHECK(g.contains(e) == expect);
    }
  }
}

TEST_CASE("bucket and heap engines agree on sampled fields") {
  const BoxLattice lat(24);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = WeightField::sample(lat, WeightDistribution({{1.0, 0.6}, {1.5, 0.3}, {4.0, 0.1}}), seed);
    SearchOptions h, b;
    h.engine = Engine::heap;
    b.engine = Engine::bucket;
    const auto dh = single_source(f, lat.id({0, 0}), h), db = single_source(f, lat.id({0, 0}), b);
    CHECK(dh.dist == db.dist);
  }
}

TEST_CASE("bucket engine rejects continuous fields") {
  const BoxLattice lat(3);
  const auto f = WeightField::sample(lat, WeightDistribution({{1.0, 0.5}}, {{PieceKind::uniform, 1.0, 2.0, 0.0, 0.5}}), 1);
  SearchOptions b;
  b.engine = Engine::bucket;
  CHECK_THROWS(single_source(f, lat.id({0, 0}), b));
}

TEST_CASE("limit settles exactly the sites within it") {
  const BoxLattice lat(10);
  const auto f = WeightField::sample(lat, WeightDistribution::two_atom(0.5), 8);
  const auto full = single_source(f, lat.id({0, 0}));
  SearchOptions o;
  o.limit = 6;
  const auto part = single_source(f, lat.id({0, 0}), o);
  for (SiteId v = 0; v < lat.num_sites(); ++v) {
    if (full.dist[v] <= 6) {
      CHECK(part.is_settled(v));
      CHECK(part.dist[v] == full.dist[v]);
    }
  }
  CHECK(std::is_sorted(part.settled.begin(), part.settled.end(),
                       [&](SiteId a, SiteId b) { return part.dist[a] < part.dist[b]; }));
}

TEST_CASE("unit weights give the l1 ball") {
  const auto f = ones(12);
  for (int t = 0; t <= 10; ++t) {
    const auto ball = ball_snapshot(f, t);
    CHECK(ball.sites.size() == static_cast<std::size_t>(2 * t * t + 2 * t + 1));
    for (Site s : ball.sites) CHECK(l1_norm(s) <= t);
    CHECK(ball.touches_boundary == (t >= 12));
  }
  CHECK(passage_time(f, {0, 0}, {5, -3}).time == 8);
}

TEST_CASE("metric axioms on a sampled field") {
  const BoxLattice lat(8);
  const auto f = WeightField::sample(lat, WeightDistribution({{1.0, 0.5}, {2.0, 0.3}, {3.0, 0.2}}), 21);
  const Site pts[] = {{0, 0}, {3, -2}, {-4, 5}, {6, 6}, {-1, -7}};
  for (Site a : pts) {
    CHECK(passage_time(f, a, a).time == 0);
    for (Site b : pts) {
      const double ab = passage_time(f, a, b).time;
      CHECK(ab == passage_time(f, b, a).time);
      if (!(a == b)) CHECK(ab >= l1_norm(a - b));
      for (Site c : pts) CHECK(passage_time(f, a, c).time <= ab + passage_time(f, b, c).time);
    }
  }
}

TEST_CASE("sites on the boundary are rejected") {
  const auto f = ones(3);
  CHECK_THROWS_AS(passage_time(f, {0, 0}, {3, 0}), DomainError);
  CHECK_THROWS_AS(GeodesicDag(f, {0, 0}, {0, 4}), DomainError);
}

TEST_CASE("truncation flag") {
  const BoxLattice lat(5);
  CHECK(truncation_possible(lat, {0, 0}, 5));
  CHECK_FALSE(truncation_possible(lat, {0, 0}, 4.5));
  CHECK(truncation_possible(lat, {3, 0}, 2));
  CHECK(padded_radius(2) == 4);
  CHECK(padded_radius(10) == 15);
}

TEST_CASE("line hitting time") {
  const auto f = ones(12);
  const LinearFunctional f1{1.0, -1.0};
  CHECK(square_meets_line({3, 0}, f1, 3.0));
  CHECK(square_meets_line({3, 0}, f1, 3.5));
  CHECK_FALSE(square_meets_line({3, 0}, f1, 4.0));
  CHECK_FALSE(square_meets_line({3, 0}, f1, 2.0));
  const LinearFunctional axis{1.0, 0.0};
  CHECK(square_meets_line({2, 5}, axis, 2.0));
  CHECK(square_meets_line({2, 5}, axis, 2.999));
  CHECK_FALSE(square_meets_line({2, 5}, axis, 3.0));
  for (int r = 1; r <= 6; ++r) CHECK(line_hitting_time(f, f1, r).time == r);
  CHECK(line_hitting_time(f, axis, 3.5).time == 3);
  CHECK_THROWS_AS(line_hitting_time(f, f1, 0.5), DomainError);
  CHECK_THROWS_AS(line_hitting_time(f, axis, 40), DomainError);
}

TEST_CASE("g estimate on the degenerate law is the l1 norm") {
  const WeightDistribution one({{1.0, 1.0}});
  const auto g = g_estimate(one, Direction{0.0}, {8, 16}, 4, 1);
  for (const auto& p : g.points) {
    CHECK(p.mean == 1.0);
    CHECK(p.variance == 0.0);
  }
  CHECK(g.subadditive);
}
