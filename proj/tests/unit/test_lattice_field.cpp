#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "fpp/distribution.hpp"
#include "fpp/errors.hpp"
#include "fpp/field.hpp"
#include "fpp/lattice.hpp"

using namespace fpp;

TEST_CASE("site and edge numbering round-trips") {
  const BoxLattice lat(4);
  CHECK(lat.side() == 9);
  CHECK(lat.num_sites() == 81);
  CHECK(lat.num_edges() == 2 * 9 * 8);
  for (SiteId i = 0; i < lat.num_sites(); ++i) CHECK(lat.id(lat.site(i)) == i);
  std::set<Edge> seen;
  for (EdgeId e = 0; e < lat.num_edges(); ++e) {
    const Edge edge = lat.edge(e);
    CHECK(lat.contains(edge));
    CHECK(lat.edge_id(edge) == e);
    seen.insert(edge);
  }
  CHECK(seen.size() == lat.num_edges());
  CHECK(lat.edge_between({1, 2}, {1, 1}) == Edge{{1, 1}, true});
  CHECK(lat.edge_between({0, 0}, {-1, 0}) == Edge{{-1, 0}, false});
}

TEST_CASE("neighbour lists match edge_between") {
  const BoxLattice lat(3);
  std::array<std::pair<SiteId, EdgeId>, 4> nb;
  std::size_t degree_sum = 0;
  for (SiteId s = 0; s < lat.num_sites(); ++s) {
    const int k = lat.neighbours(s, nb);
    degree_sum += k;
    for (int i = 0; i < k; ++i) {
      CHECK(l1_norm(lat.site(nb[i].first) - lat.site(s)) == 1);
      CHECK(lat.edge_id(lat.edge_between(lat.site(s), lat.site(nb[i].first))) == nb[i].second);
    }
  }
  CHECK(degree_sum == 2 * lat.num_edges());
}

TEST_CASE("boundary and containment") {
  const BoxLattice lat(2);
  CHECK(lat.on_boundary({2, 0}));
  CHECK(lat.on_boundary({-2, -2}));
  CHECK_FALSE(lat.on_boundary({1, 1}));
  CHECK_FALSE(lat.contains(Site{3, 0}));
}

TEST_CASE("direction targets") {
  CHECK(Direction{0.0}.target(10) == Site{10, 0});
  CHECK(Direction{std::numbers::pi / 4}.target(10) == Site{7, 7});
  CHECK(round_to_site(-0.5, 1.99) == Site{-1, 1});
  CHECK(Direction{std::numbers::pi / 4}.l1() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("linear functional") {
  const LinearFunctional f{1.0, -1.0};
  CHECK(f.c_f() == 2.0);
  CHECK(f(Site{3, 1}) == 2.0);
}

TEST_CASE("sampled fields are reproducible and exact for atomic laws") {
  const BoxLattice lat(8);
  const auto d = WeightDistribution::two_atom(0.8);
  const auto a = WeightField::sample(lat, d, 99), b = WeightField::sample(lat, d, 99);
  const auto c = WeightField::sample(lat, d, 100);
  CHECK(a.exact());
  CHECK(a.scale() == 1.0);
  CHECK(std::equal(a.stored().begin(), a.stored().end(), b.stored().begin()));
  CHECK_FALSE(std::equal(a.stored().begin(), a.stored().end(), c.stored().begin()));
  for (double w : a.stored()) CHECK((w == 1.0 || w == 2.0));
  CHECK(a.dist_hash() == d.hash());
}

TEST_CASE("fractional atoms use a tick scale") {
  const BoxLattice lat(3);
  const WeightDistribution d({{1.0, 0.5}, {1.25, 0.5}});
  const auto f = WeightField::sample(lat, d, 1);
  CHECK(f.exact());
  CHECK(f.scale() == 4.0);
  for (EdgeId e = 0; e < lat.num_edges(); ++e) {
    CHECK((f.weight(e) == 1.0 || f.weight(e) == 1.25));
    CHECK(f.stored(e) == std::round(f.stored(e)));
  }
}

TEST_CASE("continuous laws are stored raw") {
  const BoxLattice lat(3);
  const WeightDistribution d({{1.0, 0.5}}, {{PieceKind::uniform, 1.0, 2.0, 0.0, 0.5}});
  const auto f = WeightField::sample(lat, d, 1);
  CHECK_FALSE(f.exact());
  CHECK(f.scale() == 1.0);
}

TEST_CASE("from_weights detects exact integer scales") {
  const BoxLattice lat(1);
  std::vector<double> w(lat.num_edges(), 1.0);
  w[0] = 1.5;
  const auto f = WeightField::from_weights(lat, w);
  CHECK(f.exact());
  CHECK(f.scale() == 2.0);
  CHECK(f.weight(EdgeId{0}) == 1.5);
  w[1] = std::numbers::pi;
  CHECK_FALSE(WeightField::from_weights(lat, w).exact());
  CHECK_THROWS(WeightField::from_weights(lat, std::vector<double>(3, 1.0)));
}

TEST_CASE("dump and load round-trip") {
  const BoxLattice lat(5);
  const auto f = WeightField::sample(lat, WeightDistribution::two_atom(0.6, 3.0), 17);
  std::stringstream ss;
  f.dump(ss);
  CHECK(ss.str().substr(0, 4) == "FPPW");
  const auto g = WeightField::load(ss);
  CHECK(g.lattice().radius() == 5);
  CHECK(g.seed() == 17);
  CHECK(g.dist_hash() == f.dist_hash());
  CHECK(g.exact() == f.exact());
  CHECK(std::equal(f.stored().begin(), f.stored().end(), g.stored().begin()));
  std::stringstream bad("FPPX");
  CHECK_THROWS(WeightField::load(bad));
}

TEST_CASE("transformed adds one on heavy edges only") {
  const BoxLattice lat(4);
  const auto f = WeightField::sample(lat, WeightDistribution({{1.0, 0.5}, {2.0, 0.3}, {3.0, 0.2}}), 3);
  const auto g = f.transformed(2.0);
  for (EdgeId e = 0; e < lat.num_edges(); ++e) {
    if (f.weight(e) >= 2.0)
      CHECK(g.weight(e) == f.weight(e) + 1.0);
    else
      CHECK(g.weight(e) == f.weight(e));
  }
}
