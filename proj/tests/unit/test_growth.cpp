#include <doctest.h>

#include <numbers>
#include <sstream>

#include "fpp/distribution.hpp"
#include "fpp/growth.hpp"
#include "fpp/metric.hpp"

using namespace fpp;

namespace {

WeightField ones(int R) {
  const BoxLattice lat(R);
  return WeightField::from_weights(lat, std::vector<double>(lat.num_edges(), 1.0));
}

}  // namespace

TEST_CASE("unit weights split the box between two seeds") {
  const auto f = ones(6);
  const auto c = compete(f, {{-2, 0}, {2, 0}});
  const BoxLattice& lat = f.lattice();
  CHECK(c.labels[lat.id({-1, 3})] == 1);
  CHECK(c.labels[lat.id({1, -3})] == 2);
  CHECK(c.labels[lat.id({0, 5})] == kUnoccupied);  // equidistant
  CHECK(c.coexist());
  CHECK(c.boundary_presence == std::vector<bool>{true, true});
}

TEST_CASE("a single seed owns every site") {
  const auto f = ones(4);
  const auto c = compete(f, {{0, 0}});
  for (auto l : c.labels) CHECK(l == 1);
  CHECK(c.coexist());  // trivially: the only species reaches the boundary
}

TEST_CASE("a walled-in species does not coexist") {
  // Seed 1 at the origin is enclosed by heavy edges; seed 2 takes the rest.
  const BoxLattice lat(6);
  std::vector<double> w(lat.num_edges(), 1.0);
  for (Site d : {Site{1, 0}, Site{-1, 0}, Site{0, 1}, Site{0, -1}}) w[lat.edge_id(lat.edge_between({0, 0}, d))] = 50.0;
  const auto c = compete(WeightField::from_weights(lat, w), {{0, 0}, {3, 3}});
  CHECK(c.boundary_presence == std::vector<bool>{false, true});
  CHECK_FALSE(c.coexist());
}

TEST_CASE("raster layout") {
  const auto f = ones(3);
  const auto c = compete(f, {{-1, 0}, {1, 0}});
  std::ostringstream out;
  write_raster(out, f, c);
  const std::string s = out.str();
  CHECK(s.substr(0, 4) == "FPPR");
  CHECK(s.size() == 4 + 4 + 4 + 4 + 8 + 49);
}

TEST_CASE("seeds at radius") {
  const auto s = seeds_at_radius(8, {0.0, std::numbers::pi / 2, std::numbers::pi});
  CHECK(s == std::vector<Site>{{8, 0}, {0, 8}, {-8, 0}});
}

TEST_CASE("coexistence frequency is reproducible across thread modes") {
  const auto d = WeightDistribution::two_atom(0.6);
  const auto seeds = seeds_at_radius(3, {0.0, std::numbers::pi});
  const auto a = coexistence_frequency(d, seeds, 20, 12, 7);
  const auto b = coexistence_frequency(d, seeds, 20, 12, 7, 0.95, 0, false);
  CHECK(a.outcomes == b.outcomes);
  CHECK(a.frequency == b.frequency);
  CHECK(a.nested_frequency.size() == 2);
  CHECK(a.nested_frequency[0] == 1.0);  // a single species trivially survives
}

TEST_CASE("infection graph of unit weights") {
  const auto f = ones(5);
  const auto g = infection_graph(f);
  // Every edge joins l1 levels k and k+1 except the ones along a level, which
  // do not exist on Z^2; so every edge is in the graph.
  CHECK(g.edges.size() == f.lattice().num_edges());
}

TEST_CASE("end counts") {
  // Unit weights: every boundary site reachable after removing a central box.
  const auto f = ones(8);
  const auto g = infection_graph(f);
  const auto ends = ends_estimate(g, {2});
  REQUIRE(ends.size() == 1);
  CHECK(ends[0].r == 2);
  CHECK(ends[0].components == 1);
}

TEST_CASE("ends experiment") {
  const auto pts = ends_experiment(WeightDistribution::two_atom(0.8), {16, 32}, 0.125, 3, 2);
  REQUIRE(pts.size() == 2);
  for (const auto& p : pts) {
    CHECK(p.reps == 3);
    CHECK(p.mean >= 1.0);
    CHECK(p.counts.size() == 3);
  }
}
