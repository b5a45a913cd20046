#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "brute.hpp"
#include "fpp/errors.hpp"
#include "fpp/metric.hpp"
#include "fpp/shapefluct.hpp"

using namespace fpp;

namespace {

constexpr double kQuarter = std::numbers::pi / 4;

// l1 unit sphere sampled on [0, pi/4].
ShapeProfile l1_profile(int points = 9) {
  ShapeProfile p;
  for (int i = 0; i < points; ++i) {
    const double a = kQuarter * i / (points - 1);
    p.angles.push_back(a);
    p.g_hat.push_back(std::cos(a) + std::sin(a));
    p.se.push_back(0.001);
  }
  p.R = 64;
  p.reps = 10;
  return p;
}

}  // namespace

TEST_CASE("profile radius uses the lattice symmetries") {
  const auto p = l1_profile();
  CHECK(p.radius(0.0) == doctest::Approx(1.0));
  CHECK(p.radius(kQuarter) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(p.radius(std::numbers::pi / 2) == doctest::Approx(1.0));
  CHECK(p.radius(3 * kQuarter) == doctest::Approx(p.radius(kQuarter)));
  CHECK(p.radius(-0.3) == doctest::Approx(p.radius(0.3)));
  CHECK(p.radius(std::numbers::pi / 2 - 0.2) == doctest::Approx(p.radius(0.2)));
  CHECK(p.norm(3.0, -4.0) == doctest::Approx(7.0).epsilon(0.01));
  CHECK_THROWS_AS(ShapeProfile{}.radius(0.0), ConfigError);
}

TEST_CASE("profile JSON round-trip") {
  auto p = l1_profile();
  p.l1_ratio.assign(p.angles.size(), 1.0);
  p.l1_ratio_se.assign(p.angles.size(), 0.0);
  p.dist_hash = 12345;
  std::stringstream ss;
  p.write_json(ss);
  const auto q = ShapeProfile::read_json(ss);
  CHECK(q.angles == p.angles);
  CHECK(q.g_hat == p.g_hat);
  CHECK(q.dist_hash == 12345);
  CHECK(q.l1_ratio == p.l1_ratio);
  std::stringstream bad("{\"kind\": \"other\"}");
  CHECK_THROWS_AS(ShapeProfile::read_json(bad), ConfigError);
}

TEST_CASE("degenerate law gives the l1 shape with zero variance") {
  const WeightDistribution one({{1.0, 1.0}});
  const std::vector<double> angles{0.0, 0.4, kQuarter};
  const auto prof = shape_estimate(one, 64, angles, 3, 1);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    CHECK(prof.l1_ratio[i] == doctest::Approx(1.0));
    CHECK(prof.se[i] == 0.0);
  }
  CHECK(prof.samples.size() == 3);
  CHECK(prof.symmetric);
}

TEST_CASE("shape estimate is symmetric within CI") {
  const auto prof = shape_estimate(WeightDistribution::two_atom(0.5), 64,
                                   {0.0, 0.3, kQuarter, std::numbers::pi / 2 - 0.3, std::numbers::pi / 2}, 30, 2);
  CHECK(prof.symmetric);
  CHECK(prof.g_hat[0] > 1.0);
  CHECK(prof.g_hat[2] < std::sqrt(2.0) * 1.5);
}

TEST_CASE("cone endpoint from a synthetic profile") {
  // Flat (ratio 1) from 0.5 to the diagonal, rising linearly to 1.1 at the axis.
  ShapeProfile p;
  for (int i = 0; i <= 10; ++i) {
    const double a = kQuarter * i / 10;
    p.angles.push_back(a);
    p.l1_ratio.push_back(a >= 0.5 ? 1.0 : 1.1 - 0.2 * a);
    p.l1_ratio_se.push_back(0.0);
    p.g_hat.push_back(p.l1_ratio.back() * (std::cos(a) + std::sin(a)));
    p.se.push_back(0.0);
  }
  FlatEdgeReport r;
  empirical_cone(p, 0.02, 1.96, r);
  CHECK_FALSE(r.cone_empty);
  CHECK(r.cone_endpoint == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(r.endpoint_se == 0.0);
  // Everything above the level: empty cone.
  for (auto& v : p.l1_ratio) v = 1.5;
  empirical_cone(p, 0.02, 1.96, r);
  CHECK(r.cone_empty);
}

TEST_CASE("theta from alpha") {
  CHECK(theta_from_alpha(0.0) == doctest::Approx(kQuarter));
  CHECK(theta_from_alpha(std::sqrt(2.0) / 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(theta_from_alpha(0.4) < theta_from_alpha(0.2));
}

TEST_CASE("subcritical flat-edge check skips alpha") {
  const auto r = flat_edge_check(WeightDistribution::two_atom(0.3), 64, {0.0, 0.4, kQuarter}, 5, 5, 0.02, 0.6447, 1);
  CHECK_FALSE(r.supercritical);
  CHECK(r.alpha_values.empty());
  CHECK_FALSE(r.agree);
}

TEST_CASE("variance fit") {
  std::vector<VariancePoint> pts;
  for (int n : {16, 64, 256}) {
    VariancePoint p;
    p.n = n;
    p.variance = 2.0 + 3.0 * std::log(n);
    p.variance_se = 0.1;
    pts.push_back(p);
  }
  const auto vp = fit_variance(pts, 1.96);
  CHECK(vp.weighted);
  CHECK(vp.fit.slope == doctest::Approx(3.0));
  CHECK(vp.slope_ci.contains(3.0));
  for (auto& p : pts) p.variance = p.variance_se = 0;
  const auto flat = fit_variance(pts, 1.96);
  CHECK(flat.slope_ci.lo == 0.0);
  CHECK(flat.slope_ci.hi == 0.0);
}

TEST_CASE("variance is zero for p = 1") {
  const auto vp = variance_profile(WeightDistribution({{1.0, 1.0}}), Direction{0.0}, {8, 16, 32}, 5, 1);
  for (const auto& p : vp.points) CHECK(p.variance == 0.0);
  CHECK(vp.slope_ci.contains(0.0));
}

TEST_CASE("exponent fit on power laws") {
  const std::vector<int> ns{16, 32, 64, 128};
  std::vector<std::vector<double>> taus, widths;
  for (int n : ns) {
    const double sd = std::pow(n, 1.0 / 3);
    taus.push_back({n - sd, n + sd});
    const double w = std::pow(n, 2.0 / 3);
    widths.push_back({w, w});
  }
  const auto e = fit_exponents(ns, taus, widths, 1.96);
  CHECK(e.chi == doctest::Approx(1.0 / 3));
  CHECK(e.xi == doctest::Approx(2.0 / 3));
  CHECK(e.scaling_indicator);
}

TEST_CASE("scaled arc hits") {
  const auto p = l1_profile();
  CHECK(hits_scaled_arc({0, 10}, p, 10, 0.15));
  CHECK_FALSE(hits_scaled_arc({10, 0}, p, 10, 0.15));  // inside the excluded window
  CHECK_FALSE(hits_scaled_arc({0, 5}, p, 10, 0.15));
  CHECK_FALSE(hits_scaled_arc({0, 0}, p, 10, 0.15));
}

TEST_CASE("annulus index") {
  CHECK(annulus_index(3.0, 4.0, 2.0) == 0);
  CHECK(annulus_index(4.0, 4.0, 2.0) == 1);
  CHECK(annulus_index(7.9, 4.0, 2.0) == 1);
  CHECK(annulus_index(8.0, 4.0, 2.0) == 2);
}

TEST_CASE("heavy count is the minimum over geodesics") {
  const auto sites = brute::block_sites();
  for (int k = 0; k < 100; ++k) {
    const auto f = brute::random_block_field(5000 + k);
    const Site src = sites[k % 16], dst = sites[(k * 7 + 3) % 16];
    if (src == dst) continue;
    const auto ps = brute::enumerate(f, src, dst);
    int best = 1 << 30;
    for (const auto& path : ps.optimal) {
      int h = 0;
      for (EdgeId e : path) h += f.weight(e) >= 2.0;
      best = std::min(best, h);
    }
    const GeodesicDag dag(f, src, dst);
    const auto hc = heavy_edges_on_dag(dag, 2.0, 1.0, 2.0, nullptr);
    CHECK(hc.total == best);
    int sum = 0;
    for (int c : hc.per_annulus) sum += c;
    CHECK(sum == hc.total);
  }
}

TEST_CASE("comparison is nonnegative pathwise") {
  const auto d = WeightDistribution::two_atom(0.7);
  const auto r = comparison_check(d, HeavyThreshold::make(d, 2.0), Direction{0.0}, 16, 20, 3);
  for (std::size_t i = 0; i < r.mu_values.size(); ++i) CHECK(r.nu_values[i] >= r.mu_values[i]);
  CHECK(r.diff >= 0.0);
}

TEST_CASE("covering of a circle") {
  const double M = 50;
  const auto pts = circle_boundary_sites(M);
  for (Site s : pts) CHECK(std::abs(std::hypot(s.x, s.y) - M) <= 2.0);
  const auto centers = covering_points(pts, M, 0.6);
  CHECK(uncovered_count(pts, centers, std::pow(M, 0.6)) == 0);
  // Greedy centers are pairwise farther apart than the radius.
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      CHECK(std::hypot(centers[i].x - centers[j].x, centers[i].y - centers[j].y) > std::pow(M, 0.6));
  CHECK(uncovered_count(pts, {}, 1.0) == pts.size());
}

TEST_CASE("profile boundary sites follow the profile") {
  const auto p = l1_profile();
  const auto pts = profile_boundary_sites(p, 30);
  CHECK_FALSE(pts.empty());
  for (Site s : pts) CHECK(std::abs(l1_norm(s) - 30) <= 3);
}

TEST_CASE("trapping needs a profile and theta1 above theta") {
  const auto d = WeightDistribution::two_atom(0.8);
  CHECK_THROWS_AS(trapping_frequency(d, Direction{0.0}, {16}, 0.85, 0.15, ShapeProfile{}, 2, 1), ConfigError);
  CHECK_THROWS_AS(trapping_frequency(d, Direction{0.2}, {16}, 0.85, 0.15, l1_profile(), 2, 1), ConfigError);
  const auto pts = trapping_frequency(d, Direction{0.0}, {16}, 0.85, 0.15, l1_profile(), 4, 1);
  CHECK(pts.size() == 1);
  CHECK(pts[0].hit.size() == 4);
}
