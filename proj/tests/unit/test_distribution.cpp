#include <doctest.h>

#include <cmath>
#include <vector>

#include "fpp/bypass.hpp"
#include "fpp/distribution.hpp"
#include "fpp/errors.hpp"
#include "fpp/rng.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

namespace {

WeightDistribution with_uniform() {
  return WeightDistribution({{1.0, 0.8}}, {{PieceKind::uniform, 1.0, 2.0, 0.0, 0.2}});
}

}  // namespace

TEST_CASE("masses must sum to one and pieces must be well formed") {
  CHECK_THROWS_AS(WeightDistribution({{1.0, 0.5}}), ConfigError);
  CHECK_THROWS_AS(WeightDistribution({{1.0, 0.5}, {1.0, 0.5}}), ConfigError);
  CHECK_THROWS_AS(WeightDistribution({{1.0, 0.8}}, {{PieceKind::uniform, 2.0, 1.0, 0.0, 0.2}}), ConfigError);
  CHECK_NOTHROW(WeightDistribution({{1.0, 0.8}, {2.0, 0.2}}));
}

TEST_CASE("infimum and the mass there") {
  const auto d = WeightDistribution::two_atom(0.8);
  CHECK(d.infimum() == 1.0);
  CHECK(d.mass_at_infimum() == doctest::Approx(0.8));
  const WeightDistribution shifted({}, {{PieceKind::exponential, 1.0, INFINITY, 1.0, 1.0}});
  CHECK(shifted.infimum() == 1.0);
  CHECK(shifted.mass_at_infimum() == 0.0);
  CHECK_FALSE(shifted.purely_atomic());
}

TEST_CASE("the degenerate law always draws 1") {
  const WeightDistribution d({{1.0, 1.0}});
  auto s = seed_stream(1, 0);
  for (int i = 0; i < 1000; ++i) CHECK(d.sample(s) == 1.0);
}

TEST_CASE("two-atom frequency of 1 within 3 sigma over 1e5 draws") {
  const auto d = WeightDistribution::two_atom(0.8);
  auto s = seed_stream(5, 0);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += d.sample(s) == 1.0;
  const double sigma = std::sqrt(0.8 * 0.2 / n);
  CHECK(std::abs(ones / double(n) - 0.8) < 3 * sigma);
}

TEST_CASE("continuous draws stay strictly above 1 and inside the support") {
  const auto d = with_uniform();
  auto s = seed_stream(6, 0);
  int continuous = 0;
  for (int i = 0; i < 20000; ++i) {
    const double t = d.sample(s);
    CHECK(t >= 1.0);
    CHECK(t <= 2.0);
    if (t != 1.0) ++continuous;
  }
  CHECK(continuous > 3500);
}

TEST_CASE("sampling is reproducible") {
  const auto d = with_uniform();
  auto a = seed_stream(11, 4), b = seed_stream(11, 4);
  for (int i = 0; i < 100; ++i) CHECK(d.sample(a) == d.sample(b));
}

TEST_CASE("empirical CDF within the KS band") {
  const WeightDistribution d({{1.0, 0.5}, {3.0, 0.1}},
                             {{PieceKind::uniform, 1.0, 2.0, 0.0, 0.2},
                              {PieceKind::exponential, 2.0, INFINITY, 1.5, 0.2}});
  auto s = seed_stream(12, 0);
  std::vector<double> xs;
  const int n = 100000;
  for (int i = 0; i < n; ++i) xs.push_back(d.sample(s));
  const double D = ks_distance(xs, [&](double t) { return d.cdf(t); },
                               [&](double t) { return d.cdf(std::nextafter(t, -INFINITY)); });
  // 3 sigma band of the Kolmogorov statistic, sqrt(n) D ~ 1.63 at the 1% level.
  CHECK(D * std::sqrt(double(n)) < 1.63);
}

TEST_CASE("mean, cdf and tail mass agree") {
  const auto d = WeightDistribution::two_atom(0.8);
  CHECK(d.mean() == doctest::Approx(1.2));
  CHECK(d.cdf(1.0) == doctest::Approx(0.8));
  CHECK(d.cdf(0.999) == 0.0);
  CHECK(d.tail_mass(2.0) == doctest::Approx(0.2));
  CHECK(d.tail_mass(2.5) == 0.0);
  CHECK(with_uniform().mass_in(1.0, 1.5) == doctest::Approx(0.1));
}

TEST_CASE("exact tick scale for atomic laws") {
  CHECK(WeightDistribution::two_atom(0.8).tick_scale() == 1);
  CHECK(WeightDistribution({{1.0, 0.5}, {1.5, 0.25}, {2.25, 0.25}}).tick_scale() == 4);
  CHECK_FALSE(with_uniform().tick_scale().has_value());
}

TEST_CASE("membership in M_p") {
  CHECK(membership_in_Mp(WeightDistribution::two_atom(0.7), 0.6447));
  CHECK_FALSE(membership_in_Mp(WeightDistribution::two_atom(0.5), 0.6447));
  const WeightDistribution shifted({}, {{PieceKind::exponential, 1.0, INFINITY, 1.0, 1.0}});
  CHECK_FALSE(membership_in_Mp(shifted, 0.6447));
}

TEST_CASE("more-variable transform") {
  const auto d = more_variable_transform(WeightDistribution::two_atom(0.8), 2.0);
  CHECK(d == WeightDistribution({{1.0, 0.8}, {3.0, 0.2}}));
  // Nothing at or above y: unchanged.
  const auto same = more_variable_transform(WeightDistribution::two_atom(0.8), 5.0);
  CHECK(same == WeightDistribution::two_atom(0.8));
  // Straddling piece is split at y.
  const WeightDistribution u({{1.0, 0.5}}, {{PieceKind::uniform, 1.0, 3.0, 0.0, 0.5}});
  const auto t = more_variable_transform(u, 2.0);
  CHECK(t.mass_in(1.0, 2.0) == doctest::Approx(0.25));
  CHECK(t.mass_in(3.0, 4.0) == doctest::Approx(0.25));
  CHECK(t.mass_in(2.0, 3.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("more-variable ordering for f(t) = min(t, 5) by quadrature") {
  const WeightDistribution mu({{1.0, 0.7}}, {{PieceKind::uniform, 1.0, 4.0, 0.0, 0.3}});
  const auto nu = more_variable_transform(mu, 2.0);
  auto integral = [](const WeightDistribution& d) {
    // E f = int_0^5 P(T > t) dt for f(t) = min(t, 5).
    const int steps = 200000;
    double acc = 0;
    for (int i = 0; i < steps; ++i) {
      const double t = (i + 0.5) * 5.0 / steps;
      acc += (1.0 - d.cdf(t)) * 5.0 / steps;
    }
    return acc;
  };
  CHECK(integral(mu) < integral(nu));
}

TEST_CASE("heavy threshold") {
  const auto d = WeightDistribution::two_atom(0.8);
  CHECK(HeavyThreshold::make(d, 2.0).q_heavy == doctest::Approx(0.2));
  CHECK_THROWS_AS(HeavyThreshold::make(d, 3.0), DomainError);
  CHECK_THROWS_AS(HeavyThreshold::make(d, 1.0), DomainError);
}

TEST_CASE("rho_a from the template counts") {
  CHECK(rho_a_exact(2, 0.8) == doctest::Approx(std::pow(0.8, 5) * std::pow(0.2, 3)).epsilon(1e-14));
  CHECK(rho_a_exact(3, 0.8) == doctest::Approx(std::pow(0.8, 9) * std::pow(0.2, 5)).epsilon(1e-14));
  for (double p : {0.65, 0.8, 0.9}) {
    for (int a = 2; a < 6; ++a) CHECK(rho_a_exact(a + 1, p) <= rho_a_exact(a, p));
  }
  CHECK(rho_a_exact(2, 1.0) == 0.0);
  CHECK(rho_a_exact(2, 0.999999) < 1e-15);
  CHECK_THROWS(rho_a_exact(1, 0.8));
}

TEST_CASE("canonical form and hash identify the law") {
  const auto a = WeightDistribution::two_atom(0.8);
  const auto b = WeightDistribution({{2.0, 0.2}, {1.0, 0.8}});
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != WeightDistribution::two_atom(0.7).hash());
}
