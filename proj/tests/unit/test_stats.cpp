#include <doctest.h>

#include <cmath>
#include <vector>

#include "fpp/rng.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

TEST_CASE("normal quantiles") {
  CHECK(z_for_level(0.95) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(z_for_level(0.99) == doctest::Approx(2.575829).epsilon(1e-6));
}

TEST_CASE("summary and streaming moments agree") {
  const std::vector<double> xs{1, 2, 2, 3, 7, 11};
  const Summary s = summarize(xs);
  StreamingMoments m;
  for (double x : xs) m.add(x);
  CHECK(s.count == 6);
  CHECK(s.mean == doctest::Approx(26.0 / 6));
  CHECK(s.variance == doctest::Approx(m.variance()));
  CHECK(m.mean() == doctest::Approx(s.mean));
  CHECK(s.se == doctest::Approx(std::sqrt(s.variance / 6)));
}

TEST_CASE("mean interval") {
  Summary s;
  s.mean = 2;
  s.se = 0.5;
  const auto ci = mean_interval(s, 2.0);
  CHECK(ci.lo == 1.0);
  CHECK(ci.hi == 3.0);
  CHECK(ci.contains(2.5));
  CHECK(ci.half_width() == 1.0);
}

TEST_CASE("Wilson interval") {
  const auto ci = wilson_interval(0, 400, 1.96);
  CHECK(ci.lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ci.hi > 0.0);
  CHECK(ci.hi < 0.01);
  const auto mid = wilson_interval(50, 100, 1.96);
  CHECK(mid.contains(0.5));
  CHECK(mid.lo == doctest::Approx(0.4038).epsilon(1e-3));
}

TEST_CASE("jackknife error of the variance is near the asymptotic value") {
  auto rs = seed_stream(4, 0);
  std::vector<double> xs;
  for (int i = 0; i < 4000; ++i) xs.push_back(rs.uniform());
  // Var of the sample variance of U(0,1): (mu4 - sigma^4 (n-3)/(n-1)) / n.
  const double mu4 = 1.0 / 80, s4 = 1.0 / 144;
  const double expect = std::sqrt((mu4 - s4) / 4000);
  CHECK(jackknife_variance_se(xs) == doctest::Approx(expect).epsilon(0.15));
}

TEST_CASE("least squares recovers an exact line") {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9}, sig{1, 1, 2, 1, 1};
  const auto w = weighted_least_squares(x, y, sig);
  CHECK(w.slope == doctest::Approx(2.0));
  CHECK(w.intercept == doctest::Approx(1.0));
  const auto o = ordinary_least_squares(x, y);
  CHECK(o.slope == doctest::Approx(2.0));
  CHECK(o.se_slope == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("weighted fit standard errors treat sigma as known") {
  const std::vector<double> x{0, 1}, y{0, 1}, sig{1, 1};
  const auto w = weighted_least_squares(x, y, sig);
  CHECK(w.se_slope == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("chi-square survival function") {
  CHECK(chi_square_sf(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(chi_square_sf(0.0, 3) == 1.0);
}

TEST_CASE("binomial pmf sums to one") {
  double s = 0;
  for (int k = 0; k <= 20; ++k) s += binomial_pmf(20, k, 0.3);
  CHECK(s == doctest::Approx(1.0));
  CHECK(binomial_pmf(4, 2, 0.5) == doctest::Approx(6.0 / 16));
}

TEST_CASE("binomial chi-square accepts binomial samples and rejects others") {
  auto rs = seed_stream(9, 0);
  std::vector<int> good, bad;
  for (int i = 0; i < 5000; ++i) {
    int k = 0;
    for (int j = 0; j < 20; ++j) k += rs.uniform() < 0.1;
    good.push_back(k);
    bad.push_back(std::min(20, k + (rs.uniform() < 0.3)));
  }
  const auto g = binomial_chi_square(good, 20, 0.1);
  CHECK(g.p_value > 0.001);
  CHECK(g.dof >= 3);
  CHECK(g.cell_lo.front() == 0);
  CHECK(binomial_chi_square(bad, 20, 0.1).p_value < 1e-6);
}

TEST_CASE("KS distance with atoms") {
  // Exact two-point sample against its own law.
  const std::vector<double> xs{1, 1, 2, 2};
  auto cdf = [](double t) { return t < 1 ? 0.0 : t < 2 ? 0.5 : 1.0; };
  auto left = [](double t) { return t <= 1 ? 0.0 : t <= 2 ? 0.5 : 1.0; };
  CHECK(ks_distance(xs, cdf, left) == doctest::Approx(0.0));
  const std::vector<double> skew{1, 1, 1, 2};
  CHECK(ks_distance(skew, cdf, left) == doctest::Approx(0.25));
}
