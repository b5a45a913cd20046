#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fpp {

// Two-sided normal quantile for a confidence level, e.g. 0.95 -> 1.95996.
double z_for_level(double ci_level);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se = 0.0;        // standard error of the mean
};

// Two-pass mean and unbiased variance.
Summary summarize(std::span<const double> xs);

// Single-pass (Welford) accumulator.
class StreamingMoments {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  double half_width() const { return 0.5 * (hi - lo); }
};

Interval mean_interval(const Summary& s, double z);

// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z);

// Jackknife standard error of the unbiased sample variance.
double jackknife_variance_se(std::span<const double> xs);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double se_intercept = 0.0;
  double se_slope = 0.0;
};

// Weighted least squares y = a + b x with weights 1 / sigma_i^2; standard
// errors from (X^T W X)^{-1}, i.e. treating sigma_i as known.
LinearFit weighted_least_squares(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> sigma);

// Ordinary least squares with residual-based standard errors.
LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y);

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

double binomial_pmf(int n, int k, double p);

struct ChiSquareTest {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::vector<int> cell_lo;  // first value of every merged cell
};

// Pearson test of integer samples in [0, n] against Binomial(n, p). Adjacent
// values are merged until every cell expects at least 5 counts.
ChiSquareTest binomial_chi_square(const std::vector<int>& samples, int n, double p);

// Kolmogorov-Smirnov distance between the empirical law of xs and a CDF,
// accounting for atoms (the CDF is evaluated at x and just below x).
double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left);

}  // namespace fpp
