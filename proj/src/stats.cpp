#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace fpp {

double z_for_level(double ci_level) {
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw std::invalid_argument("ci_level must lie in (0,1)");
  const boost::math::normal_distribution<double> n01;
  return boost::math::quantile(n01, 0.5 + 0.5 * ci_level);
}

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double acc = 0.0;
  for (double x : xs) acc += x;
  s.mean = acc / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0, comp = 0.0;
    for (double x : xs) {
      ss += (x - s.mean) * (x - s.mean);
      comp += x - s.mean;
    }
    const double n = static_cast<double>(xs.size());
    s.variance = (ss - comp * comp / n) / (n - 1.0);
    s.se = std::sqrt(s.variance / n);
  }
  return s;
}

void StreamingMoments::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

Interval mean_interval(const Summary& s, double z) {
  return {s.mean - z * s.se, s.mean + z * s.se};
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  // The bounds are exact at the ends; rounding would otherwise leave 1e-18 residues.
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

double jackknife_variance_se(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3) return 0.0;
  const Summary full = summarize(xs);
  const double nn = static_cast<double>(n);
  // Leave-one-out variances in closed form from the full sums.
  double sum = 0.0, sum2 = 0.0;
  for (double x : xs) {
    sum += x - full.mean;
    sum2 += (x - full.mean) * (x - full.mean);
  }
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = xs[i] - full.mean;
    const double s1 = sum - xi;
    const double s2 = sum2 - xi * xi;
    loo[i] = (s2 - s1 * s1 / (nn - 1.0)) / (nn - 2.0);
  }
  const Summary ls = summarize(loo);
  return std::sqrt((nn - 1.0) / nn * ls.variance * (nn - 1.0));
}

LinearFit weighted_least_squares(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2)
    throw std::invalid_argument("weighted_least_squares: size mismatch");
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
    swxx += w * x[i] * x[i];
    swxy += w * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  LinearFit fit;
  fit.slope = (sw * swxy - swx * swy) / det;
  fit.intercept = (swxx * swy - swx * swxy) / det;
  fit.se_slope = std::sqrt(sw / det);
  fit.se_intercept = std::sqrt(swxx / det);
  return fit;
}

LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("ordinary_least_squares: need >= 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  const double s2 = rss / (n - 2.0);
  fit.se_slope = std::sqrt(s2 / sxx);
  fit.se_intercept = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  return fit;
}

double chi_square_sf(double statistic, double dof) {
  const boost::math::chi_squared_distribution<double> chi(dof);
  return boost::math::cdf(boost::math::complement(chi, statistic));
}

double binomial_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return 0.0;
  const boost::math::binomial_distribution<double> b(n, p);
  return boost::math::pdf(b, k);
}

ChiSquareTest binomial_chi_square(const std::vector<int>& samples, int n, double p) {
  const double total = static_cast<double>(samples.size());
  std::vector<double> observed(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k : samples) {
    if (k < 0 || k > n) throw std::invalid_argument("binomial_chi_square: sample outside [0, n]");
    observed[static_cast<std::size_t>(k)] += 1;
  }
  struct Cell {
    int lo;
    double obs, exp;
  };
  std::vector<Cell> cells;
  Cell cur{0, 0.0, 0.0};
  for (int k = 0; k <= n; ++k) {
    cur.obs += observed[static_cast<std::size_t>(k)];
    cur.exp += total * binomial_pmf(n, k, p);
    if (cur.exp >= 5.0) {
      cells.push_back(cur);
      cur = {k + 1, 0.0, 0.0};
    }
  }
  // The leftover tail joins the last full cell.
  if (cur.exp > 0 || cur.obs > 0) {
    if (cells.empty()) {
      cells.push_back(cur);
    } else {
      cells.back().obs += cur.obs;
      cells.back().exp += cur.exp;
    }
  }
  ChiSquareTest t;
  for (const Cell& c : cells) {
    t.cell_lo.push_back(c.lo);
    if (c.exp > 0) t.statistic += (c.obs - c.exp) * (c.obs - c.exp) / c.exp;
  }
  t.dof = static_cast<int>(cells.size()) - 1;
  t.p_value = t.dof > 0 ? chi_square_sf(t.statistic, t.dof) : 1.0;
  return t;
}

double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double below = static_cast<double>(i) / n;
    const double upto = static_cast<double>(j) / n;
    d = std::max({d, std::abs(below - cdf_left(xs[i])), std::abs(upto - cdf(xs[i]))});
    i = j;
  }
  return d;
}

}  // namespace fpp
