#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fpp/distribution.hpp"
#include "fpp/lattice.hpp"
#include "fpp/metric.hpp"
#include "fpp/oriented.hpp"
#include "fpp/stats.hpp"

namespace fpp {

struct FitOptions {
  double ci_level = 0.95;
  int threads = 0;
  bool parallel = true;
  std::uint64_t stage = 0;
};

// Estimated limit shape along a grid of angles in [0, pi/2].
struct ShapeProfile {
  std::vector<double> angles;
  std::vector<double> g_hat;
  std::vector<double> se;
  // tau(0, x') / |x'|_1 for the rounded target x'; free of the rounding offset,
  // this is what the cone test compares with 1 + tol.
  std::vector<double> l1_ratio;
  std::vector<double> l1_ratio_se;
  int R = 0;
  std::size_t reps = 0;
  std::uint64_t dist_hash = 0;
  double ci_level = 0.95;
  std::size_t failed = 0;
  std::size_t truncation_warnings = 0;
  // Per replication, tau / R at every angle.
  std::vector<std::vector<double>> samples;
  bool symmetric = true;          // g(theta) and g(pi/2 - theta) agree within CI
  double convexity_defect = 0.0;  // largest inward dent of the boundary polygon
  double max_ci_width = 0.0;

  // Boundary radius 1/g(w_phi) for any phi, through the lattice symmetries and
  // linear interpolation on the grid.
  double radius(double phi) const;
  double g(double phi) const { return 1.0 / radius(phi); }
  // Norm induced by the profile: |z| / radius(angle z).
  double norm(double x, double y) const;

  void write_json(std::ostream& out) const;
  static ShapeProfile read_json(std::istream& in);
};

// One field per replication covering every angle; tau(0, round(R w_theta))
// at all angles comes from one search.
ShapeProfile shape_estimate(const WeightDistribution& dist, int R, const std::vector<double>& angles,
                            std::size_t reps, std::uint64_t seed, const FitOptions& opts = {});

struct FlatEdgeReport {
  double p = 0.0;
  bool supercritical = false;  // p above the supplied estimate of the critical value
  double alpha = 0.0;
  double alpha_se = 0.0;
  double theta_p = 0.0;      // angle of N_p from alpha
  double theta_p_se = 0.0;
  double Mx = 0.0, My = 0.0, Nx = 0.0, Ny = 0.0;
  double tol = 0.02;
  // Empirical cone {theta : g / |w|_1 <= 1 + tol} within [0, pi/4].
  bool cone_empty = true;
  double cone_endpoint = 0.0;  // lower endpoint, interpolated
  double endpoint_lo = 0.0;    // where the upper/lower CI curves cross 1 + tol
  double endpoint_hi = 0.0;
  double endpoint_se = 0.0;
  double z_score = 0.0;        // |endpoint - theta_p| / joint se
  bool agree = false;          // z_score <= 3
  ShapeProfile profile;
  std::vector<double> alpha_values;  // per replication
};

double theta_from_alpha(double alpha);

// Cone endpoint of a profile at tolerance tol; fills the cone fields of `r`.
void empirical_cone(const ShapeProfile& prof, double tol, double z, FlatEdgeReport& r);

FlatEdgeReport flat_edge_check(const WeightDistribution& dist, int R, const std::vector<double>& angles,
                               std::size_t shape_reps, std::size_t alpha_reps, double tol,
                               double pc_estimate, std::uint64_t seed, const FitOptions& opts = {});

struct VariancePoint {
  int n = 0;
  std::size_t reps = 0;
  double mean = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;  // jackknife
  double streaming_variance = 0.0;
  std::size_t truncation_warnings = 0;
  std::vector<double> values;  // tau per replication
};

struct VarianceProfile {
  std::vector<VariancePoint> points;
  LinearFit fit;  // Var = a + b log n
  Interval slope_ci;
  bool weighted = true;
};

VarianceProfile variance_profile(const WeightDistribution& dist, const Direction& dir,
                                 const std::vector<int>& n_list, std::size_t reps,
                                 std::uint64_t seed, const FitOptions& opts = {});

// Var = a + b log n from per-n variances; WLS on jackknife errors when they are all
// positive, OLS otherwise.
VarianceProfile fit_variance(std::vector<VariancePoint> points, double z);

struct ExponentEstimates {
  std::vector<int> n_list;
  std::vector<std::vector<double>> taus, widths;  // per n, per replication
  std::vector<double> variance;
  std::vector<double> mean_width;
  double chi = 0.0, chi_se = 0.0;
  double xi = 0.0, xi_se = 0.0;
  Interval chi_ci, xi_ci;
  bool scaling_indicator = false;  // chi >= (1 - xi)/2 - slack
  std::vector<double> gammas;
  // membership[g][i]: fraction of replications at n_list[i] with every DAG site
  // within n^gamma of the line through 0 in direction theta.
  std::vector<std::vector<double>> membership;
};

// log Var vs log n and log width vs log n.
ExponentEstimates fit_exponents(const std::vector<int>& n_list,
                                const std::vector<std::vector<double>>& taus,
                                const std::vector<std::vector<double>>& widths, double z);

ExponentEstimates exponent_estimates(const WeightDistribution& dist, const Direction& dir,
                                     const std::vector<int>& n_list, std::size_t reps,
                                     std::uint64_t seed, const std::vector<double>& gammas = {0.5, 2.0 / 3.0, 0.8, 1.0},
                                     const FitOptions& opts = {});

// Arc M D of the profile boundary outside the angles (-theta1, theta1); a site
// hits it when its angle is outside that window and it lies within distance 1
// of M r(angle).
bool hits_scaled_arc(Site z, const ShapeProfile& prof, double M, double theta1);

struct TrappingPoint {
  int n = 0;
  double M = 0.0;
  std::size_t hits = 0;
  std::size_t reps = 0;
  double frequency = 0.0;
  Interval ci;
  std::size_t failed = 0;
  std::vector<int> hit;  // per replication
};

std::vector<TrappingPoint> trapping_frequency(const WeightDistribution& dist, const Direction& dir,
                                              const std::vector<int>& n_list, double zeta,
                                              double theta1, const ShapeProfile& prof,
                                              std::size_t reps, std::uint64_t seed,
                                              const FitOptions& opts = {});

struct HeavyCount {
  int total = 0;                 // min over geodesics of edges with weight >= y
  std::vector<int> per_annulus;  // along a geodesic achieving the minimum
};

// Annulus index of a site: 0 inside M1, then i for M1 J^{i-1} <= |z| < M1 J^i.
int annulus_index(double norm, double M1, double J);

HeavyCount heavy_edges_on_dag(const GeodesicDag& dag, double y, double M1, double J,
                              const ShapeProfile* prof);

struct HeavyPoint {
  int n = 0;
  std::size_t reps = 0;
  double mean = 0.0;
  double se = 0.0;
  double ratio = 0.0;  // mean / n
  Interval ratio_ci;
  std::vector<double> annulus_mean;
  std::size_t failed = 0;
  std::vector<int> counts;  // per replication
};

std::vector<HeavyPoint> heavy_edge_count(const WeightDistribution& dist, const HeavyThreshold& th,
                                         const Direction& dir, const std::vector<int>& n_list,
                                         double zeta, double J, const ShapeProfile* prof,
                                         std::size_t reps, std::uint64_t seed,
                                         const FitOptions& opts = {});

struct ComparisonResult {
  int n = 0;
  std::size_t reps = 0;
  double g_mu = 0.0, se_mu = 0.0;
  double g_nu = 0.0, se_nu = 0.0;
  double diff = 0.0, diff_se = 0.0;  // paired
  Interval diff_ci;
  double separation = 0.0;  // diff / diff_se
  std::size_t failed = 0;
  std::vector<double> mu_values, nu_values;  // per replication
};

// Paired estimate of g_{mu'} - g_mu with mu' the more variable law; the
// transformed field is the pointwise image of the sampled one.
ComparisonResult comparison_check(const WeightDistribution& dist, const HeavyThreshold& th,
                                  const Direction& dir, int n, std::size_t reps, std::uint64_t seed,
                                  const FitOptions& opts = {});

// Lattice points within distance 2 of the circle of radius M.
std::vector<Site> circle_boundary_sites(double M);
// Lattice points within distance 2 of M times the profile boundary.
std::vector<Site> profile_boundary_sites(const ShapeProfile& prof, double M);

// Greedy centers: a site becomes a center when it is farther than M^kappa from
// every existing center (sites scanned by angle).
std::vector<Site> covering_points(const std::vector<Site>& boundary_sites, double M, double kappa);
std::size_t uncovered_count(const std::vector<Site>& boundary_sites, const std::vector<Site>& centers,
                            double radius);

}  // namespace fpp
