#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpp/distribution.hpp"

namespace fpp {

enum class ExperimentKind {
  shape,
  flatedge,
  variance,
  exponents,
  trapping,
  heavy,
  compare,
  bypass,
  oriented_scan,
  compete,
  ends,
  oracle,
};

const std::vector<std::string>& experiment_kind_names();
std::string to_string(ExperimentKind k);
ExperimentKind parse_kind(const std::string& name);

// Everything one run needs. Defaults are the values the experiment kinds use
// when a key is absent; validate() checks only the keys the kind reads.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::shape;
  std::string name;

  // [distribution]
  std::string atoms_text = "1:0.8, 2:0.2";
  std::string continuous_text;
  std::optional<WeightDistribution> dist;

  // [geometry]
  int R = 128;
  std::vector<int> n_list = {32, 64, 128};
  std::vector<int> R_list = {128, 512};
  std::vector<double> angles;  // empty: angle_grid points on [0, pi/4]
  int angle_grid = 41;
  double theta = 0.0;
  double seed_radius = 8.0;
  std::vector<double> seed_angles = {0.0, 2.0943951023931957, 4.1887902047863905};

  // [statistics]
  std::size_t reps = 100;
  std::size_t alpha_reps = 200;
  std::uint64_t seed = 1;
  double ci_level = 0.95;
  int threads = 0;
  bool parallel = true;

  // [parameters]
  int a = 2;
  double p = 0.8;  // Bernoulli parameter for the oriented kinds
  std::vector<double> p_grid = {0.55, 0.60, 0.62, 0.64, 0.66, 0.68, 0.70, 0.75, 0.80};
  int N = 200;
  double y = 2.0;
  double zeta = 0.85;
  double kappa = 0.6;
  double kappa_prime = 0.8;
  double J = 4.0;
  double theta1 = 0.15;
  double eps = 0.01;
  int K = 4;
  double tol = 0.02;
  double r_fraction = 0.125;
  double pc_estimate = 0.6447;
  std::vector<double> gammas = {0.5, 2.0 / 3.0, 0.8, 1.0};
  std::string profile;  // path to a shape-profile JSON
  // Variance gate: "positive" (slope CI above 0), "zero" (CI contains 0), "any".
  std::string expect_slope = "any";
  // oracle
  int oracle_n = 1;
  int oracle_m = 1;
  std::string oracle_p = "1/2";
  std::string c1 = "1";
  std::string c2 = "-1";
  std::vector<int> holes = {0};

  // Every key/value as read, after defaults (for the summary echo and the hash).
  std::map<std::string, std::string> echo() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;

  const WeightDistribution& distribution() const;
  std::vector<double> angle_list() const;
  void validate() const;
};

// Parses INI text with sections [experiment], [distribution], [geometry],
// [statistics], [parameters]. Unknown sections or keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// "1:0.8, 2:0.2"
std::vector<Atom> parse_atoms(const std::string& text);
// "uniform 1 2 0.2; exponential 2 inf 1.5 0.1" (kind lower upper [rate] mass)
std::vector<ContinuousPiece> parse_pieces(const std::string& text);

}  // namespace fpp
