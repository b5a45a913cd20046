#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpp/rng.hpp"

namespace fpp {

struct Atom {
  double value;
  double mass;
};

enum class PieceKind { uniform, exponential };

// A continuous component. uniform: on (lower, upper]. exponential: lower + Exp(rate)
// conditioned on (lower, upper]; upper may be +inf.
struct ContinuousPiece {
  PieceKind kind;
  double lower;
  double upper;
  double rate;  // exponential only
  double mass;
};

// Edge-weight law: finitely many atoms plus optional continuous pieces.
// Immutable after construction; safe to share across replications.
class WeightDistribution {
 public:
  WeightDistribution(std::vector<Atom> atoms, std::vector<ContinuousPiece> pieces = {});

  // {1: p, second: 1 - p}; the workhorse two-atom law.
  static WeightDistribution two_atom(double p, double second = 2.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<ContinuousPiece>& pieces() const { return pieces_; }

  double infimum() const { return b_; }
  double mass_at_infimum() const { return p_at_b_; }
  bool purely_atomic() const { return pieces_.empty(); }

  // Smallest integer s such that every atom value times s is an integer
  // (s <= 4096); nullopt for laws with a continuous part.
  std::optional<std::int64_t> tick_scale() const { return tick_scale_; }

  // Maps a uniform u in [0,1) to a draw. Continuous pieces are sampled strictly
  // above their lower endpoint, so a draw equals an atom value only for atoms.
  double from_uniform(double u) const;

  template <class URBG>
  double sample(URBG& gen) const {
    return from_uniform(to_unit_interval(gen()));
  }

  double cdf(double t) const;
  // mu((lo, hi])
  double mass_in(double lo, double hi) const;
  // mu([y, inf))
  double tail_mass(double y) const;
  double mean() const;

  std::string canonical() const;
  std::uint64_t hash() const;

  friend bool operator==(const WeightDistribution& a, const WeightDistribution& b) {
    return a.canonical() == b.canonical();
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<ContinuousPiece> pieces_;
  double b_ = 0.0;
  double p_at_b_ = 0.0;
  std::optional<std::int64_t> tick_scale_;
};

struct HeavyThreshold {
  double y;
  double q_heavy;  // mu([y, inf)) > 0

  static HeavyThreshold make(const WeightDistribution& dist, double y);
};

bool membership_in_Mp(const WeightDistribution& dist, double pc_estimate);

// Push-forward under t -> t + 1 for t >= y, identity below y.
WeightDistribution more_variable_transform(const WeightDistribution& dist, double y);
inline WeightDistribution more_variable_transform(const WeightDistribution& dist,
                                                  const HeavyThreshold& threshold) {
  return more_variable_transform(dist, threshold.y);
}

// Probability of the (C_a)-configuration in an i.i.d. Bernoulli(p) field:
// p^{#open} (1-p)^{#closed} with the counts taken from the configuration template.
double rho_a_exact(int a, double p);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace fpp
