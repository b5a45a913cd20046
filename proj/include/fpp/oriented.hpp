#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fpp/distribution.hpp"
#include "fpp/field.hpp"
#include "fpp/lattice.hpp"
#include "fpp/stats.hpp"

namespace fpp {

enum class CouplingKind { standard, critical, direct_bernoulli };

// Uniforms attached to the two oriented out-edges of a site in a lazily
// evaluated Bernoulli field: a pure function of (key, site). Thresholding them
// at p gives the bits, which is what makes scans over p monotone.
struct SiteUniforms {
  double right;
  double up;
};
SiteUniforms eta_uniforms(std::uint64_t key, Site s) noexcept;

// Binary oriented-percolation field. Either box-backed (one bit per box edge,
// from a coupling or handcrafted) or lazy over all of Z^2 (i.i.d. Bernoulli(p)
// evaluated on demand from a key).
class EtaField {
 public:
  static EtaField from_bits(const BoxLattice& lattice, std::vector<std::uint8_t> bits,
                            CouplingKind kind = CouplingKind::direct_bernoulli);
  static EtaField bernoulli_box(const BoxLattice& lattice, double p, std::uint64_t key);
  static EtaField lazy(double p, std::uint64_t key);

  CouplingKind kind() const { return kind_; }
  bool is_lazy() const { return lazy_; }
  double p() const { return p_; }
  const BoxLattice* lattice() const { return lazy_ ? nullptr : &lattice_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // Bit of the edge from s to s + (1,0) (vertical = false) or s + (0,1).
  bool open(Site s, bool vertical) const;
  bool right(Site s) const { return open(s, false); }
  bool up(Site s) const { return open(s, true); }
  bool bit(const Edge& e) const { return open(e.from, e.vertical); }

  // Whether the edge can be queried.
  bool covers(const Edge& e) const { return lazy_ || lattice_.contains(e); }

 private:
  EtaField() : lattice_(1) {}

  CouplingKind kind_ = CouplingKind::direct_bernoulli;
  bool lazy_ = false;
  BoxLattice lattice_;
  std::vector<std::uint8_t> bits_;
  double p_ = 0.0;
  std::uint64_t key_ = 0;
};

// eta_e = 1 exactly when tau_e = 1 (exact comparison on the stored value).
EtaField couple_eta(const WeightField& field);

// eta_e = 1 if tau_e = 1; if tau_e in (1, K] then 1 with probability
// q = eps / mu((1, K]) from an independent keyed coin; otherwise 0.
EtaField couple_eta_critical(const WeightField& field, const WeightDistribution& dist, double eps,
                             double K, std::uint64_t coin_key);

// Sites of one diagonal D_m = {x + y = m}, indexed by x, as a bitset.
class DiagonalFront {
 public:
  DiagonalFront() = default;
  explicit DiagonalFront(int m) : m_(m) {}

  int diagonal() const { return m_; }
  bool empty() const;
  std::size_t count() const;
  bool test(int x) const;
  void set(int x);
  // Largest / smallest x present; nullopt when empty.
  std::optional<int> rightmost_x() const;
  std::optional<int> leftmost_x() const;
  std::vector<Site> sites() const;  // ascending x
  void unite(const DiagonalFront& other);

  // One oriented step: D_m -> D_{m+1}.
  DiagonalFront step(const EtaField& eta) const;

  friend bool operator==(const DiagonalFront& a, const DiagonalFront& b) {
    return a.m_ == b.m_ && a.sites() == b.sites();
  }

 private:
  void trim();

  int m_ = 0;
  int x0_ = 0;  // x of bit 0 of word 0
  std::vector<std::uint64_t> words_;
};

// Subset of a translate of the ray {(-k, k) : k >= 0}: sites anchor + (-k, k).
struct StartingSet {
  Site anchor{0, 0};
  std::vector<int> offsets;  // k values, ascending, distinct, >= 0

  // {anchor + (-k, k) : 0 <= k <= width}
  static StartingSet ray(Site anchor, int width);
  // Contiguous block of `size` sites ending at the anchor.
  static StartingSet block(Site anchor, int size);
  // The ray from the origin of width `width`, together with E_m = {(k,-k) : 1 <= k <= m}.
  static StartingSet ray_with_extension(int width, int m);

  int diagonal() const { return anchor.x + anchor.y; }
  std::vector<Site> sites() const;
  DiagonalFront front() const;
};

// xi_n(S) on D_{m+n}.
DiagonalFront reachable_diagonal(const EtaField& eta, const StartingSet& S, int n);
DiagonalFront evolve(const EtaField& eta, DiagonalFront front, int n);

struct RightEdge {
  std::optional<Site> M;
  double f = -std::numeric_limits<double>::infinity();
};

RightEdge rightmost(const DiagonalFront& xi, const LinearFunctional& f);
RightEdge rightmost(const std::vector<Site>& xi, const LinearFunctional& f);

struct ScanOptions {
  double ci_level = 0.95;
  int threads = 0;
  bool parallel = true;
  std::uint64_t stage = 0;
};

struct AlphaEstimate {
  double p = 0.0;
  int n = 0;
  std::size_t reps = 0;
  std::size_t reruns = 0;  // replications that needed a wider start set
  double mean = 0.0;
  double se = 0.0;
  Interval ci;
  std::vector<double> values;
};

// sqrt(2) (x_n / n - 1/2) with M_n(S) = (x_n, n - x_n), S the ray of width 2n.
AlphaEstimate alpha_p_estimate(double p, int n, std::size_t reps, std::uint64_t seed,
                               const ScanOptions& opts = {});

// Critical parameter of the path 0 -> D_N for one field: the smallest p at which the
// Bernoulli(p) thresholding of the site uniforms survives (min over oriented paths of
// the max uniform along the path).
double critical_value(std::uint64_t key, int N);

struct SurvivalRow {
  double p;
  std::size_t survived;
  double frequency;
  Interval ci;
};

struct SurvivalScan {
  int N = 0;
  std::size_t reps = 0;
  std::vector<SurvivalRow> rows;
  double pc_estimate = 0.0;
  double pc_uncertainty = 0.0;  // half the grid step around the steepest rise
  bool separated = false;       // steepest rise is CI-separated
  std::size_t failed = 0;
  std::vector<double> critical;  // per replication

  void write_csv(std::ostream& out) const;
};

// Survival of 0 -> D_N per p under common random numbers.
SurvivalScan survival_scan(const std::vector<double>& p_grid, int N, std::size_t reps,
                           std::uint64_t seed, const ScanOptions& opts = {});

struct FrequencyPoint {
  int n = 0;  // N for grim_quantity, block size for nonsurvival
  std::size_t hits = 0;
  std::size_t reps = 0;
  double frequency = 0.0;
  Interval ci;
};

// P(0 -> D_N, |xi_N({0})| < M) for each N, common fields across N.
std::vector<FrequencyPoint> grim_quantity(double p, const std::vector<int>& N_list, int M,
                                          std::size_t reps, std::uint64_t seed,
                                          const ScanOptions& opts = {});

// P(S_n does not reach D_N) for contiguous blocks S_n of the ray; common fields
// across n, so the estimates are monotone by construction.
std::vector<FrequencyPoint> nonsurvival_for_block(double p, const std::vector<int>& n_sizes, int N,
                                                  std::size_t reps, std::uint64_t seed,
                                                  const ScanOptions& opts = {});

}  // namespace fpp
