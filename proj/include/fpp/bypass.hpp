#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fpp/lattice.hpp"
#include "fpp/oriented.hpp"

namespace fpp {

// Edge given as an offset from the anchor (x, y).
struct EdgeOffset {
  Site from;
  bool vertical;

  Edge at(Site anchor) const { return {anchor + from, vertical}; }
  friend auto operator<=>(const EdgeOffset&, const EdgeOffset&) = default;
};

struct CaTemplate {
  int a = 2;
  std::vector<EdgeOffset> open_edges;
  std::vector<EdgeOffset> closed_edges;
  std::vector<Site> s_a_offsets;  // the a points of S^a, ascending x
};

// The configuration around (x, y):
//  open:   (x,y)-(x+1,y), (x+1,y)-(x+1,y-1), (x+1,y-1)-(x+2,y-1);
//  closed: (x,y)-(x,y+1), (x+1,y)-(x+2,y), (x+1,y)-(x+1,y+1);
//  closed: right and up edges of (x-k, y+k) for 1 <= k <= a-2;
//  open:   every edge inside {u >= x+2, v >= y-1, |(u,v) - (x+2,y-1)|_1 <= a-1}.
CaTemplate build_ca_template(int a);

bool detect_Ca(const EtaField& eta, Site anchor, const CaTemplate& tpl);

struct BypassTrajectory {
  int a = 2;
  int n_max = 0;
  std::vector<int> tau;  // stopping times, strictly increasing
  // Indexed by t = 0..n_max, values on D_{a t}; -inf when the set is empty.
  std::vector<double> f_current;  // f_{at}^{K_t}
  std::vector<double> f_first;    // f_{at}^{1} (only the first bypass applied)
  std::vector<double> f_base;     // f_{at}^{0}
  std::vector<int> K;             // K_t
  std::optional<Site> final_M;    // M_{a n_max}^{K_{n_max}}
  bool base_reaches = false;      // 0 -> D_{a n_max} from the origin alone

  int K_n() const { return K.empty() ? 0 : K.back(); }
  long long edge_budget() const { return static_cast<long long>(a) * n_max + 2LL * K_n(); }
};

// The iterated bypass process from S over n_max blocks of a diagonals.
BypassTrajectory run_bypass_process(const EtaField& eta, const StartingSet& S, int a, int n_max,
                                    const LinearFunctional& f);

// Frequency of the (C_a)-configuration around the origin over independent
// Bernoulli(p) fields.
FrequencyPoint ca_detection_frequency(int a, double p, std::size_t reps, std::uint64_t seed,
                                      const ScanOptions& opts = {});

struct BypassEnsemble {
  double p = 0.0;
  int a = 2;
  int n_max = 0;
  std::size_t failed = 0;
  std::vector<BypassTrajectory> runs;
};

// Independent bypass processes on lazy Bernoulli(p) fields from the ray of
// width 2 a n_max, which keeps the front alive over the whole run.
BypassEnsemble bypass_ensemble(double p, int a, int n_max, std::size_t reps, std::uint64_t seed,
                               const LinearFunctional& f, const ScanOptions& opts = {});

// Trajectory dump rows: replication,k,tau_k.
void write_trajectory_csv(std::ostream& out, const std::vector<BypassTrajectory>& runs);
// Summary rows: replication,K_n,f0,fK.
void write_trajectory_summary_csv(std::ostream& out, const std::vector<BypassTrajectory>& runs);

// ---------------------------------------------------------------------------
// Exact expectations of the right edge in Bernoulli(p) oriented percolation
// started from infinite subsets of the ray, by a column transfer matrix with
// rational entries.

using Rational = boost::multiprecision::cpp_rational;

struct OracleResult {
  int n = 0;
  int m = 0;
  Rational p;
  Rational c_f;
  std::vector<int> holes;  // A = ray minus these sites (given by x <= 0)
  Rational e_ray;      // E f_n(ray)
  Rational e_ray_ext;  // E f_n(ray u E_m)
  Rational e_A;        // E f_n(A)
  Rational e_A_ext;    // E f_n(A u E_m)

  Rational diff_ray() const { return e_ray_ext - e_ray; }
  Rational diff_A() const { return e_A_ext - e_A; }
  // diff_A >= diff_ray >= C_f m
  bool ordering_holds() const { return diff_A() >= diff_ray() && diff_ray() >= c_f * m; }
};

// n <= 3, m <= 2, p rational in (0, 1] with denominator <= 16, C_f > 0.
OracleResult durrett_oracle(int n, int m, const Rational& p, const Rational& c1,
                            const Rational& c2, const std::vector<int>& holes = {0});

// Distribution of the rightmost x on D_n for a finite start set on D_0
// (given by x coordinates); key nullopt collects the empty event.
using RightmostLaw = std::map<std::optional<int>, Rational>;
RightmostLaw rightmost_law_transfer(const std::vector<int>& start_x, int n, const Rational& p);
// Independent check by summing over every configuration of the edges that can
// matter (at most 24 of them).
RightmostLaw rightmost_law_enumerated(const std::vector<int>& start_x, int n, const Rational& p);

// E r_n for the ray with the sites in `holes` removed and E_m added.
Rational expected_rightmost(int n, int m, const Rational& p, const std::vector<int>& holes);

Rational parse_rational(const std::string& text);

}  // namespace fpp
