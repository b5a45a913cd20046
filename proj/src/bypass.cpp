#include "fpp/bypass.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

CaTemplate build_ca_template(int a) {
  if (a < 2) throw DomainError("build_ca_template: a must be >= 2");
  CaTemplate t;
  t.a = a;
  t.open_edges = {{{0, 0}, false}, {{1, -1}, true}, {{1, -1}, false}};
  t.closed_edges = {{{0, 0}, true}, {{1, 0}, false}, {{1, 0}, true}};
  for (int k = 1; k <= a - 2; ++k) {
    t.closed_edges.push_back({{-k, k}, false});
    t.closed_edges.push_back({{-k, k}, true});
  }
  // Triangle with corner (2,-1) and legs a-1.
  auto in_triangle = [a](Site s) { return s.x >= 2 && s.y >= -1 && (s.x - 2) + (s.y + 1) <= a - 1; };
  for (int u = 2; u <= 2 + a - 1; ++u) {
    for (int v = -1; v <= -1 + a - 1; ++v) {
      const Site s{u, v};
      if (!in_triangle(s)) continue;
      if (in_triangle(s + Site{1, 0})) t.open_edges.push_back({s, false});
      if (in_triangle(s + Site{0, 1})) t.open_edges.push_back({s, true});
    }
  }
  for (int i = 0; i < a; ++i) t.s_a_offsets.push_back({2 + i, -1 + (a - 1 - i)});

  std::set<EdgeOffset> open(t.open_edges.begin(), t.open_edges.end());
  if (open.size() != t.open_edges.size()) throw std::logic_error("build_ca_template: duplicate open edge");
  for (const auto& e : t.closed_edges) {
    if (open.count(e)) throw std::logic_error("build_ca_template: open and closed sets intersect");
  }
  return t;
}

bool detect_Ca(const EtaField& eta, Site anchor, const CaTemplate& tpl) {
  for (const auto& lists : {&tpl.open_edges, &tpl.closed_edges}) {
    for (const auto& e : *lists) {
      if (!eta.covers(e.at(anchor))) throw DomainError("detect_Ca: template leaves the box");
    }
  }
  for (const auto& e : tpl.closed_edges) {
    if (eta.bit(e.at(anchor))) return false;
  }
  for (const auto& e : tpl.open_edges) {
    if (!eta.bit(e.at(anchor))) return false;
  }
  return true;
}

BypassTrajectory run_bypass_process(const EtaField& eta, const StartingSet& S, int a, int n_max,
                                    const LinearFunctional& f) {
  if (!(f.c_f() > 0)) throw DomainError("run_bypass_process: need C_f > 0");
  if (n_max < 0) throw DomainError("run_bypass_process: n_max must be >= 0");
  const CaTemplate tpl = build_ca_template(a);
  BypassTrajectory tr;
  tr.a = a;
  tr.n_max = n_max;

  DiagonalFront base = S.front();
  DiagonalFront cur = base;
  DiagonalFront first = base;
  DiagonalFront origin = StartingSet::ray(S.anchor, 0).front();
  auto record = [&](int k) {
    tr.f_current.push_back(rightmost(cur, f).f);
    tr.f_first.push_back(rightmost(first, f).f);
    tr.f_base.push_back(rightmost(base, f).f);
    tr.K.push_back(k);
  };
  record(0);
  for (int t = 1; t <= n_max; ++t) {
    const RightEdge r = rightmost(cur, f);
    const bool bypass = r.M && detect_Ca(eta, *r.M, tpl);
    const bool had_first = !tr.tau.empty();
    cur = evolve(eta, cur, a);
    if (bypass) {
      for (const Site& off : tpl.s_a_offsets) {
        const Site z = *r.M + off;
        if (z.x + z.y != cur.diagonal()) throw std::logic_error("bypass: S^a is off the diagonal");
        if (cur.test(z.x)) throw std::logic_error("bypass: S^a meets the oriented front");
        cur.set(z.x);
      }
      tr.tau.push_back(t);
    }
    if (had_first)
      first = evolve(eta, first, a);
    else
      first = cur;
    base = evolve(eta, base, a);
    origin = evolve(eta, origin, a);
    record(static_cast<int>(tr.tau.size()));
  }
  tr.final_M = rightmost(cur, f).M;
  tr.base_reaches = !origin.empty();
  return tr;
}

FrequencyPoint ca_detection_frequency(int a, double p, std::size_t reps, std::uint64_t seed,
                                      const ScanOptions& opts) {
  const CaTemplate tpl = build_ca_template(a);
  auto cells = replicate<int>(
      reps,
      [&](std::size_t rep) {
        const EtaField eta = EtaField::lazy(p, derive_key(seed, cell_id(opts.stage, 0, rep)));
        return detect_Ca(eta, {0, 0}, tpl) ? 1 : 0;
      },
      RunOptions{opts.threads, opts.parallel});
  const auto hits = successful(cells);
  FrequencyPoint pt;
  pt.n = a;
  pt.reps = hits.size();
  for (int h : hits) pt.hits += static_cast<std::size_t>(h);
  pt.frequency = pt.reps ? static_cast<double>(pt.hits) / pt.reps : 0.0;
  pt.ci = wilson_interval(pt.hits, pt.reps, z_for_level(opts.ci_level));
  return pt;
}

BypassEnsemble bypass_ensemble(double p, int a, int n_max, std::size_t reps, std::uint64_t seed,
                               const LinearFunctional& f, const ScanOptions& opts) {
  const StartingSet S = StartingSet::ray({0, 0}, 2 * a * n_max);
  auto cells = replicate<BypassTrajectory>(
      reps,
      [&](std::size_t rep) {
        const EtaField eta = EtaField::lazy(p, derive_key(seed, cell_id(opts.stage, 0, rep)));
        return run_bypass_process(eta, S, a, n_max, f);
      },
      RunOptions{opts.threads, opts.parallel});
  BypassEnsemble e;
  e.p = p;
  e.a = a;
  e.n_max = n_max;
  e.runs = successful(cells, &e.failed);
  return e;
}

void write_trajectory_csv(std::ostream& out, const std::vector<BypassTrajectory>& runs) {
  out << "replication,k,tau_k\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (std::size_t k = 0; k < runs[r].tau.size(); ++k)
      out << r << ',' << (k + 1) << ',' << runs[r].tau[k] << '\n';
  }
}

void write_trajectory_summary_csv(std::ostream& out, const std::vector<BypassTrajectory>& runs) {
  out << "replication,K_n,f0,fK\n";
  char buf[128];
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g\n", r, runs[r].K_n(),
                  runs[r].f_base.back(), runs[r].f_current.back());
    out << buf;
  }
}

}  // namespace fpp
