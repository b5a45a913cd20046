#include "fpp/oriented.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr std::uint32_t kEtaTag = 0x45544155u;   // "ETAU"
constexpr std::uint32_t kCoinTag = 0x434F494Eu;  // "COIN"

std::uint64_t pack(Site s) noexcept {
  return static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x)) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.y)) << 32);
}

bool is_unit(const WeightField& field, EdgeId e) {
  return field.exact() ? field.stored(e) == field.scale() : field.stored(e) == 1.0;
}

}  // namespace

SiteUniforms eta_uniforms(std::uint64_t key, Site s) noexcept {
  const auto bits = keyed_draw(key, pack(s), kEtaTag);
  return {to_unit_interval(bits[0]), to_unit_interval(bits[1])};
}

EtaField EtaField::from_bits(const BoxLattice& lattice, std::vector<std::uint8_t> bits,
                             CouplingKind kind) {
  if (bits.size() != lattice.num_edges()) throw DomainError("EtaField: wrong number of bits");
  EtaField f;
  f.kind_ = kind;
  f.lattice_ = lattice;
  for (auto& b : bits) b = b ? 1 : 0;
  f.bits_ = std::move(bits);
  return f;
}

EtaField EtaField::bernoulli_box(const BoxLattice& lattice, double p, std::uint64_t key) {
  std::vector<std::uint8_t> bits(lattice.num_edges());
  for (EdgeId e = 0; e < bits.size(); ++e) {
    const Edge edge = lattice.edge(e);
    const SiteUniforms u = eta_uniforms(key, edge.from);
    bits[e] = (edge.vertical ? u.up : u.right) < p;
  }
  EtaField f = from_bits(lattice, std::move(bits));
  f.p_ = p;
  f.key_ = key;
  return f;
}

EtaField EtaField::lazy(double p, std::uint64_t key) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("EtaField::lazy: p outside [0,1]");
  EtaField f;
  f.lazy_ = true;
  f.p_ = p;
  f.key_ = key;
  return f;
}

bool EtaField::open(Site s, bool vertical) const {
  if (lazy_) {
    const SiteUniforms u = eta_uniforms(key_, s);
    return (vertical ? u.up : u.right) < p_;
  }
  const Edge e{s, vertical};
  if (!lattice_.contains(e)) throw DomainError("EtaField: edge outside the box");
  return bits_[lattice_.edge_id(e)] != 0;
}

EtaField couple_eta(const WeightField& field) {
  std::vector<std::uint8_t> bits(field.lattice().num_edges());
  for (EdgeId e = 0; e < bits.size(); ++e) bits[e] = is_unit(field, e);
  return EtaField::from_bits(field.lattice(), std::move(bits), CouplingKind::standard);
}

EtaField couple_eta_critical(const WeightField& field, const WeightDistribution& dist, double eps,
                             double K, std::uint64_t coin_key) {
  if (eps < 0.0) throw ConfigError("couple_eta_critical: eps must be >= 0");
  const double window = dist.mass_in(1.0, K);
  if (window < eps) throw ConfigError("couple_eta_critical: mu((1,K]) < eps");
  const double q = eps == 0.0 ? 0.0 : eps / window;
  const double k_stored = field.exact() ? K * field.scale() : K;
  const double one = field.exact() ? field.scale() : 1.0;
  std::vector<std::uint8_t> bits(field.lattice().num_edges());
  for (EdgeId e = 0; e < bits.size(); ++e) {
    const double w = field.stored(e);
    if (is_unit(field, e)) {
      bits[e] = 1;
    } else if (w > one && w <= k_stored) {
      bits[e] = to_unit_interval(keyed_draw(coin_key, e, kCoinTag)[0]) < q;
    }
  }
  return EtaField::from_bits(field.lattice(), std::move(bits), CouplingKind::critical);
}

// ---------------------------------------------------------------------------

bool DiagonalFront::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t DiagonalFront::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool DiagonalFront::test(int x) const {
  const long long off = static_cast<long long>(x) - x0_;
  if (off < 0 || off >= 64LL * static_cast<long long>(words_.size())) return false;
  return (words_[off / 64] >> (off % 64)) & 1u;
}

void DiagonalFront::set(int x) {
  if (words_.empty()) {
    x0_ = x;
    words_.assign(1, 0);
  }
  if (x < x0_) {
    const int k = (x0_ - x + 63) / 64;
    words_.insert(words_.begin(), k, 0);
    x0_ -= 64 * k;
  }
  const long long off = static_cast<long long>(x) - x0_;
  if (off >= 64LL * static_cast<long long>(words_.size())) words_.resize(off / 64 + 1, 0);
  words_[off / 64] |= std::uint64_t{1} << (off % 64);
}

std::optional<int> DiagonalFront::rightmost_x() const {
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i]) return x0_ + static_cast<int>(64 * i) + 63 - std::countl_zero(words_[i]);
  }
  return std::nullopt;
}

std::optional<int> DiagonalFront::leftmost_x() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i]) return x0_ + static_cast<int>(64 * i) + std::countr_zero(words_[i]);
  }
  return std::nullopt;
}

std::vector<Site> DiagonalFront::sites() const {
  std::vector<Site> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (std::uint64_t w = words_[i]; w; w &= w - 1) {
      const int x = x0_ + static_cast<int>(64 * i) + std::countr_zero(w);
      out.push_back({x, m_ - x});
    }
  }
  return out;
}

void DiagonalFront::unite(const DiagonalFront& other) {
  if (other.m_ != m_ && !other.empty()) throw DomainError("DiagonalFront: different diagonals");
  for (const Site& s : other.sites()) set(s.x);
}

void DiagonalFront::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
  std::size_t lead = 0;
  while (lead < words_.size() && words_[lead] == 0) ++lead;
  if (lead > 0) {
    words_.erase(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(lead));
    x0_ += 64 * static_cast<int>(lead);
  }
}

DiagonalFront DiagonalFront::step(const EtaField& eta) const {
  DiagonalFront next(m_ + 1);
  next.x0_ = x0_;
  next.words_.assign(words_.size() + 1, 0);
  // Only occupied sites need their edges looked up; the masks are then
  // combined word-wise: next = (cur & up) | ((cur & right) << 1).
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const std::uint64_t cur = words_[i];
    if (!cur) continue;
    std::uint64_t up = 0, right = 0;
    for (std::uint64_t w = cur; w; w &= w - 1) {
      const int b = std::countr_zero(w);
      const int x = x0_ + static_cast<int>(64 * i) + b;
      const Site s{x, m_ - x};
      if (eta.up(s)) up |= std::uint64_t{1} << b;
      if (eta.right(s)) right |= std::uint64_t{1} << b;
    }
    next.words_[i] |= (cur & up) | ((cur & right) << 1);
    next.words_[i + 1] |= (cur & right) >> 63;
  }
  next.trim();
  return next;
}

StartingSet StartingSet::ray(Site anchor, int width) {
  if (width < 0) throw DomainError("StartingSet::ray: negative width");
  StartingSet s;
  s.anchor = anchor;
  s.offsets.resize(static_cast<std::size_t>(width) + 1);
  for (int k = 0; k <= width; ++k) s.offsets[k] = k;
  return s;
}

StartingSet StartingSet::block(Site anchor, int size) {
  if (size < 1) throw DomainError("StartingSet::block: size must be >= 1");
  return ray(anchor, size - 1);
}

StartingSet StartingSet::ray_with_extension(int width, int m) {
  if (m < 0) throw DomainError("StartingSet: negative extension");
  return ray({m, -m}, width + m);
}

std::vector<Site> StartingSet::sites() const {
  std::vector<Site> out;
  for (int k : offsets) out.push_back({anchor.x - k, anchor.y + k});
  return out;
}

DiagonalFront StartingSet::front() const {
  DiagonalFront f(diagonal());
  for (int k : offsets) {
    if (k < 0) throw DomainError("StartingSet: offsets must be >= 0");
    f.set(anchor.x - k);
  }
  return f;
}

DiagonalFront evolve(const EtaField& eta, DiagonalFront front, int n) {
  if (n < 0) throw DomainError("evolve: n must be >= 0");
  const int target = front.diagonal() + n;
  for (int i = 0; i < n && !front.empty(); ++i) front = front.step(eta);
  if (front.empty()) return DiagonalFront(target);
  return front;
}

DiagonalFront reachable_diagonal(const EtaField& eta, const StartingSet& S, int n) {
  if (n < 0) throw DomainError("reachable_diagonal: n must be >= 0");
  return evolve(eta, S.front(), n);
}

RightEdge rightmost(const DiagonalFront& xi, const LinearFunctional& f) {
  RightEdge r;
  const auto x = xi.rightmost_x();
  if (!x) return r;
  r.M = Site{*x, xi.diagonal() - *x};
  r.f = f(*r.M);
  return r;
}

RightEdge rightmost(const std::vector<Site>& xi, const LinearFunctional& f) {
  RightEdge r;
  for (const Site& s : xi) {
    if (!r.M || s.x > r.M->x) r.M = s;
  }
  if (!r.M) return r;
  r.f = f(*r.M);
  if (f.c_f() > 0) {
    for (const Site& s : xi) {
      if (f(s) > r.f) throw std::logic_error("rightmost: x-argmax is not the f-argmax");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

AlphaEstimate alpha_p_estimate(double p, int n, std::size_t reps, std::uint64_t seed,
                               const ScanOptions& opts) {
  if (n < 1) throw DomainError("alpha_p_estimate: n must be >= 1");
  struct Cell {
    double value;
    bool rerun;
  };
  auto cells = replicate<Cell>(
      reps,
      [&](std::size_t rep) {
        const EtaField eta = EtaField::lazy(p, derive_key(seed, cell_id(opts.stage, 0, rep)));
        bool rerun = false;
        for (int width = 2 * n; width <= 64 * n; width *= 2) {
          const DiagonalFront xi = reachable_diagonal(eta, StartingSet::ray({0, 0}, width), n);
          if (const auto x = xi.rightmost_x())
            return Cell{std::sqrt(2.0) * (static_cast<double>(*x) / n - 0.5), rerun};
          rerun = true;
        }
        throw std::runtime_error("alpha_p_estimate: front died out at every width");
      },
      RunOptions{opts.threads, opts.parallel});
  AlphaEstimate est;
  est.p = p;
  est.n = n;
  for (const auto& c : cells) {
    if (!c.value) continue;
    est.values.push_back(c.value->value);
    if (c.value->rerun) ++est.reruns;
  }
  est.reps = est.values.size();
  const Summary s = summarize(est.values);
  est.mean = s.mean;
  est.se = s.se;
  est.ci = mean_interval(s, z_for_level(opts.ci_level));
  return est;
}

double critical_value(std::uint64_t key, int N) {
  if (N < 1) throw DomainError("critical_value: N must be >= 1");
  // val[x] on D_m: min over oriented paths 0 -> (x, m - x) of the largest edge uniform.
  std::vector<double> val{0.0}, next;
  for (int m = 0; m < N; ++m) {
    next.assign(static_cast<std::size_t>(m) + 2, 2.0);
    for (int x = 0; x <= m; ++x) {
      const SiteUniforms u = eta_uniforms(key, {x, m - x});
      next[x] = std::min(next[x], std::max(val[x], u.up));
      next[x + 1] = std::min(next[x + 1], std::max(val[x], u.right));
    }
    val.swap(next);
  }
  return *std::min_element(val.begin(), val.end());
}

SurvivalScan survival_scan(const std::vector<double>& p_grid, int N, std::size_t reps,
                           std::uint64_t seed, const ScanOptions& opts) {
  if (p_grid.empty() || !std::is_sorted(p_grid.begin(), p_grid.end()))
    throw ConfigError("survival_scan: p grid must be ascending and non-empty");
  auto cells = replicate<double>(
      reps,
      [&](std::size_t rep) { return critical_value(derive_key(seed, cell_id(opts.stage, 0, rep)), N); },
      RunOptions{opts.threads, opts.parallel});
  SurvivalScan scan;
  const std::vector<double> crit = successful(cells, &scan.failed);
  scan.critical = crit;
  const double z = z_for_level(opts.ci_level);
  scan.N = N;
  scan.reps = crit.size();
  for (double p : p_grid) {
    // Bits are u < p, so the path is open iff its largest uniform is < p.
    const auto k = static_cast<std::size_t>(
        std::count_if(crit.begin(), crit.end(), [p](double c) { return c < p; }));
    const double freq = crit.empty() ? 0.0 : static_cast<double>(k) / crit.size();
    scan.rows.push_back({p, k, freq, wilson_interval(k, crit.size(), z)});
  }
  double best = -1.0;
  for (std::size_t i = 0; i + 1 < scan.rows.size(); ++i) {
    const auto& a = scan.rows[i];
    const auto& b = scan.rows[i + 1];
    const double rise = (b.frequency - a.frequency) / (b.p - a.p);
    const bool sep = a.ci.hi < b.ci.lo;
    // Separated rises take precedence over unseparated ones.
    if ((sep && !scan.separated) || ((sep == scan.separated) && rise > best)) {
      best = rise;
      scan.separated = sep;
      scan.pc_estimate = 0.5 * (a.p + b.p);
      scan.pc_uncertainty = b.p - a.p;
    }
  }
  if (scan.rows.size() == 1) scan.pc_estimate = scan.rows[0].p;
  return scan;
}

void SurvivalScan::write_csv(std::ostream& out) const {
  out << "# fpplab survival-scan protocol=1 start=origin\n";
  out << "p,N,reps,survival,ci_lo,ci_hi\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%d,%zu,%.10g,%.10g,%.10g\n", r.p, N, reps, r.frequency,
                  r.ci.lo, r.ci.hi);
    out << buf;
  }
}

std::vector<FrequencyPoint> grim_quantity(double p, const std::vector<int>& N_list, int M,
                                          std::size_t reps, std::uint64_t seed,
                                          const ScanOptions& opts) {
  if (N_list.empty() || !std::is_sorted(N_list.begin(), N_list.end()) || N_list.front() < 1)
    throw ConfigError("grim_quantity: N list must be ascending positive integers");
  auto cells = replicate<std::vector<std::uint8_t>>(
      reps,
      [&](std::size_t rep) {
        const EtaField eta = EtaField::lazy(p, derive_key(seed, cell_id(opts.stage, 0, rep)));
        std::vector<std::uint8_t> hit(N_list.size(), 0);
        DiagonalFront front = StartingSet::ray({0, 0}, 0).front();
        int m = 0;
        for (std::size_t i = 0; i < N_list.size(); ++i) {
          for (; m < N_list[i] && !front.empty(); ++m) front = front.step(eta);
          if (front.empty()) break;
          hit[i] = front.count() < static_cast<std::size_t>(M);
        }
        return hit;
      },
      RunOptions{opts.threads, opts.parallel});
  const auto rows = successful(cells);
  const double z = z_for_level(opts.ci_level);
  std::vector<FrequencyPoint> out;
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    FrequencyPoint pt;
    pt.n = N_list[i];
    pt.reps = rows.size();
    for (const auto& r : rows) pt.hits += r[i];
    pt.frequency = pt.reps ? static_cast<double>(pt.hits) / pt.reps : 0.0;
    pt.ci = wilson_interval(pt.hits, pt.reps, z);
    out.push_back(pt);
  }
  return out;
}

std::vector<FrequencyPoint> nonsurvival_for_block(double p, const std::vector<int>& n_sizes, int N,
                                                  std::size_t reps, std::uint64_t seed,
                                                  const ScanOptions& opts) {
  auto cells = replicate<std::vector<std::uint8_t>>(
      reps,
      [&](std::size_t rep) {
        const EtaField eta = EtaField::lazy(p, derive_key(seed, cell_id(opts.stage, 0, rep)));
        std::vector<std::uint8_t> dead(n_sizes.size(), 0);
        for (std::size_t i = 0; i < n_sizes.size(); ++i)
          dead[i] = reachable_diagonal(eta, StartingSet::block({0, 0}, n_sizes[i]), N).empty();
        return dead;
      },
      RunOptions{opts.threads, opts.parallel});
  const auto rows = successful(cells);
  const double z = z_for_level(opts.ci_level);
  std::vector<FrequencyPoint> out;
  for (std::size_t i = 0; i < n_sizes.size(); ++i) {
    FrequencyPoint pt;
    pt.n = n_sizes[i];
    pt.reps = rows.size();
    for (const auto& r : rows) pt.hits += r[i];
    pt.frequency = pt.reps ? static_cast<double>(pt.hits) / pt.reps : 0.0;
    pt.ci = wilson_interval(pt.hits, pt.reps, z);
    out.push_back(pt);
  }
  return out;
}

}  // namespace fpp
