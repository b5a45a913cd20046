#include "fpp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "fpp/bypass.hpp"
#include "fpp/errors.hpp"

namespace fpp {

namespace {

constexpr double kMassTol = 1e-12;
constexpr std::int64_t kMaxTickScale = 4096;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// 12 significant digits: laws that differ only by rounding in their masses,
// such as 1 - 0.8 and 0.2, share one canonical form.
std::string canon(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Normalising constant of the truncated exponential on (lower, upper].
double exp_window(const ContinuousPiece& c) {
  if (std::isinf(c.upper)) return 1.0;
  return -std::expm1(-c.rate * (c.upper - c.lower));
}

// Conditional CDF of a piece at t.
double piece_cdf(const ContinuousPiece& c, double t) {
  if (t <= c.lower) return 0.0;
  if (t >= c.upper) return 1.0;
  if (c.kind == PieceKind::uniform) return (t - c.lower) / (c.upper - c.lower);
  return -std::expm1(-c.rate * (t - c.lower)) / exp_window(c);
}

// Conditional quantile; v in (0, 1].
double piece_quantile(const ContinuousPiece& c, double v) {
  double x;
  if (c.kind == PieceKind::uniform) {
    x = c.lower + (c.upper - c.lower) * v;
  } else {
    x = c.lower - std::log1p(-v * exp_window(c)) / c.rate;
    if (std::isinf(x)) x = std::numeric_limits<double>::max();
  }
  if (x <= c.lower) x = std::nextafter(c.lower, std::numeric_limits<double>::infinity());
  return std::min(x, c.upper);
}

std::optional<std::int64_t> find_tick_scale(const std::vector<Atom>& atoms) {
  std::int64_t scale = 1;
  for (const auto& a : atoms) {
    std::int64_t s = 1;
    for (; s <= kMaxTickScale; ++s) {
      const double scaled = a.value * static_cast<double>(s);
      if (std::abs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, scaled)) break;
    }
    if (s > kMaxTickScale) return std::nullopt;
    scale = std::lcm(scale, s);
    if (scale > kMaxTickScale) return std::nullopt;
  }
  return scale;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

WeightDistribution::WeightDistribution(std::vector<Atom> atoms,
                                       std::vector<ContinuousPiece> pieces) {
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.mass >= 0.0) || !std::isfinite(a.value) || !(a.value > 0.0))
      throw ConfigError("distribution: atoms need positive finite values and masses >= 0");
    if (a.mass > 0.0) atoms_.push_back(a);
    total += a.mass;
  }
  for (const auto& c : pieces) {
    if (!(c.mass >= 0.0) || !(c.lower > 0.0) || !(c.upper > c.lower))
      throw ConfigError("distribution: continuous piece needs 0 < lower < upper, mass >= 0");
    if (c.kind == PieceKind::uniform && std::isinf(c.upper))
      throw ConfigError("distribution: uniform piece needs a finite upper end");
    if (c.kind == PieceKind::exponential && !(c.rate > 0.0))
      throw ConfigError("distribution: exponential piece needs rate > 0");
    if (c.mass > 0.0) pieces_.push_back(c);
    total += c.mass;
  }
  if (std::abs(total - 1.0) > kMassTol)
    throw ConfigError("distribution: masses sum to " + fmt(total) + ", expected 1");
  if (atoms_.empty() && pieces_.empty()) throw ConfigError("distribution: empty law");

  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.value < y.value; });
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].value == atoms_[i - 1].value)
      throw ConfigError("distribution: duplicate atom value " + fmt(atoms_[i].value));
  }
  std::stable_sort(pieces_.begin(), pieces_.end(),
                   [](const ContinuousPiece& x, const ContinuousPiece& y) {
                     return x.lower < y.lower;
                   });

  b_ = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) b_ = std::min(b_, a.value);
  for (const auto& c : pieces_) b_ = std::min(b_, c.lower);
  p_at_b_ = (!atoms_.empty() && atoms_.front().value == b_) ? atoms_.front().mass : 0.0;
  if (pieces_.empty()) tick_scale_ = find_tick_scale(atoms_);
}

WeightDistribution WeightDistribution::two_atom(double p, double second) {
  return WeightDistribution({{1.0, p}, {second, 1.0 - p}});
}

double WeightDistribution::from_uniform(double u) const {
  double cum = 0.0;
  for (const auto& a : atoms_) {
    cum += a.mass;
    if (u < cum) return a.value;
  }
  for (const auto& c : pieces_) {
    const double start = cum;
    cum += c.mass;
    if (u < cum || &c == &pieces_.back()) {
      const double frac = std::clamp((u - start) / c.mass, 0.0, 1.0);
      return piece_quantile(c, 1.0 - frac);
    }
  }
  // Rounding in the cumulative sum; fall back to the largest atom.
  return atoms_.back().value;
}

double WeightDistribution::cdf(double t) const {
  double acc = 0.0;
  for (const auto& a : atoms_)
    if (a.value <= t) acc += a.mass;
  for (const auto& c : pieces_) acc += c.mass * piece_cdf(c, t);
  return std::min(acc, 1.0);
}

double WeightDistribution::mass_in(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  return std::max(0.0, cdf(hi) - cdf(lo));
}

double WeightDistribution::tail_mass(double y) const {
  double acc = 0.0;
  for (const auto& a : atoms_)
    if (a.value >= y) acc += a.mass;
  for (const auto& c : pieces_) acc += c.mass * (1.0 - piece_cdf(c, y));
  return acc;
}

double WeightDistribution::mean() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass * a.value;
  for (const auto& c : pieces_) {
    double cm;
    if (c.kind == PieceKind::uniform) {
      cm = 0.5 * (c.lower + c.upper);
    } else if (std::isinf(c.upper)) {
      cm = c.lower + 1.0 / c.rate;
    } else {
      const double w = c.upper - c.lower;
      cm = c.lower + 1.0 / c.rate - w * std::exp(-c.rate * w) / exp_window(c);
    }
    m += c.mass * cm;
  }
  return m;
}

std::string WeightDistribution::canonical() const {
  std::string s = "atoms=";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) s += ',';
    s += canon(atoms_[i].value) + ':' + canon(atoms_[i].mass);
  }
  s += ";pieces=";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& c = pieces_[i];
    if (i) s += ',';
    s += (c.kind == PieceKind::uniform ? "uniform(" : "exponential(") + canon(c.lower) + ',' +
         canon(c.upper);
    if (c.kind == PieceKind::exponential) s += ",rate=" + canon(c.rate);
    s += "]:" + canon(c.mass);
  }
  return s;
}

std::uint64_t WeightDistribution::hash() const { return fnv1a64(canonical()); }

HeavyThreshold HeavyThreshold::make(const WeightDistribution& dist, double y) {
  if (!(y > 1.0)) throw DomainError("heavy threshold: y must exceed 1");
  const double q = dist.tail_mass(y);
  if (!(q > 0.0)) throw DomainError("heavy threshold: mu([y, inf)) = 0");
  return {y, q};
}

bool membership_in_Mp(const WeightDistribution& dist, double pc_estimate) {
  return dist.infimum() == 1.0 && dist.mass_at_infimum() >= pc_estimate;
}

WeightDistribution more_variable_transform(const WeightDistribution& dist, double y) {
  if (!(y > 1.0)) throw DomainError("more_variable_transform: y must exceed 1");
  std::vector<Atom> atoms;
  for (const auto& a : dist.atoms()) atoms.push_back({a.value >= y ? a.value + 1.0 : a.value, a.mass});

  std::vector<ContinuousPiece> pieces;
  for (const auto& c : dist.pieces()) {
    if (c.lower >= y) {
      pieces.push_back({c.kind, c.lower + 1.0, c.upper + 1.0, c.rate, c.mass});
      continue;
    }
    if (c.upper < y) {
      pieces.push_back(c);
      continue;
    }
    // Piece straddles y: split at y and shift the upper part.
    const double below = piece_cdf(c, y);
    if (c.kind == PieceKind::uniform) {
      pieces.push_back({c.kind, c.lower, y, 0.0, c.mass * below});
      pieces.push_back({c.kind, y + 1.0, c.upper + 1.0, 0.0, c.mass * (1.0 - below)});
    } else {
      // Memorylessness: the part above y is again an exponential from y.
      pieces.push_back({c.kind, c.lower, y, c.rate, c.mass * below});
      pieces.push_back({c.kind, y + 1.0, c.upper + 1.0, c.rate, c.mass * (1.0 - below)});
    }
  }
  // Merging can make an atom land on an existing value (e.g. v >= y maps onto v+1).
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().value == a.value)
      merged.back().mass += a.mass;
    else
      merged.push_back(a);
  }
  return WeightDistribution(std::move(merged), std::move(pieces));
}

double rho_a_exact(int a, double p) {
  const CaTemplate tpl = build_ca_template(a);
  return std::pow(p, static_cast<double>(tpl.open_edges.size())) *
         std::pow(1.0 - p, static_cast<double>(tpl.closed_edges.size()));
}

}  // namespace fpp
