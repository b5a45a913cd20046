#include "fpp/field.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

constexpr std::uint32_t kWeightTag = 0x57454947u;  // "WEIG"
constexpr char kMagic[4] = {'F', 'P', 'P', 'W'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw ConfigError("WeightField::load: truncated stream");
  return v;
}

}  // namespace

WeightField WeightField::sample(const BoxLattice& lattice, const WeightDistribution& dist,
                                std::uint64_t seed) {
  const std::size_t n = lattice.num_edges();
  std::vector<double> stored(n);
  const auto scale = dist.tick_scale();
  const double s = scale ? static_cast<double>(*scale) : 1.0;
  for (std::size_t pair = 0; 2 * pair < n; ++pair) {
    const auto bits = keyed_draw(seed, pair, kWeightTag);
    for (std::size_t k = 0; k < 2 && 2 * pair + k < n; ++k) {
      const double v = dist.from_uniform(to_unit_interval(bits[k]));
      stored[2 * pair + k] = scale ? std::round(v * s) : v;
    }
  }
  return WeightField(lattice, std::move(stored), s, scale.has_value(), seed, dist.hash());
}

WeightField WeightField::from_weights(const BoxLattice& lattice, std::vector<double> weights) {
  if (weights.size() != lattice.num_edges())
    throw DomainError("WeightField::from_weights: wrong number of edges");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw DomainError("WeightField::from_weights: weights must be positive");
  }
  // Integral representation when every weight is a multiple of 1/s for small s.
  double scale = 1.0;
  bool exact = true;
  for (std::int64_t s = 1; s <= 64; s *= 2) {
    exact = true;
    for (double w : weights) {
      const double v = w * static_cast<double>(s);
      if (std::abs(v - std::round(v)) > 1e-9 * std::max(1.0, v)) {
        exact = false;
        break;
      }
    }
    if (exact) {
      scale = static_cast<double>(s);
      break;
    }
  }
  if (exact) {
    for (double& w : weights) w = std::round(w * scale);
  } else {
    scale = 1.0;
  }
  return WeightField(lattice, std::move(weights), scale, exact, 0, 0);
}

WeightField WeightField::transformed(double y) const {
  if (!(y > 1.0)) throw DomainError("WeightField::transformed: y must exceed 1");
  std::vector<double> out(stored_);
  const double ys = y * scale_;
  for (double& w : out) {
    if (w >= ys) w += scale_;
  }
  return WeightField(lattice_, std::move(out), scale_, exact_, seed_, dist_hash_ ^ 0x1ull);
}

void WeightField::dump(std::ostream& out) const {
  out.write(kMagic, 4);
  put(out, kVersion);
  put<std::int32_t>(out, lattice_.radius());
  put(out, seed_);
  put(out, dist_hash_);
  put(out, scale_);
  put<std::uint8_t>(out, exact_ ? 1 : 0);
  put<std::uint64_t>(out, stored_.size());
  out.write(reinterpret_cast<const char*>(stored_.data()),
            static_cast<std::streamsize>(stored_.size() * sizeof(double)));
}

WeightField WeightField::load(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ConfigError("WeightField::load: bad magic");
  if (get<std::uint32_t>(in) != kVersion) throw ConfigError("WeightField::load: bad version");
  const BoxLattice lattice(get<std::int32_t>(in));
  const auto seed = get<std::uint64_t>(in);
  const auto dist_hash = get<std::uint64_t>(in);
  const auto scale = get<double>(in);
  const bool exact = get<std::uint8_t>(in) != 0;
  const auto count = get<std::uint64_t>(in);
  if (count != lattice.num_edges()) throw ConfigError("WeightField::load: edge count mismatch");
  std::vector<double> stored(count);
  in.read(reinterpret_cast<char*>(stored.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw ConfigError("WeightField::load: truncated weights");
  return WeightField(lattice, std::move(stored), scale, exact, seed, dist_hash);
}

}  // namespace fpp
