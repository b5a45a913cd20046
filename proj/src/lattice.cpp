#include "fpp/lattice.hpp"

#include <string>

#include "fpp/errors.hpp"

namespace fpp {

BoxLattice::BoxLattice(int radius) : radius_(radius), side_(2 * radius + 1) {
  if (radius < 1 || radius > 20000) throw DomainError("BoxLattice: radius out of range");
  num_horizontal_ = static_cast<std::size_t>(side_) * (side_ - 1);
}

EdgeId BoxLattice::edge_id(const Edge& e) const {
  if (!contains(e)) throw DomainError("BoxLattice: edge outside box");
  if (!e.vertical) {
    return static_cast<EdgeId>((e.from.y + radius_) * (side_ - 1) + (e.from.x + radius_));
  }
  return up_edge(id(e.from));
}

Edge BoxLattice::edge(EdgeId i) const {
  if (i >= num_edges()) throw DomainError("BoxLattice: edge index out of range");
  if (i < num_horizontal_) {
    const int row = static_cast<int>(i / (side_ - 1));
    const int col = static_cast<int>(i % (side_ - 1));
    return {{col - radius_, row - radius_}, false};
  }
  return {site(static_cast<SiteId>(i - num_horizontal_)), true};
}

Edge BoxLattice::edge_between(Site a, Site b) const {
  const Site d = b - a;
  if (d == Site{1, 0}) return {a, false};
  if (d == Site{-1, 0}) return {b, false};
  if (d == Site{0, 1}) return {a, true};
  if (d == Site{0, -1}) return {b, true};
  throw DomainError("BoxLattice: sites are not nearest neighbours");
}

Site Direction::target(double n) const {
  // Snap values within 1e-9 of an integer so that n*cos(pi/4) style products
  // do not fall just below a lattice line.
  auto snap = [](double v) {
    const double r = std::round(v);
    return std::abs(v - r) < 1e-9 ? r : v;
  };
  return round_to_site(snap(n * cx()), snap(n * cy()));
}

}  // namespace fpp
