#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <utility>

namespace fpp {

struct Site {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Site&, const Site&) = default;
  friend Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
  friend Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }
};

inline int l1_norm(Site s) { return std::abs(s.x) + std::abs(s.y); }
inline int linf_norm(Site s) { return std::max(std::abs(s.x), std::abs(s.y)); }

// The unique lattice point s with (x, y) in s + [0,1)^2.
inline Site round_to_site(double x, double y) {
  return {static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))};
}

using SiteId = std::uint32_t;
using EdgeId = std::uint32_t;

// Nearest-neighbour edge of Z^2 restricted to a box, stored as (lower-left end, axis).
struct Edge {
  Site from;       // left or bottom endpoint
  bool vertical;   // false: from -> from + (1,0); true: from -> from + (0,1)

  Site to() const { return vertical ? Site{from.x, from.y + 1} : Site{from.x + 1, from.y}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// The box [-R, R]^2. Sites are numbered row-major by y; horizontal edges come
// first (row-major by y), then vertical edges (row-major by y).
class BoxLattice {
 public:
  explicit BoxLattice(int radius);

  int radius() const { return radius_; }
  int side() const { return side_; }
  std::size_t num_sites() const { return static_cast<std::size_t>(side_) * side_; }
  std::size_t num_edges() const { return 2 * num_horizontal_; }

  bool contains(Site s) const {
    return s.x >= -radius_ && s.x <= radius_ && s.y >= -radius_ && s.y <= radius_;
  }
  bool on_boundary(Site s) const { return contains(s) && linf_norm(s) == radius_; }
  bool contains(const Edge& e) const { return contains(e.from) && contains(e.to()); }

  SiteId id(Site s) const {
    return static_cast<SiteId>((s.y + radius_) * side_ + (s.x + radius_));
  }
  Site site(SiteId i) const {
    return {static_cast<int>(i % side_) - radius_, static_cast<int>(i / side_) - radius_};
  }

  EdgeId edge_id(const Edge& e) const;
  Edge edge(EdgeId i) const;
  // Edge joining two nearest neighbours (any order).
  Edge edge_between(Site a, Site b) const;

  // Index helpers for the hot loops (no bounds checks).
  EdgeId right_edge(SiteId s) const {
    const std::uint32_t row = s / side_, col = s % side_;
    return row * (side_ - 1) + col;
  }
  EdgeId up_edge(SiteId s) const { return static_cast<EdgeId>(num_horizontal_ + s); }

  // Neighbours of a site with the connecting edge; returns the count.
  int neighbours(SiteId s, std::array<std::pair<SiteId, EdgeId>, 4>& out) const {
    const std::uint32_t row = s / side_, col = s % side_;
    int k = 0;
    if (col + 1 < static_cast<std::uint32_t>(side_)) out[k++] = {s + 1, right_edge(s)};
    if (col > 0) out[k++] = {s - 1, right_edge(s - 1)};
    if (row + 1 < static_cast<std::uint32_t>(side_)) out[k++] = {s + side_, up_edge(s)};
    if (row > 0) out[k++] = {s - side_, up_edge(s - side_)};
    return k;
  }

 private:
  int radius_;
  int side_;
  std::size_t num_horizontal_;
};

struct Direction {
  double theta;

  double cx() const { return std::cos(theta); }
  double cy() const { return std::sin(theta); }
  // round_to_site(n * w_theta); exact for the axis and diagonal when n*cos is integral.
  Site target(double n) const;
  double l1() const { return std::abs(cx()) + std::abs(cy()); }
};

// f(x, y) = c1 x + c2 y; C_f = f(1, -1).
struct LinearFunctional {
  double c1 = 1.0;
  double c2 = -1.0;

  double operator()(double x, double y) const { return c1 * x + c2 * y; }
  double operator()(Site s) const { return c1 * s.x + c2 * s.y; }
  double c_f() const { return c1 - c2; }
};

}  // namespace fpp
