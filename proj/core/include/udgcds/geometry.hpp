#pragma once

// Unit-disk geometry: exact areas of disk lenses, triple intersections,
// disk/square truncation, the omitted-region functional X(q, u), and the
// 2L-sector partition of a small disk D_delta(o).
//
// Every disk here has radius 1; that radius is the length unit.
// Logarithms are natural.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "udgcds/errors.hpp"
#include "udgcds/random.hpp"

namespace udgcds::geometry {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2D operator*(double s, Point2D a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2D, Point2D) = default;
};

inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double dist2(Point2D a, Point2D b) { return dot(a - b, a - b); }
inline double dist(Point2D a, Point2D b) { return std::sqrt(dist2(a, b)); }
inline bool is_finite(Point2D p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Point at polar coordinates (r, theta) about `center`.
inline Point2D from_polar(Point2D center, double r, double theta) {
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

// Closed unit disk membership on squared distance.
inline bool in_unit_disk(Point2D center, Point2D p) { return dist2(center, p) <= 1.0; }

// The habitat [0, side]^2.
class SquareRegion {
 public:
  explicit SquareRegion(double side);

  double side() const { return side_; }
  double area() const { return side_ * side_; }
  bool contains(Point2D p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= side_ && p.y <= side_;
  }

 private:
  double side_;
};

// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool empty() const { return !(x1 > x0) || !(y1 > y0); }
};

// Bounding box of D_1(o) clipped to the square.
Rect truncated_disk_bounds(Point2D o, const SquareRegion& square);

struct AreaEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for exact computations
  std::uint64_t samples = 0;  // 0 for exact computations
};

// Area of D_1(p) ∩ D_1(q) for |p - q| = d.
double lens_area(double d);

// The two points where the unit circles about p and q cross, or nullopt when
// they do not cross (coincident, tangent, or farther than 2 apart).
std::optional<std::pair<Point2D, Point2D>> unit_circle_intersections(Point2D p, Point2D q);

// Exact area of the intersection of unit disks centred at `centers`.
// The region is convex; its boundary is integrated arc by arc with Green's
// theorem, each arc being the part of one circle inside all other disks.
double disk_intersection_area(std::span<const Point2D> centers);

double triple_disk_intersection_area(Point2D o, Point2D q, Point2D u);

// X(q, u): area of D_1(o) covered by neither D_1(q) nor D_1(u).
double omitted_area(Point2D o, Point2D q, Point2D u);

// Exact area of D_1(c) ∩ r.
double disk_rect_area(Point2D c, const Rect& r);

// |D̂_1(o)| = area of D_1(o) ∩ square; o must lie in the square.
double truncated_disk_area(Point2D o, const SquareRegion& square);

// Monte Carlo area of (D_1(q) ∪ D_1(u))^c ∩ D_1(o) ∩ square.
AreaEstimate truncated_omitted_area(Point2D o, Point2D q, Point2D u, const SquareRegion& square,
                                    std::uint64_t samples = 1'000'000, std::uint64_t seed = 1);

// Partition of the punctured disk D_delta(center) into 2L sectors
// Q_0..Q_{L-1} (polar angle in [(i-1/2)θ, (i+1/2)θ]) and their reflections
// R_0..R_{L-1} through the center, with θ = π / L.
class SectorFrame {
 public:
  // delta = 1/(b^{1/3} ln b), L = floor(b^{1/3} (ln b)^exponent), clamped to
  // at least 1. exponent must be 1.5 or 2. Requires b >= 2.
  static SectorFrame for_blue_count(std::uint64_t b, Point2D center = {}, double exponent = 1.5);
  // Arbitrary radius and sector count; used for experiments at scales where
  // the b-derived frame is too small to populate.
  static SectorFrame custom(Point2D center, double delta, std::uint32_t sectors);

  Point2D center() const { return center_; }
  std::uint64_t b() const { return b_; }  // 0 for custom frames
  double exponent() const { return exponent_; }
  double delta() const { return delta_; }
  std::uint32_t sectors() const { return sectors_; }  // L
  double theta() const { return theta_; }  // θ_b = π / L

  // Area of one sector: π δ² / (2L).
  double sector_area() const { return std::numbers::pi * delta_ * delta_ / (2.0 * sectors_); }

  SectorFrame with_center(Point2D c) const {
    SectorFrame f = *this;
    f.center_ = c;
    return f;
  }

 private:
  SectorFrame(Point2D center, std::uint64_t b, double exponent, double delta, std::uint32_t sectors);

  Point2D center_;
  std::uint64_t b_;
  double exponent_;
  double delta_;
  std::uint32_t sectors_;
  double theta_;
};

enum class SectorKind { Q, R, Outside };

struct SectorLabel {
  SectorKind kind = SectorKind::Outside;
  std::uint32_t index = 0;

  friend bool operator==(SectorLabel, SectorLabel) = default;
};

std::string to_string(SectorLabel label);

// Points exactly on an edge between two sectors go to the one with the lower
// index; between Q_i and R_i (only possible for L = 1) Q wins.
SectorLabel sector_of(const SectorFrame& frame, Point2D p);

// (q̃_i, ũ_i): polar (δ, (i - 1/2)θ) and (δ, (i + 1/2)θ + π) about the center.
std::pair<Point2D, Point2D> extreme_points(const SectorFrame& frame, std::uint32_t i);

// X(o_1, o_2) with o_1 at polar (δ, π) and o_2 at polar (δ, phi2),
// 0 <= phi2 <= π.
double omitted_area_on_circle(const SectorFrame& frame, double phi2);

// Lens of D_1(o_1) ∩ D_1(o_2) for the placement above, evaluated as 2y - sin 2y
// with cos y = δ cos(phi2/2). Matches lens_area(|o_1 - o_2|).
double circle_pair_lens_closed_form(double delta, double phi2);

// Hit-or-miss area of {p in bounds : inside(p)}.
// std_error = area(bounds) * sqrt(p̂(1 - p̂)/samples).
template <class Predicate>
AreaEstimate mc_area_oracle(Predicate&& inside, const Rect& bounds, std::uint64_t samples,
                            std::uint64_t seed) {
  if (bounds.empty() || !std::isfinite(bounds.area())) {
    throw DomainError("mc_area_oracle: empty or non-finite bounds");
  }
  if (samples == 0) throw DomainError("mc_area_oracle: samples must be >= 1");
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const Point2D p{rng.uniform(bounds.x0, bounds.x1), rng.uniform(bounds.y0, bounds.y1)};
    if (inside(p)) ++hits;
  }
  const double n = static_cast<double>(samples);
  const double p_hat = static_cast<double>(hits) / n;
  return {bounds.area() * p_hat, bounds.area() * std::sqrt(p_hat * (1.0 - p_hat) / n), samples};
}

}  // namespace udgcds::geometry
