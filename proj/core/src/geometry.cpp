#include "udgcds/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace udgcds::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Centre distances within this of 2 are treated as tangent.
constexpr double kTangentSlack = 1e-12;
// Centres closer than this are treated as the same disk.
constexpr double kCoincident = 1e-14;

void require_finite(Point2D p, const char* what) {
  if (!is_finite(p)) throw DomainError(std::string(what) + ": non-finite coordinate");
}

double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a >= kTwoPi ? 0.0 : a;
}

struct Arc {
  double start = 0.0;
  double length = kTwoPi;  // kTwoPi means the full circle
};

// The arcs intersected here are each shorter than π, so the intersection is
// a single arc or empty.
std::optional<Arc> intersect(const Arc& a, const Arc& b) {
  if (a.length >= kTwoPi) return b;
  if (b.length >= kTwoPi) return a;
  const double off_b = normalize_angle(b.start - a.start);
  if (off_b < a.length) {
    return Arc{b.start, std::min(b.length, a.length - off_b)};
  }
  const double off_a = normalize_angle(a.start - b.start);
  if (off_a < b.length) {
    return Arc{a.start, std::min(a.length, b.length - off_a)};
  }
  return std::nullopt;
}

// (1/2) ∮ (x dy - y dx) along the unit circle about c from t to t + len.
double green_arc_term(Point2D c, const Arc& arc) {
  const double t1 = arc.start;
  const double t2 = arc.start + arc.length;
  return 0.5 * (arc.length + c.x * (std::sin(t2) - std::sin(t1)) - c.y * (std::cos(t2) - std::cos(t1)));
}

// Antiderivative of sqrt(1 - x^2).
double half_chord_integral(double x) {
  x = std::clamp(x, -1.0, 1.0);
  return 0.5 * (x * std::sqrt(1.0 - x * x) + std::asin(x));
}

}  // namespace

SquareRegion::SquareRegion(double side) : side_(side) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw DomainError("square side must be finite and > 0");
  }
}

Rect truncated_disk_bounds(Point2D o, const SquareRegion& square) {
  return {std::max(0.0, o.x - 1.0), std::max(0.0, o.y - 1.0), std::min(square.side(), o.x + 1.0),
          std::min(square.side(), o.y + 1.0)};
}

double lens_area(double d) {
  if (!std::isfinite(d) || d < 0.0) throw DomainError("lens_area: distance must be finite and >= 0");
  if (d >= 2.0 - kTangentSlack) return 0.0;
  return 2.0 * std::acos(d / 2.0) - (d / 2.0) * std::sqrt(4.0 - d * d);
}

std::optional<std::pair<Point2D, Point2D>> unit_circle_intersections(Point2D p, Point2D q) {
  require_finite(p, "unit_circle_intersections");
  require_finite(q, "unit_circle_intersections");
  const double d = dist(p, q);
  if (d <= kCoincident || d >= 2.0 - kTangentSlack) return std::nullopt;
  const Point2D mid = 0.5 * (p + q);
  const double h = std::sqrt(std::max(0.0, 1.0 - d * d / 4.0));
  const Point2D normal{-(q.y - p.y) / d, (q.x - p.x) / d};
  return std::pair{mid + h * normal, mid - h * normal};
}

double disk_intersection_area(std::span<const Point2D> centers) {
  if (centers.empty()) throw DomainError("disk_intersection_area: no disks");
  std::vector<Point2D> unique;
  unique.reserve(centers.size());
  for (Point2D c : centers) {
    require_finite(c, "disk_intersection_area");
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](Point2D u) {
      return dist2(u, c) <= kCoincident * kCoincident;
    });
    if (!seen) unique.push_back(c);
  }
  if (unique.size() == 1) return kPi;

  // Work relative to the first centre to keep the Green sums well scaled.
  const Point2D origin = unique.front();
  for (Point2D& c : unique) c = c - origin;

  for (std::size_t i = 0; i < unique.size(); ++i) {
    for (std::size_t j = i + 1; j < unique.size(); ++j) {
      if (dist(unique[i], unique[j]) >= 2.0 - kTangentSlack) return 0.0;
    }
  }

  double area = 0.0;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    std::optional<Arc> arc = Arc{};
    for (std::size_t j = 0; j < unique.size() && arc; ++j) {
      if (j == i) continue;
      const Point2D v = unique[j] - unique[i];
      const double d = std::sqrt(dot(v, v));
      const double half = std::acos(d / 2.0);
      arc = intersect(*arc, Arc{normalize_angle(std::atan2(v.y, v.x) - half), 2.0 * half});
    }
    if (arc && arc->length > 0.0) area += green_arc_term(unique[i], *arc);
  }
  return std::clamp(area, 0.0, kPi);
}

double triple_disk_intersection_area(Point2D o, Point2D q, Point2D u) {
  const std::array<Point2D, 3> centers{o, q, u};
  return disk_intersection_area(centers);
}

double omitted_area(Point2D o, Point2D q, Point2D u) {
  require_finite(o, "omitted_area");
  require_finite(q, "omitted_area");
  require_finite(u, "omitted_area");
  // Canonical order makes X(o, q, u) == X(o, u, q) bit for bit.
  if (std::pair{u.x, u.y} < std::pair{q.x, q.y}) std::swap(q, u);
  const double x = kPi - lens_area(dist(o, q)) - lens_area(dist(o, u)) +
                   triple_disk_intersection_area(o, q, u);
  return std::clamp(x, 0.0, kPi);
}

double disk_rect_area(Point2D c, const Rect& r) {
  require_finite(c, "disk_rect_area");
  // Coordinates relative to the disk centre.
  const double x0 = std::max(r.x0 - c.x, -1.0);
  const double x1 = std::min(r.x1 - c.x, 1.0);
  const double y0 = r.y0 - c.y;
  const double y1 = r.y1 - c.y;
  if (!(x1 > x0) || !(y1 > y0)) return 0.0;

  // Between consecutive breakpoints the vertical extent of disk ∩ rect is
  // bounded above by either y1 or the upper arc, and below by either y0 or
  // the lower arc; the choice is fixed on each piece.
  std::vector<double> cuts{x0, x1};
  for (double y : {y0, y1}) {
    if (std::abs(y) < 1.0) {
      const double s = std::sqrt(1.0 - y * y);
      for (double x : {-s, s}) {
        if (x > x0 && x < x1) cuts.push_back(x);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());

  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (!(b > a)) continue;
    const double m = 0.5 * (a + b);
    const double h = std::sqrt(std::max(0.0, 1.0 - m * m));
    const bool top_is_edge = y1 < h;
    const bool bottom_is_edge = y0 > -h;
    const double top_mid = top_is_edge ? y1 : h;
    const double bottom_mid = bottom_is_edge ? y0 : -h;
    if (top_mid <= bottom_mid) continue;
    const double arc = half_chord_integral(b) - half_chord_integral(a);
    const double top = top_is_edge ? y1 * (b - a) : arc;
    const double bottom = bottom_is_edge ? y0 * (b - a) : -arc;
    area += top - bottom;
  }
  return std::clamp(area, 0.0, kPi);
}

double truncated_disk_area(Point2D o, const SquareRegion& square) {
  require_finite(o, "truncated_disk_area");
  if (!square.contains(o)) throw DomainError("truncated_disk_area: point outside the square");
  return disk_rect_area(o, Rect{0.0, 0.0, square.side(), square.side()});
}

AreaEstimate truncated_omitted_area(Point2D o, Point2D q, Point2D u, const SquareRegion& square,
                                    std::uint64_t samples, std::uint64_t seed) {
  require_finite(o, "truncated_omitted_area");
  require_finite(q, "truncated_omitted_area");
  require_finite(u, "truncated_omitted_area");
  if (!square.contains(o)) throw DomainError("truncated_omitted_area: point outside the square");
  const Rect bounds = truncated_disk_bounds(o, square);
  return mc_area_oracle(
      [&](Point2D p) { return in_unit_disk(o, p) && !in_unit_disk(q, p) && !in_unit_disk(u, p); },
      bounds, samples, seed);
}

SectorFrame::SectorFrame(Point2D center, std::uint64_t b, double exponent, double delta,
                         std::uint32_t sectors)
    : center_(center),
      b_(b),
      exponent_(exponent),
      delta_(delta),
      sectors_(sectors),
      theta_(kPi / static_cast<double>(sectors)) {}

SectorFrame SectorFrame::for_blue_count(std::uint64_t b, Point2D center, double exponent) {
  require_finite(center, "SectorFrame");
  if (b < 2) throw DomainError("SectorFrame: b must be >= 2");
  if (exponent != 1.5 && exponent != 2.0) {
    throw DomainError("SectorFrame: L exponent must be 1.5 or 2");
  }
  const double bd = static_cast<double>(b);
  const double log_b = std::log(bd);
  const double cube_root = std::cbrt(bd);
  const double delta = 1.0 / (cube_root * log_b);
  const double raw_l = std::floor(cube_root * std::pow(log_b, exponent));
  const auto sectors = static_cast<std::uint32_t>(std::max(1.0, raw_l));
  return SectorFrame(center, b, exponent, delta, sectors);
}

SectorFrame SectorFrame::custom(Point2D center, double delta, std::uint32_t sectors) {
  require_finite(center, "SectorFrame");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("SectorFrame: delta must be > 0");
  if (sectors == 0) throw DomainError("SectorFrame: need at least one sector");
  return SectorFrame(center, 0, 0.0, delta, sectors);
}

std::string to_string(SectorLabel label) {
  switch (label.kind) {
    case SectorKind::Q:
      return "Q" + std::to_string(label.index);
    case SectorKind::R:
      return "R" + std::to_string(label.index);
    case SectorKind::Outside:
      break;
  }
  return "Outside";
}

SectorLabel sector_of(const SectorFrame& frame, Point2D p) {
  require_finite(p, "sector_of");
  const Point2D v = p - frame.center();
  if (v.x == 0.0 && v.y == 0.0) throw DomainError("sector_of: point coincides with the center");
  if (dot(v, v) > frame.delta() * frame.delta()) return {SectorKind::Outside, 0};

  // Slots 0..L-1 are Q_0..Q_{L-1}, slots L..2L-1 are R_0..R_{L-1}; slot k
  // covers shifted angles [kθ, (k+1)θ].
  const std::uint32_t sectors = frame.sectors();
  const std::uint32_t slots = 2 * sectors;
  const double shifted = normalize_angle(std::atan2(v.y, v.x) + 0.5 * frame.theta());
  const double position = shifted / frame.theta();
  auto slot = static_cast<std::uint32_t>(std::min<double>(std::floor(position), slots - 1));
  const auto label = [sectors](std::uint32_t s) {
    return s < sectors ? SectorLabel{SectorKind::Q, s} : SectorLabel{SectorKind::R, s - sectors};
  };
  if (position == static_cast<double>(slot)) {
    const SectorLabel upper = label(slot);
    const SectorLabel lower = label((slot + slots - 1) % slots);
    if (lower.index < upper.index) return lower;
    if (upper.index < lower.index) return upper;
    return upper.kind == SectorKind::Q ? upper : lower;
  }
  return label(slot);
}

std::pair<Point2D, Point2D> extreme_points(const SectorFrame& frame, std::uint32_t i) {
  if (i >= frame.sectors()) throw DomainError("extreme_points: sector index out of range");
  const double th = frame.theta();
  const double idx = static_cast<double>(i);
  return {from_polar(frame.center(), frame.delta(), (idx - 0.5) * th),
          from_polar(frame.center(), frame.delta(), (idx + 0.5) * th + kPi)};
}

double omitted_area_on_circle(const SectorFrame& frame, double phi2) {
  if (!(phi2 >= 0.0 && phi2 <= kPi)) throw DomainError("omitted_area_on_circle: phi2 must lie in [0, pi]");
  const Point2D o1 = from_polar(frame.center(), frame.delta(), kPi);
  const Point2D o2 = from_polar(frame.center(), frame.delta(), phi2);
  return omitted_area(frame.center(), o1, o2);
}

double circle_pair_lens_closed_form(double delta, double phi2) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("circle_pair_lens_closed_form: delta must lie in (0, 1]");
  if (!(phi2 >= 0.0 && phi2 <= kPi)) throw DomainError("circle_pair_lens_closed_form: phi2 must lie in [0, pi]");
  const double y = std::acos(delta * std::cos(phi2 / 2.0));
  return 2.0 * y - std::sin(2.0 * y);
}

}  // namespace udgcds::geometry
