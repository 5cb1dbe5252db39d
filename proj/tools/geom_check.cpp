#include <algorithm>
#include <cmath>
#include <numbers>

#include "cli.hpp"
#include "udgcds/geometry.hpp"
#include "udgcds/random.hpp"

namespace udgcds::cli {

namespace {

namespace geo = udgcds::geometry;
using geo::Point2D;

constexpr double kExactTol = 1e-9;
constexpr double kZBound = 4.0;  // max |z| over a batch of MC comparisons

Point2D in_disk(Rng& rng, Point2D c, double radius) {
  for (;;) {
    const Point2D p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (geo::dot(p, p) <= 1.0) return c + radius * p;
  }
}

double z_score(double exact, const geo::AreaEstimate& mc) {
  const double diff = std::abs(exact - mc.value);
  if (mc.std_error == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / mc.std_error;
}

geo::Rect box_around(Point2D c) { return {c.x - 1.0, c.y - 1.0, c.x + 1.0, c.y + 1.0}; }

struct Collector {
  std::vector<GeomCheckRow> rows;
  void max_at_most(std::string name, double statistic, double bound) {
    rows.push_back({std::move(name), statistic, bound, statistic <= bound});
  }
};

}  // namespace

std::vector<GeomCheckRow> geom_check(std::uint64_t seed, std::size_t configs, std::uint64_t samples) {
  Rng rng(derive_seed(seed, 0));
  std::uint64_t stream = 1;
  const auto next_seed = [&] { return derive_seed(seed, stream++); };
  Collector out;

  double z_lens = 0.0;
  double z_triple = 0.0;
  double z_omit = 0.0;
  double z_trunc = 0.0;
  for (std::size_t k = 0; k < configs; ++k) {
    const Point2D o{0.0, 0.0};
    const double d = rng.uniform(0.0, 2.0);
    const Point2D p{d, 0.0};
    z_lens = std::max(z_lens, z_score(geo::lens_area(d), geo::mc_area_oracle(
                                                             [&](Point2D x) {
                                                               return geo::in_unit_disk(o, x) &&
                                                                      geo::in_unit_disk(p, x);
                                                             },
                                                             box_around(o), samples, next_seed())));

    const Point2D q = in_disk(rng, o, 1.0);
    const Point2D u = in_disk(rng, o, 1.0);
    const auto in_triple = [&](Point2D x) {
      return geo::in_unit_disk(o, x) && geo::in_unit_disk(q, x) && geo::in_unit_disk(u, x);
    };
    z_triple = std::max(z_triple, z_score(geo::triple_disk_intersection_area(o, q, u),
                                          geo::mc_area_oracle(in_triple, box_around(o), samples, next_seed())));
    const auto in_omitted = [&](Point2D x) {
      return geo::in_unit_disk(o, x) && !geo::in_unit_disk(q, x) && !geo::in_unit_disk(u, x);
    };
    z_omit = std::max(z_omit, z_score(geo::omitted_area(o, q, u),
                                      geo::mc_area_oracle(in_omitted, box_around(o), samples, next_seed())));

    const geo::SquareRegion square(rng.uniform(1.0, 4.0));
    const Point2D c{rng.uniform(0.0, square.side()), rng.uniform(0.0, square.side())};
    const auto in_trunc = [&](Point2D x) { return geo::in_unit_disk(c, x) && square.contains(x); };
    z_trunc = std::max(z_trunc, z_score(geo::truncated_disk_area(c, square),
                                        geo::mc_area_oracle(in_trunc, box_around(c), samples, next_seed())));
  }
  out.max_at_most("lens_area_vs_mc_max_z", z_lens, kZBound);
  out.max_at_most("triple_intersection_vs_mc_max_z", z_triple, kZBound);
  out.max_at_most("omitted_area_vs_mc_max_z", z_omit, kZBound);
  out.max_at_most("truncated_disk_area_vs_mc_max_z", z_trunc, kZBound);

  double closed_form_err = 0.0;
  double coincident_err = 0.0;
  for (std::size_t k = 0; k < configs; ++k) {
    const double delta = rng.uniform(1e-3, 0.2);
    closed_form_err = std::max(closed_form_err,
                               std::abs(geo::circle_pair_lens_closed_form(delta, 0.0) - geo::lens_area(2.0 * delta)));
    coincident_err =
        std::max(coincident_err, std::abs(geo::circle_pair_lens_closed_form(delta, std::numbers::pi) - std::numbers::pi));
  }
  out.max_at_most("opposite_pair_lens_identity_abs_err", closed_form_err, 1e-12);
  out.max_at_most("coincident_pair_lens_abs_err", coincident_err, 1e-12);

  // Moving q and u toward o never enlarges the omitted region.
  double radial = 0.0;
  double symmetry = 0.0;
  for (std::size_t k = 0; k < 10 * configs; ++k) {
    const Point2D o{0.0, 0.0};
    const Point2D q2 = in_disk(rng, o, 1.0);
    const Point2D u2 = in_disk(rng, o, 1.0);
    const Point2D q1 = rng.uniform() * q2;
    const Point2D u1 = rng.uniform() * u2;
    radial = std::max(radial, geo::omitted_area(o, q1, u1) - geo::omitted_area(o, q2, u2));
    symmetry = std::max(symmetry, std::abs(geo::omitted_area(o, q2, u2) - geo::omitted_area(o, u2, q2)));
  }
  out.max_at_most("radial_monotonicity_max_increase", radial, kExactTol);
  out.max_at_most("omitted_area_symmetry_abs_err", symmetry, 0.0);

  double angular = 0.0;
  for (std::size_t k = 0; k < configs; ++k) {
    const auto frame = geo::SectorFrame::custom({}, rng.uniform(1e-3, 0.2), 1);
    double prev = geo::omitted_area_on_circle(frame, 0.0);
    for (int s = 1; s <= 64; ++s) {
      const double cur = geo::omitted_area_on_circle(frame, std::numbers::pi * s / 64.0);
      angular = std::max(angular, prev - cur);
      prev = cur;
    }
  }
  out.max_at_most("angular_monotonicity_max_decrease", angular, kExactTol);

  double extremal = 0.0;
  for (std::size_t k = 0; k < 10 * configs; ++k) {
    const std::uint64_t b = 1000 + rng.next() % 100000;
    const auto frame = geo::SectorFrame::for_blue_count(b);
    const auto i = static_cast<std::uint32_t>(rng.next() % frame.sectors());
    const double th = frame.theta();
    const auto in_sector = [&](double base) {
      const double r = frame.delta() * std::sqrt(rng.uniform());
      return geo::from_polar({}, r, base + (static_cast<double>(i) + rng.uniform(-0.5, 0.5)) * th);
    };
    const Point2D q = in_sector(0.0);
    const Point2D u = in_sector(std::numbers::pi);
    const auto [qt, ut] = geo::extreme_points(frame, i);
    extremal = std::max(extremal, geo::omitted_area({}, q, u) - geo::omitted_area({}, qt, ut));
  }
  out.max_at_most("extreme_points_max_excess", extremal, kExactTol);

  double truncation = -std::numeric_limits<double>::infinity();
  const std::uint64_t trunc_samples = std::max<std::uint64_t>(samples / 4, 1);
  for (std::size_t k = 0; k < configs; ++k) {
    const geo::SquareRegion square(5.0);
    const Point2D o{rng.uniform(0.0, 1.0), rng.uniform(0.0, 5.0)};
    const Point2D q = in_disk(rng, o, 0.5);
    const Point2D u = in_disk(rng, o, 0.5);
    const geo::AreaEstimate est = geo::truncated_omitted_area(o, q, u, square, trunc_samples, next_seed());
    const double excess = est.value - geo::omitted_area(o, q, u);
    truncation = std::max(truncation, est.std_error > 0.0 ? excess / est.std_error : (excess > 0.0 ? 1e300 : 0.0));
  }
  out.max_at_most("truncated_omitted_excess_max_z", truncation, 3.0);

  double chord = 0.0;
  for (std::size_t k = 0; k < configs; ++k) {
    const Point2D p = in_disk(rng, {}, 1.0);
    const double d = rng.uniform(1e-3, 2.0 - 1e-3);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Point2D q = geo::from_polar(p, d, phi);
    const auto hits = geo::unit_circle_intersections(p, q);
    if (!hits) {
      chord = std::numeric_limits<double>::infinity();
      continue;
    }
    const Point2D mid_ab = 0.5 * (hits->first + hits->second);
    const Point2D mid_pq = 0.5 * (p + q);
    chord = std::max({chord, geo::dist(mid_ab, mid_pq), std::abs(geo::dot(hits->first - hits->second, p - q))});
  }
  out.max_at_most("chord_midpoint_orthogonality_err", chord, 1e-12);

  return std::move(out.rows);
}

}  // namespace udgcds::cli
