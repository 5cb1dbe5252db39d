#include "udgcds/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "udgcds/parallel.hpp"
#include "udgcds/random.hpp"

namespace udgcds::coverage {

namespace {

void require_small_disk_inside(Point2D o, const SquareRegion& square, double delta) {
  if (!(o.x >= delta && o.y >= delta && o.x <= square.side() - delta && o.y <= square.side() - delta)) {
    throw DomainError("sample_colored: D_delta(o) must lie inside the square");
  }
}

ColoredSample draw(Point2D o, const SquareRegion& square, std::size_t w, std::size_t b, std::uint64_t seed,
                   std::optional<SectorFrame> frame) {
  const geometry::Rect box = geometry::truncated_disk_bounds(o, square);
  Rng rng(seed);
  const auto next_point = [&] {
    for (;;) {
      const Point2D p{rng.uniform(box.x0, box.x1), rng.uniform(box.y0, box.y1)};
      if (geometry::in_unit_disk(o, p)) return p;
    }
  };
  ColoredSample s{o, square, {}, {}, std::move(frame)};
  s.white.reserve(w);
  s.blue.reserve(b);
  for (std::size_t k = 0; k < w; ++k) s.white.push_back(next_point());
  for (std::size_t k = 0; k < b; ++k) s.blue.push_back(next_point());
  return s;
}

// Every sample point lies within distance 1 of g or h.
bool pair_covers(const ColoredSample& s, Point2D g, Point2D h) {
  const auto covered = [&](Point2D p) { return geometry::in_unit_disk(g, p) || geometry::in_unit_disk(h, p); };
  return std::all_of(s.white.begin(), s.white.end(), covered) &&
         std::all_of(s.blue.begin(), s.blue.end(), covered);
}

}  // namespace

ColoredSample sample_colored(Point2D o, const SquareRegion& square, std::size_t w, std::size_t b,
                             std::uint64_t seed, double l_exponent) {
  if (!geometry::is_finite(o) || !square.contains(o)) throw DomainError("sample_colored: o outside the square");
  if (b < 1) throw DomainError("sample_colored: b must be >= 1");
  std::optional<SectorFrame> frame;
  if (b >= 2) {
    frame = SectorFrame::for_blue_count(b, o, l_exponent);
    require_small_disk_inside(o, square, frame->delta());
  }
  return draw(o, square, w, b, seed, std::move(frame));
}

ColoredSample sample_colored(Point2D o, const SquareRegion& square, std::size_t w, std::size_t b,
                             std::uint64_t seed, const SectorFrame& frame) {
  if (!geometry::is_finite(o) || !square.contains(o)) throw DomainError("sample_colored: o outside the square");
  if (b < 1) throw DomainError("sample_colored: b must be >= 1");
  require_small_disk_inside(o, square, frame.delta());
  return draw(o, square, w, b, seed, frame.with_center(o));
}

double lambda_hat(Point2D o, const SquareRegion& square) {
  return std::numbers::pi / geometry::truncated_disk_area(o, square);
}

SectorStats sector_stats(const ColoredSample& sample) {
  SectorStats st;
  const std::size_t b = sample.blue.size();
  if (b >= 2) {
    const double log_b = std::log(static_cast<double>(b));
    st.beta = 2.0 * lambda_hat(sample.center, sample.square) * std::cbrt(static_cast<double>(b)) / (log_b * log_b);
  }
  if (!sample.frame) return st;
  const SectorFrame& frame = *sample.frame;
  st.counts_q.assign(frame.sectors(), 0);
  st.counts_r.assign(frame.sectors(), 0);
  const double delta2 = frame.delta() * frame.delta();
  for (Point2D p : sample.blue) {
    if (geometry::dist2(p, frame.center()) > delta2) continue;
    ++st.z;
    if (p == frame.center()) continue;  // the puncture belongs to no sector
    const geometry::SectorLabel label = geometry::sector_of(frame, p);
    if (label.kind == geometry::SectorKind::Q) ++st.counts_q[label.index];
    if (label.kind == geometry::SectorKind::R) ++st.counts_r[label.index];
  }
  for (std::uint32_t i = 0; i < frame.sectors(); ++i) {
    if (st.counts_q[i] == 1 && st.counts_r[i] == 1) st.t_set.push_back(i);
  }
  st.tau = static_cast<std::uint32_t>(st.t_set.size());
  st.y = st.t_set.empty() ? -1 : static_cast<std::int64_t>(st.t_set.front());
  return st;
}

std::optional<BluePair> blue_pair_dominates(const ColoredSample& sample) {
  if (!sample.frame || sample.blue.size() < 2) return std::nullopt;
  const double delta2 = sample.frame->delta() * sample.frame->delta();
  std::vector<std::size_t> near;
  for (std::size_t k = 0; k < sample.blue.size(); ++k) {
    if (geometry::dist2(sample.blue[k], sample.center) <= delta2) near.push_back(k);
  }
  for (std::size_t a = 0; a < near.size(); ++a) {
    for (std::size_t c = a + 1; c < near.size(); ++c) {
      const Point2D g = sample.blue[near[a]];
      const Point2D h = sample.blue[near[c]];
      if (geometry::dist2(g, h) <= 1.0 && pair_covers(sample, g, h)) return BluePair{near[a], near[c]};
    }
  }
  return std::nullopt;
}

int x_b_indicator(const ColoredSample& sample, const SectorStats& stats) {
  if (stats.tau == 0 || !sample.frame) return 0;
  const auto target = static_cast<std::uint32_t>(stats.y);
  const double delta2 = sample.frame->delta() * sample.frame->delta();
  std::optional<Point2D> in_q;
  std::optional<Point2D> in_r;
  for (Point2D p : sample.blue) {
    if (geometry::dist2(p, sample.center) > delta2 || p == sample.center) continue;
    const geometry::SectorLabel label = geometry::sector_of(*sample.frame, p);
    if (label.index != target) continue;
    if (label.kind == geometry::SectorKind::Q) in_q = p;
    if (label.kind == geometry::SectorKind::R) in_r = p;
  }
  if (!in_q || !in_r) return 0;
  return geometry::dist2(*in_q, *in_r) <= 1.0 && pair_covers(sample, *in_q, *in_r) ? 1 : 0;
}

int x_b_indicator(const ColoredSample& sample) { return x_b_indicator(sample, sector_stats(sample)); }

double expected_tau_formula(std::size_t b, double lambda_hat) {
  if (b < 2) return 0.0;
  const double log_b = std::log(static_cast<double>(b));
  return std::cbrt(static_cast<double>(b)) * lambda_hat * lambda_hat / (4.0 * std::pow(log_b, 6));
}

double expected_tau_exact(const SectorFrame& frame, std::size_t b, double truncated_area) {
  if (b < 2) return 0.0;
  const double bd = static_cast<double>(b);
  const double p = frame.sector_area() / truncated_area;
  return static_cast<double>(frame.sectors()) * bd * (bd - 1.0) * p * p * std::pow(1.0 - 2.0 * p, bd - 2.0);
}

double tau_tail_threshold(std::size_t b) {
  const double log_b = std::log(static_cast<double>(b));
  return std::cbrt(static_cast<double>(b)) / (16.0 * std::pow(log_b, 6));
}

CoverageRun run_local_coverage(const CoverageParams& params, unsigned threads,
                               const std::function<void(ColoredSample&)>& mutate) {
  const SquareRegion square(params.side);
  if (params.trials < 1) throw DomainError("local coverage: trials must be >= 1");
  // Validates o, b and the D_delta(o) placement before any trial runs.
  const ColoredSample probe = sample_colored(params.center, square, 0, params.b, params.seed, params.l_exponent);

  CoverageRun run;
  run.trials.resize(params.trials);
  parallel_for(params.trials, threads, [&](std::size_t t) {
    ColoredSample s = sample_colored(params.center, square, params.w, params.b, derive_seed(params.seed, t),
                                     params.l_exponent);
    if (mutate) mutate(s);
    const SectorStats st = sector_stats(s);
    CoverageTrial& row = run.trials[t];
    row.trial = t;
    row.tau = st.tau;
    row.z = st.z;
    row.y = st.y;
    row.x_b = x_b_indicator(s, st);
    row.pair_found = blue_pair_dominates(s).has_value();
  });

  std::size_t pairs = 0;
  std::size_t xbs = 0;
  double tau_sum = 0.0;
  double z_sum = 0.0;
  for (const CoverageTrial& row : run.trials) {
    pairs += row.pair_found ? 1 : 0;
    xbs += static_cast<std::size_t>(row.x_b);
    tau_sum += row.tau;
    z_sum += row.z;
  }
  CoverageSummary& sum = run.summary;
  const double n = static_cast<double>(params.trials);
  sum.pair_found = make_proportion(pairs, params.trials);
  sum.x_b = make_proportion(xbs, params.trials);
  const double area = geometry::truncated_disk_area(params.center, square);
  sum.lambda_hat = std::numbers::pi / area;
  sum.mean_tau = tau_sum / n;
  sum.mean_z = z_sum / n;
  if (probe.frame) {
    sum.expected_tau_formula = expected_tau_formula(params.b, sum.lambda_hat);
    sum.expected_tau_exact = expected_tau_exact(*probe.frame, params.b, area);
    const double delta = probe.frame->delta();
    sum.expected_z = static_cast<double>(params.b) * sum.lambda_hat * delta * delta;
  }
  return run;
}

ProportionEstimate local_coverage_probability(Point2D o, const SquareRegion& square, std::size_t w,
                                              std::size_t b, std::size_t trials, std::uint64_t seed,
                                              unsigned threads) {
  CoverageParams params{o, square.side(), w, b, trials, seed};
  return run_local_coverage(params, threads).summary.pair_found;
}

ZTailReport z_tail_check(Point2D o, const SquareRegion& square, std::size_t b, std::size_t trials,
                         std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw DomainError("z_tail_check: trials must be >= 1");
  if (b < 2) throw DomainError("z_tail_check: b must be >= 2");
  const SectorFrame frame = SectorFrame::for_blue_count(b, o);
  const double lam = lambda_hat(o, square);
  const double bd = static_cast<double>(b);
  const double log_b = std::log(bd);

  ZTailReport r;
  r.trials = trials;
  r.beta = 2.0 * lam * std::cbrt(bd) / (log_b * log_b);
  r.bound = std::exp(-std::cbrt(bd) / (4.0 * log_b * log_b));

  std::vector<std::uint32_t> z(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const ColoredSample s = sample_colored(o, square, 0, b, derive_seed(seed, t));
    z[t] = sector_stats(s).z;
  });
  std::size_t tail = 0;
  double z_sum = 0.0;
  for (std::uint32_t v : z) {
    tail += static_cast<double>(v) >= r.beta ? 1 : 0;
    z_sum += v;
  }
  const double n = static_cast<double>(trials);
  r.empirical = static_cast<double>(tail) / n;
  r.std_error = binomial_std_error(r.empirical, trials);
  r.within_bound = r.empirical <= r.bound + 3.0 * r.std_error;
  const double p = lam * frame.delta() * frame.delta();
  r.mean_z = z_sum / n;
  r.expected_z = bd * p;
  r.mean_z_std_error = std::sqrt(bd * p * (1.0 - p) / n);
  return r;
}

}  // namespace udgcds::coverage
