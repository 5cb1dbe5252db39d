#pragma once

// Local two-disk coverage experiment. w white and b blue points are drawn
// uniformly from the truncated disk D̂_1(o) = D_1(o) ∩ square; the question is
// whether two adjacent blue points inside D_delta(o) dominate the whole sample.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "udgcds/geometry.hpp"
#include "udgcds/stats.hpp"

namespace udgcds::coverage {

using geometry::Point2D;
using geometry::SectorFrame;
using geometry::SquareRegion;

struct ColoredSample {
  Point2D center;
  SquareRegion square;
  std::vector<Point2D> white;
  std::vector<Point2D> blue;
  // Absent for b < 2; delta = 1/(b^{1/3} ln b) is undefined there.
  std::optional<SectorFrame> frame;
};

// The draw order is all white points, then all blue points, from one stream;
// so the first b blue points for a given (w, seed) are the same for every
// larger b. For b >= 2, D_delta(o) must lie inside the square.
ColoredSample sample_colored(Point2D o, const SquareRegion& square, std::size_t w, std::size_t b,
                             std::uint64_t seed, double l_exponent = 1.5);
// Same, with an explicit frame (its center is moved to o).
ColoredSample sample_colored(Point2D o, const SquareRegion& square, std::size_t w, std::size_t b,
                             std::uint64_t seed, const SectorFrame& frame);

// π / |D̂_1(o)|
double lambda_hat(Point2D o, const SquareRegion& square);

struct SectorStats {
  std::vector<std::uint32_t> counts_q;  // N(Q_i)
  std::vector<std::uint32_t> counts_r;  // N(R_i)
  std::uint32_t tau = 0;                // #{i : N(Q_i) = N(R_i) = 1}
  std::vector<std::uint32_t> t_set;     // those i, ascending
  std::int64_t y = -1;                  // min t_set, or -1
  std::uint32_t z = 0;                  // blue points in D_delta(o)
  double beta = 0.0;                    // 2 λ̂ b^{1/3} / (ln b)^2; 0 without a b-derived frame
};

SectorStats sector_stats(const ColoredSample& sample);

struct BluePair {
  std::size_t first = 0;  // indices into sample.blue
  std::size_t second = 0;
};

// Two blue points in D_delta(o), within distance 1 of each other, that
// together cover every point of the sample.
std::optional<BluePair> blue_pair_dominates(const ColoredSample& sample);

// 1 iff τ_b > 0 and the single blue points of Q_Y and R_Y are adjacent and
// cover the sample.
int x_b_indicator(const ColoredSample& sample, const SectorStats& stats);
int x_b_indicator(const ColoredSample& sample);

struct CoverageParams {
  Point2D center;
  double side = 0.0;
  std::size_t w = 0;
  std::size_t b = 0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double l_exponent = 1.5;
};

struct CoverageTrial {
  std::size_t trial = 0;
  std::uint32_t tau = 0;
  std::uint32_t z = 0;
  std::int64_t y = -1;
  int x_b = 0;
  bool pair_found = false;
};

struct CoverageSummary {
  ProportionEstimate pair_found;
  ProportionEstimate x_b;
  double lambda_hat = 0.0;
  double mean_tau = 0.0;
  double expected_tau_formula = 0.0;  // 0 when b < 2
  double expected_tau_exact = 0.0;
  double mean_z = 0.0;
  double expected_z = 0.0;
};

struct CoverageRun {
  std::vector<CoverageTrial> trials;
  CoverageSummary summary;
};

// Trial t uses seed derive_seed(seed, t). `mutate`, when set, edits each
// sample before it is scored.
CoverageRun run_local_coverage(const CoverageParams& params, unsigned threads = 0,
                               const std::function<void(ColoredSample&)>& mutate = {});

ProportionEstimate local_coverage_probability(Point2D o, const SquareRegion& square, std::size_t w,
                                              std::size_t b, std::size_t trials, std::uint64_t seed,
                                              unsigned threads = 0);

// b^{1/3} λ̂² / (4 ln⁶ b)
double expected_tau_formula(std::size_t b, double lambda_hat);
// L · b(b-1) p² (1-2p)^{b-2} with p = |Q_i| / |D̂_1(o)|.
double expected_tau_exact(const SectorFrame& frame, std::size_t b, double truncated_area);
// b^{1/3} / (16 ln⁶ b)
double tau_tail_threshold(std::size_t b);

struct ZTailReport {
  std::size_t trials = 0;
  double beta = 0.0;
  double bound = 0.0;      // exp(-b^{1/3} / (4 (ln b)^2))
  double empirical = 0.0;  // fraction of trials with Z >= beta
  double std_error = 0.0;
  bool within_bound = false;  // empirical <= bound + 3 std_error
  double mean_z = 0.0;
  double expected_z = 0.0;     // b λ̂ δ²
  double mean_z_std_error = 0.0;
};

ZTailReport z_tail_check(Point2D o, const SquareRegion& square, std::size_t b, std::size_t trials,
                         std::uint64_t seed, unsigned threads = 0);

}  // namespace udgcds::coverage
