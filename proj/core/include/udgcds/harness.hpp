#pragma once

// Full-graph experiments: Rule 2 runs over (n, ℓ_n) schedules, the per-vertex
// quantities behind the pruning-fraction analysis (ρ, μ, the boundary event A_i
// and the concentration event D_i), and seeded sweeps emitting CSV.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udgcds/rgg.hpp"
#include "udgcds/rule2.hpp"
#include "udgcds/stats.hpp"

namespace udgcds::harness {

using rgg::UnitDiskGraph;
using rgg::VertexId;

inline constexpr int kCsvSchemaVersion = 1;

enum class AlphaProfile {
  SqrtRegime,   // α_n = 32 n / (ln ln n)^{3/2}, for ℓ = Θ(sqrt(n / ln n))
  PowerRegime,  // α_n = n / ln n, for ℓ = Θ((n / ln n)^t), t < 1/2
};

std::string to_string(AlphaProfile p);
AlphaProfile parse_alpha_profile(std::string_view text);

// α_n for a profile together with the three conditions it is meant to
// satisfy, evaluated at this finite n: α < n (standing in for α = o(n)),
// ξ = α/ℓ² > 1 (standing in for ξ → ∞), and 16 n / (ln ξ)^{3/2} < α.
struct AlphaChoice {
  double alpha = 0.0;
  double xi = 0.0;
  bool sublinear = false;
  bool xi_above_one = false;
  double third_lhs = 0.0;  // 16 n / (ln ξ)^{3/2}; +inf when ξ <= 1
  bool third_holds = false;
};

AlphaChoice default_alpha(std::size_t n, double ell, AlphaProfile profile);

struct Schedule {
  std::size_t n = 0;
  double ell = 0.0;
  double alpha = 0.0;
  double xi = 0.0;      // α / ℓ²
  double lambda = 0.0;  // n - α
  double r = 0.0;       // 1 / (ln ξ)^{3/2}
  std::vector<std::string> warnings;

  // Requires ξ > 1. ℓ < ln n and α >= n are reported in `warnings`, not rejected.
  static Schedule make(std::size_t n, double ell, double alpha);
  static Schedule make(std::size_t n, double ell, AlphaProfile profile);

  // IDs i with α <= i < λ.
  std::size_t window_begin() const;  // first ID, 1-based
  std::size_t window_end() const;    // one past the last ID
};

struct VertexStats {
  VertexId i;
  std::uint32_t rho_b = 0;  // neighbours with larger ID
  std::uint32_t rho_w = 0;  // neighbours with smaller ID
  double mu_b = 0.0;        // (n - i) |D̂_1(V_i)| / ℓ²
  double mu_w = 0.0;        // (i - 1) |D̂_1(V_i)| / ℓ²
  bool in_a = false;        // D_r(V_i) inside the square
  bool in_d = false;        // |ρ_b - μ_b| < μ_b/2 and |ρ_w - μ_w| < μ_w/2 (strict)
};

// The schedule's ℓ must equal the graph's square side.
VertexStats vertex_stats(const UnitDiskGraph& g, VertexId i, const Schedule& schedule);

// 1 - 16ℓ²/(n-i) - 16ℓ²/(i-1); -inf for i = 1 or i = n.
double d_given_a_bound(const Schedule& schedule, std::size_t i);

struct EventFrequencies {
  std::size_t vertices = 0;
  double p_a_empirical = 0.0;
  double p_a_exact = 0.0;  // (ℓ - 2r)² / ℓ²
  double p_a_std_error = 0.0;
  bool p_a_within_3se = false;

  std::size_t bound_positive_vertices = 0;  // with A, among IDs where the bound is > 0
  double d_given_a_empirical = 0.0;
  double d_given_a_mean_bound = 0.0;
  bool d_given_a_vacuous = true;  // bound is nowhere positive
  bool d_given_a_ok = true;       // empirical >= mean bound - 0.05
};

EventFrequencies event_frequencies(const UnitDiskGraph& g, const Schedule& schedule);

struct ConditionalPruneReport {
  std::size_t window_vertices = 0;
  std::size_t conditioned_vertices = 0;  // in window with A and D
  ProportionEstimate conditional;        // pruned | A ∩ D, in window
  ProportionEstimate unconditional;      // pruned, in window
  ProportionEstimate overall;            // pruned, all vertices
};

// Throws DomainError when the window α <= i < λ is empty.
ConditionalPruneReport conditional_prune_rate(const UnitDiskGraph& g, const Schedule& schedule,
                                              unsigned threads = 0);

struct TrialResult {
  std::size_t n = 0;
  double side = 0.0;
  std::uint64_t seed = 0;
  std::size_t cds_size = 0;
  std::size_t pruned = 0;  // U
  std::size_t components_g = 0;
  std::size_t components_c = 0;
  bool dominating = false;
  bool component_preserving = false;
  double millis = 0.0;  // wall clock, only when timing was requested

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

TrialResult run_trial(std::size_t n, double side, std::uint64_t seed, unsigned threads = 0, bool timing = false);
TrialResult run_trial(const UnitDiskGraph& g, unsigned threads = 0, bool timing = false);

struct EllRule {
  enum class Kind { Sqrt, Power };
  Kind kind = Kind::Sqrt;
  double param = 1.0;  // c for Sqrt, t for Power

  double ell(std::size_t n) const;
};

struct ScheduleSpec {
  std::size_t n = 0;
  EllRule ell_rule;
  AlphaProfile alpha_profile = AlphaProfile::SqrtRegime;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
};

struct SweepConfig {
  std::vector<ScheduleSpec> schedules;
};

// {"schedules": [{"n": 2000, "ell_rule": {"kind": "sqrt", "c": 1.0},
//                 "alpha_profile": "sqrt-regime", "trials": 10, "seed": 1}, ...]}
// "ell_rule" may instead be {"kind": "power", "t": 0.4}. alpha_profile
// defaults to the regime matching the ℓ rule. Errors carry the JSON line or path.
SweepConfig parse_sweep_config(std::string_view json_text);

struct SweepRow {
  std::size_t trial = 0;
  double ell = 0.0;
  TrialResult result;
};

struct SweepAggregate {
  std::size_t n = 0;
  double side = 0.0;
  std::size_t trials = 0;
  double mean_cds = 0.0;
  double sd_cds = 0.0;
  double mean_pruned = 0.0;
  double mean_frac_pruned = 0.0;
  double mean_cds_over_ell2 = 0.0;
  double frac_ge_ell2_over_4 = 0.0;
  bool all_valid = true;
  AlphaChoice alpha;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (n, schedule seed, trial)
  std::vector<SweepAggregate> aggregates;
};

// Trial t of a schedule runs on the graph seeded derive_seed(schedule seed, t);
// that derived seed is what the CSV seed column records.
SweepResult sweep(const SweepConfig& config, unsigned threads = 0, bool timing = false);

std::string sweep_csv(const SweepResult& result);
std::string aggregate_csv(const SweepResult& result);

}  // namespace udgcds::harness
