#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "udgcds/geometry.hpp"
#include "udgcds/harness.hpp"

using namespace udgcds::harness;
using udgcds::ConfigError;
using udgcds::DomainError;
using udgcds::geometry::SquareRegion;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("default_alpha profiles") {
  const double n = 1e4;
  const double lnln = std::log(std::log(n));
  const AlphaChoice sq = default_alpha(10'000, udgcds::rgg::ell_sqrt(10'000), AlphaProfile::SqrtRegime);
  CHECK(sq.alpha == doctest::Approx(32 * n / std::pow(lnln, 1.5)).epsilon(1e-14));
  CHECK_FALSE(sq.sublinear);  // 32n/(ln ln n)^{3/2} is far above n at this scale
  const AlphaChoice pw = default_alpha(10'000, udgcds::rgg::ell_power(10'000, 0.4), AlphaProfile::PowerRegime);
  CHECK(pw.alpha == doctest::Approx(n / std::log(n)).epsilon(1e-14));
  CHECK(pw.sublinear);
  CHECK(pw.xi == doctest::Approx(pw.alpha / std::pow(udgcds::rgg::ell_power(10'000, 0.4), 2)));
  // the third condition is reported either way
  CHECK(pw.third_lhs == doctest::Approx(16 * n / std::pow(std::log(pw.xi), 1.5)));
  CHECK(pw.third_holds == (pw.third_lhs < pw.alpha));
  CHECK_THROWS_AS(default_alpha(15, 2.0, AlphaProfile::SqrtRegime), DomainError);
  CHECK_NOTHROW(default_alpha(16, 2.0, AlphaProfile::SqrtRegime));
  CHECK(parse_alpha_profile("sqrt-regime") == AlphaProfile::SqrtRegime);
  CHECK(parse_alpha_profile(to_string(AlphaProfile::PowerRegime)) == AlphaProfile::PowerRegime);
  CHECK_THROWS_AS(parse_alpha_profile("linear"), ConfigError);
}

TEST_CASE("Schedule derived quantities and warnings") {
  const Schedule s = Schedule::make(10'000, 20.0, 1000.0);
  CHECK(s.xi == doctest::Approx(2.5));
  CHECK(s.lambda == doctest::Approx(9000.0));
  CHECK(s.r == doctest::Approx(1.0 / std::pow(std::log(2.5), 1.5)));
  CHECK(s.window_begin() == 1000);
  CHECK(s.window_end() == 9000);
  CHECK(s.warnings.empty());
  CHECK_THROWS_AS(Schedule::make(10'000, 40.0, 1000.0), DomainError);  // ξ < 1
  const Schedule small_ell = Schedule::make(10'000, 5.0, 1000.0);
  CHECK(small_ell.warnings.size() == 1);
  const Schedule big_alpha = Schedule::make(100, 5.0, 500.0);
  CHECK_FALSE(big_alpha.warnings.empty());
  CHECK(big_alpha.window_begin() >= big_alpha.window_end());
}

TEST_CASE("vertex_stats") {
  const std::size_t n = 5000;
  const double ell = udgcds::rgg::ell_sqrt(n);
  const auto g = udgcds::rgg::random_udg(n, SquareRegion(ell), 8);
  const Schedule sched = Schedule::make(n, ell, AlphaProfile::SqrtRegime);

  const VertexStats top = vertex_stats(g, VertexId{static_cast<std::uint32_t>(n)}, sched);
  CHECK(top.rho_b == 0);
  CHECK(top.mu_b == 0.0);
  CHECK_FALSE(top.in_d);

  for (std::uint32_t i = 1; i <= n; i += 37) {
    const VertexStats st = vertex_stats(g, VertexId{i}, sched);
    CHECK(st.rho_b + st.rho_w + 1 == g.closed_neighborhood(VertexId{i}).members.size());
    const double area = udgcds::geometry::truncated_disk_area(g.point(VertexId{i}), g.square());
    CHECK(st.mu_b + st.mu_w == doctest::Approx((n - 1) * area / (ell * ell)).epsilon(1e-12));
    const auto p = g.point(VertexId{i});
    const bool interior = p.x >= 1 && p.y >= 1 && p.x <= ell - 1 && p.y <= ell - 1;
    if (i == n / 2 + 1 && interior) CHECK(st.mu_b == doctest::Approx((n / 2.0 - 1) * kPi / (ell * ell)));
    const bool a = p.x >= sched.r && p.y >= sched.r && p.x <= ell - sched.r && p.y <= ell - sched.r;
    CHECK(st.in_a == a);
  }
  // a vertex placed in the middle of the square
  std::vector<udgcds::geometry::Point2D> pts(g.points().begin(), g.points().end());
  pts[n / 2 - 1] = {ell / 2, ell / 2};
  const auto h = udgcds::rgg::UnitDiskGraph::build(pts, g.square());
  const VertexStats mid = vertex_stats(h, VertexId{static_cast<std::uint32_t>(n / 2)}, sched);
  CHECK(mid.mu_b == doctest::Approx((n / 2.0) * kPi / (ell * ell)).epsilon(1e-14));
  CHECK(mid.in_a);

  CHECK_THROWS_AS(vertex_stats(g, VertexId{0}, sched), DomainError);
  CHECK_THROWS_AS(vertex_stats(g, VertexId{static_cast<std::uint32_t>(n + 1)}, sched), DomainError);
  CHECK_THROWS_AS(vertex_stats(g, VertexId{1}, Schedule::make(n, ell + 1, AlphaProfile::SqrtRegime)), DomainError);
}

TEST_CASE("event frequencies at n = 5000") {
  const std::size_t n = 5000;
  const double ell = udgcds::rgg::ell_sqrt(n);
  const auto g = udgcds::rgg::random_udg(n, SquareRegion(ell), 50);
  const Schedule sched = Schedule::make(n, ell, AlphaProfile::SqrtRegime);
  const EventFrequencies ev = event_frequencies(g, sched);
  CHECK(ev.vertices == n);
  CHECK(ev.p_a_exact == doctest::Approx(std::pow(ell - 2 * sched.r, 2) / (ell * ell)));
  CHECK(ev.p_a_within_3se);
  CHECK(ev.p_a_empirical >= ev.p_a_exact - 0.02);
  // 16ℓ² exceeds n here, so the D | A bound is nowhere positive
  CHECK(ev.d_given_a_vacuous);
  CHECK(ev.d_given_a_ok);
}

TEST_CASE("D given A respects its bound on a power schedule") {
  const std::size_t n = 5000;
  const double ell = udgcds::rgg::ell_power(n, 0.3);
  const auto g = udgcds::rgg::random_udg(n, SquareRegion(ell), 51);
  const Schedule sched = Schedule::make(n, ell, AlphaProfile::PowerRegime);
  CHECK(d_given_a_bound(sched, 1) == -INFINITY);
  CHECK(d_given_a_bound(sched, n) == -INFINITY);
  CHECK(d_given_a_bound(sched, n / 2) > 0.0);
  const EventFrequencies ev = event_frequencies(g, sched);
  CHECK_FALSE(ev.d_given_a_vacuous);
  CHECK(ev.bound_positive_vertices > 0);
  CHECK(ev.d_given_a_empirical >= ev.d_given_a_mean_bound - 0.05);
  CHECK(ev.d_given_a_ok);
  CHECK(ev.p_a_within_3se);
}

TEST_CASE("run_trial") {
  const TrialResult one = run_trial(1, 3.0, 4);
  CHECK(one.pruned == 0);
  CHECK(one.cds_size == 1);
  CHECK(one.dominating);
  const TrialResult a = run_trial(500, 20.0, 7, 1);
  const TrialResult b = run_trial(500, 20.0, 7, 0);
  CHECK(a == b);
  CHECK(a.millis == 0.0);
  CHECK(a.pruned + a.cds_size == 500);
  CHECK(a.dominating);
  CHECK(a.component_preserving);
  CHECK(a.components_g == a.components_c);
  CHECK(run_trial(500, 20.0, 7, 1, true).millis >= 0.0);
}

TEST_CASE("pruned fraction at n = 10^4 averages at least one half") {
  const std::size_t n = 10'000;
  const double ell = udgcds::rgg::ell_sqrt(n);
  double sum = 0;
  for (int s = 0; s < 20; ++s) {
    const TrialResult t = run_trial(n, ell, udgcds::derive_seed(10'000, s));
    CHECK(t.pruned + t.cds_size == n);
    CHECK(t.dominating);
    CHECK(t.component_preserving);
    sum += static_cast<double>(t.pruned) / n;
  }
  MESSAGE("mean U/n = " << sum / 20);
  CHECK(sum / 20 >= 0.5);
}

TEST_CASE("conditional_prune_rate") {
  const std::size_t n = 10'000;
  {
    const double ell = udgcds::rgg::ell_sqrt(n);
    const auto g = udgcds::rgg::random_udg(n, SquareRegion(ell), 1);
    // 32n/(ln ln n)^{3/2} > n, so the window is empty
    CHECK_THROWS_AS(conditional_prune_rate(g, Schedule::make(n, ell, AlphaProfile::SqrtRegime)), DomainError);
  }
  const double ell = udgcds::rgg::ell_power(n, 0.4);
  const auto g = udgcds::rgg::random_udg(n, SquareRegion(ell), 2);
  const Schedule sched = Schedule::make(n, ell, AlphaProfile::PowerRegime);
  const ConditionalPruneReport r = conditional_prune_rate(g, sched);
  CHECK(r.window_vertices == sched.window_end() - sched.window_begin());
  CHECK(r.conditioned_vertices >= 1000);
  CHECK(r.conditional.trials == r.conditioned_vertices);
  CHECK(r.conditional.estimate >= r.unconditional.estimate - 0.05);
  CHECK(r.conditional.ci95.low <= r.conditional.estimate);
  CHECK(r.conditional.ci95.high >= r.conditional.estimate);
  CHECK(r.overall.trials == n);
}

TEST_CASE("sweep config parsing") {
  const SweepConfig cfg = parse_sweep_config(R"({"schedules":[
      {"n": 300, "ell_rule": {"kind": "sqrt", "c": 1.5}, "trials": 2, "seed": 9},
      {"n": 400, "ell_rule": {"kind": "power", "t": 0.4}, "alpha_profile": "power-regime"}]})");
  REQUIRE(cfg.schedules.size() == 2);
  CHECK(cfg.schedules[0].ell_rule.param == 1.5);
  CHECK(cfg.schedules[0].alpha_profile == AlphaProfile::SqrtRegime);
  CHECK(cfg.schedules[1].ell_rule.kind == EllRule::Kind::Power);
  CHECK(cfg.schedules[1].trials == 1);

  CHECK(parse_sweep_config(R"({"schedules": []})").schedules.empty());
  CHECK_THROWS_AS(parse_sweep_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"schedules": [{"n": 300}]})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"schedules": [{"n": -3, "ell_rule": {"kind": "sqrt"}}]})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"schedules": [{"n": 300, "ell_rule": {"kind": "cube"}}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"schedules": [{"n": 10, "ell_rule": {"kind": "sqrt"}}]})"), ConfigError);
  try {
    parse_sweep_config("{\n  \"schedules\": [\n    {\"n\": 300,, }\n  ]\n}");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    parse_sweep_config(R"({"schedules": [{"n": 300, "ell_rule": {"kind": "power"}}]})");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("config.schedules[0].ell_rule") != std::string::npos);
  }
}

TEST_CASE("sweep output") {
  const SweepConfig none = parse_sweep_config(R"({"schedules": [{"n": 300, "ell_rule": {"kind": "sqrt"}, "trials": 0}]})");
  const SweepResult empty = sweep(none);
  CHECK(count_lines(sweep_csv(empty)) == 1);
  CHECK(sweep_csv(empty).rfind("schema_ver,n,side,seed,trial,cds_size,U,frac_pruned,comp_g,comp_c,dominating,"
                               "cds_over_ell2,ge_ell2_over_4,millis\n",
                               0) == 0);

  const SweepConfig cfg = parse_sweep_config(R"({"schedules":[
      {"n": 800, "ell_rule": {"kind": "sqrt"}, "trials": 3, "seed": 5},
      {"n": 300, "ell_rule": {"kind": "sqrt"}, "trials": 2, "seed": 5}]})");
  const SweepResult a = sweep(cfg, 1);
  const SweepResult b = sweep(cfg, 0);
  CHECK(sweep_csv(a) == sweep_csv(b));
  CHECK(aggregate_csv(a) == aggregate_csv(b));
  REQUIRE(a.rows.size() == 5);
  CHECK(a.rows.front().result.n == 300);  // sorted by n
  CHECK(a.rows[0].result.seed == udgcds::derive_seed(5, 0));
  for (const SweepRow& r : a.rows) {
    CHECK(r.result.pruned + r.result.cds_size == r.result.n);
    CHECK(r.result.dominating);
    CHECK(r.result.millis == 0.0);
  }
  REQUIRE(a.aggregates.size() == 2);
  CHECK(a.aggregates[0].trials == 2);
  CHECK(a.aggregates[1].trials == 3);
  CHECK(count_lines(aggregate_csv(a)) == 3);
  CHECK(sweep_csv(a).rfind("1,300,", 0) == std::string::npos);  // header comes first
  CHECK(sweep_csv(a).find("\n1,300,") != std::string::npos);
}
