#include "udgcds/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "udgcds/geometry.hpp"
#include "udgcds/parallel.hpp"
#include "udgcds/random.hpp"

namespace udgcds::harness {

using nlohmann::json;

std::string to_string(AlphaProfile p) {
  return p == AlphaProfile::SqrtRegime ? "sqrt-regime" : "power-regime";
}

AlphaProfile parse_alpha_profile(std::string_view text) {
  if (text == "sqrt-regime" || text == "sqrt") return AlphaProfile::SqrtRegime;
  if (text == "power-regime" || text == "power") return AlphaProfile::PowerRegime;
  throw ConfigError("unknown alpha profile '" + std::string(text) + "' (expected sqrt-regime or power-regime)");
}

AlphaChoice default_alpha(std::size_t n, double ell, AlphaProfile profile) {
  if (!(ell > 0.0) || !std::isfinite(ell)) throw DomainError("default_alpha: ell must be > 0");
  const double nd = static_cast<double>(n);
  AlphaChoice c;
  if (profile == AlphaProfile::SqrtRegime) {
    if (!(nd > std::exp(std::numbers::e))) {
      throw DomainError("default_alpha: sqrt-regime needs n > e^e (ln ln n <= 1 otherwise)");
    }
    c.alpha = 32.0 * nd / std::pow(std::log(std::log(nd)), 1.5);
  } else {
    if (n < 2) throw DomainError("default_alpha: power-regime needs n >= 2");
    c.alpha = nd / std::log(nd);
  }
  c.xi = c.alpha / (ell * ell);
  c.sublinear = c.alpha < nd;
  c.xi_above_one = c.xi > 1.0;
  c.third_lhs = c.xi_above_one ? 16.0 * nd / std::pow(std::log(c.xi), 1.5)
                               : std::numeric_limits<double>::infinity();
  c.third_holds = c.third_lhs < c.alpha;
  return c;
}

Schedule Schedule::make(std::size_t n, double ell, double alpha) {
  if (n < 1) throw DomainError("schedule: n must be >= 1");
  if (!(ell > 0.0) || !std::isfinite(ell)) throw DomainError("schedule: ell must be > 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("schedule: alpha must be > 0");
  Schedule s;
  s.n = n;
  s.ell = ell;
  s.alpha = alpha;
  s.xi = alpha / (ell * ell);
  s.lambda = static_cast<double>(n) - alpha;
  if (!(s.xi > 1.0)) throw DomainError("schedule: xi = alpha / ell^2 must exceed 1 for r to be defined");
  s.r = 1.0 / std::pow(std::log(s.xi), 1.5);
  const double nd = static_cast<double>(n);
  if (n >= 2 && ell < std::log(nd)) {
    s.warnings.push_back("ell < ln n; the analysis assumes ell >= ln n");
  }
  if (!(alpha < nd)) s.warnings.push_back("alpha >= n; the index window alpha <= i < n - alpha is empty");
  return s;
}

Schedule Schedule::make(std::size_t n, double ell, AlphaProfile profile) {
  return make(n, ell, default_alpha(n, ell, profile).alpha);
}

std::size_t Schedule::window_begin() const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(alpha)));
}

std::size_t Schedule::window_end() const {
  if (!(lambda > 0.0)) return window_begin();
  const auto end = static_cast<std::size_t>(std::ceil(lambda));
  return std::max(window_begin(), std::min(end, n + 1));
}

VertexStats vertex_stats(const UnitDiskGraph& g, VertexId i, const Schedule& schedule) {
  if (!g.contains(i)) throw DomainError("vertex_stats: unknown vertex id");
  const double side = g.square().side();
  if (std::abs(schedule.ell - side) > 1e-9 * std::max(1.0, side)) {
    throw DomainError("vertex_stats: schedule ell does not match the graph's square side");
  }
  VertexStats st;
  st.i = i;
  for (VertexId v : g.neighbors(i)) {
    if (v > i) {
      ++st.rho_b;
    } else {
      ++st.rho_w;
    }
  }
  const geometry::Point2D p = g.point(i);
  const double density = geometry::truncated_disk_area(p, g.square()) / (side * side);
  const double n = static_cast<double>(g.size());
  const double id = static_cast<double>(i.value);
  st.mu_b = (n - id) * density;
  st.mu_w = (id - 1.0) * density;
  const double r = schedule.r;
  st.in_a = p.x >= r && p.y >= r && p.x <= side - r && p.y <= side - r;
  st.in_d = std::abs(st.rho_b - st.mu_b) < st.mu_b / 2.0 && std::abs(st.rho_w - st.mu_w) < st.mu_w / 2.0;
  return st;
}

double d_given_a_bound(const Schedule& schedule, std::size_t i) {
  if (i <= 1 || i >= schedule.n) return -std::numeric_limits<double>::infinity();
  const double l2 = schedule.ell * schedule.ell;
  const double n = static_cast<double>(schedule.n);
  const double id = static_cast<double>(i);
  return 1.0 - 16.0 * l2 / (n - id) - 16.0 * l2 / (id - 1.0);
}

EventFrequencies event_frequencies(const UnitDiskGraph& g, const Schedule& schedule) {
  EventFrequencies f;
  f.vertices = g.size();
  std::size_t a_count = 0;
  std::size_t d_and_a = 0;
  double bound_sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const VertexId id = VertexId::from_index(k);
    const VertexStats st = vertex_stats(g, id, schedule);
    if (!st.in_a) continue;
    ++a_count;
    const double bound = d_given_a_bound(schedule, id.value);
    if (bound > 0.0) {
      ++f.bound_positive_vertices;
      bound_sum += bound;
      d_and_a += st.in_d ? 1 : 0;
    }
  }
  const double l = schedule.ell;
  f.p_a_exact = std::pow(std::max(0.0, l - 2.0 * schedule.r), 2) / (l * l);
  f.p_a_empirical = static_cast<double>(a_count) / static_cast<double>(g.size());
  f.p_a_std_error = binomial_std_error(f.p_a_exact, g.size());
  f.p_a_within_3se = std::abs(f.p_a_empirical - f.p_a_exact) <= 3.0 * f.p_a_std_error;
  if (f.bound_positive_vertices > 0) {
    f.d_given_a_vacuous = false;
    const double m = static_cast<double>(f.bound_positive_vertices);
    f.d_given_a_empirical = static_cast<double>(d_and_a) / m;
    f.d_given_a_mean_bound = bound_sum / m;
    f.d_given_a_ok = f.d_given_a_empirical >= f.d_given_a_mean_bound - 0.05;
  }
  return f;
}

ConditionalPruneReport conditional_prune_rate(const UnitDiskGraph& g, const Schedule& schedule,
                                              unsigned threads) {
  const std::size_t begin = schedule.window_begin();
  const std::size_t end = std::min(schedule.window_end(), g.size() + 1);
  if (begin >= end) throw DomainError("conditional_prune_rate: index window alpha <= i < lambda is empty");
  const rule2::GatewaySet c = rule2::prune(g, threads);

  ConditionalPruneReport rep;
  std::size_t window_pruned = 0;
  std::size_t cond_pruned = 0;
  for (std::size_t id = begin; id < end; ++id) {
    const VertexId v{static_cast<std::uint32_t>(id)};
    const bool pruned = !c.contains(v);
    ++rep.window_vertices;
    window_pruned += pruned ? 1 : 0;
    const VertexStats st = vertex_stats(g, v, schedule);
    if (st.in_a && st.in_d) {
      ++rep.conditioned_vertices;
      cond_pruned += pruned ? 1 : 0;
    }
  }
  rep.conditional = make_proportion(cond_pruned, rep.conditioned_vertices);
  rep.unconditional = make_proportion(window_pruned, rep.window_vertices);
  rep.overall = make_proportion(g.size() - c.size(), g.size());
  return rep;
}

TrialResult run_trial(const UnitDiskGraph& g, unsigned threads, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const rule2::GatewaySet c = rule2::prune(g, threads);
  const rule2::CdsReport rep = rule2::verify_cds(g, c);
  TrialResult t;
  t.n = g.size();
  t.side = g.square().side();
  t.seed = g.seed();
  t.cds_size = c.size();
  t.pruned = g.size() - c.size();
  t.components_g = rep.components_graph;
  t.components_c = rep.components_set;
  t.dominating = rep.dominating;
  t.component_preserving = rep.component_preserving;
  if (timing) {
    t.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return t;
}

TrialResult run_trial(std::size_t n, double side, std::uint64_t seed, unsigned threads, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const UnitDiskGraph g = rgg::random_udg(n, geometry::SquareRegion(side), seed);
  TrialResult t = run_trial(g, threads, false);
  if (timing) {
    t.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return t;
}

double EllRule::ell(std::size_t n) const {
  return kind == Kind::Sqrt ? rgg::ell_sqrt(n, param) : rgg::ell_power(n, param);
}

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(path + ": missing required field '" + key + "'");
  return obj.at(key);
}

std::uint64_t as_count(const json& v, const std::string& path, std::uint64_t min) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(path + ": expected an integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) throw ConfigError(path + ": must be non-negative");
  const auto value = v.get<std::uint64_t>();
  if (value < min) throw ConfigError(path + ": must be >= " + std::to_string(min));
  return value;
}

double as_positive(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  const double d = v.get<double>();
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError(path + ": must be > 0");
  return d;
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

SweepConfig parse_sweep_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  const json& list = require(root, "schedules", "config");
  if (!list.is_array()) throw ConfigError("config.schedules: expected an array");

  SweepConfig cfg;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string path = "config.schedules[" + std::to_string(k) + "]";
    const json& item = list[k];
    if (!item.is_object()) throw ConfigError(path + ": expected an object");
    ScheduleSpec spec;
    spec.n = as_count(require(item, "n", path), path + ".n", 1);

    const json& rule = require(item, "ell_rule", path);
    const std::string rule_path = path + ".ell_rule";
    const json& kind = require(rule, "kind", rule_path);
    if (!kind.is_string()) throw ConfigError(rule_path + ".kind: expected \"sqrt\" or \"power\"");
    if (kind == "sqrt") {
      spec.ell_rule.kind = EllRule::Kind::Sqrt;
      spec.ell_rule.param = rule.contains("c") ? as_positive(rule.at("c"), rule_path + ".c") : 1.0;
    } else if (kind == "power") {
      spec.ell_rule.kind = EllRule::Kind::Power;
      spec.ell_rule.param = as_positive(require(rule, "t", rule_path), rule_path + ".t");
    } else {
      throw ConfigError(rule_path + ".kind: expected \"sqrt\" or \"power\"");
    }

    spec.alpha_profile =
        spec.ell_rule.kind == EllRule::Kind::Sqrt ? AlphaProfile::SqrtRegime : AlphaProfile::PowerRegime;
    if (item.contains("alpha_profile")) {
      const json& prof = item.at("alpha_profile");
      if (!prof.is_string()) throw ConfigError(path + ".alpha_profile: expected a string");
      try {
        spec.alpha_profile = parse_alpha_profile(prof.get<std::string>());
      } catch (const ConfigError& e) {
        throw ConfigError(path + ".alpha_profile: " + e.what());
      }
    }
    spec.trials = item.contains("trials") ? as_count(item.at("trials"), path + ".trials", 0) : 1;
    spec.seed = item.contains("seed") ? as_count(item.at("seed"), path + ".seed", 0) : 0;
    if (spec.n < 2) throw ConfigError(path + ".n: ell rules need n >= 2");
    try {
      default_alpha(spec.n, spec.ell_rule.ell(spec.n), spec.alpha_profile);
    } catch (const DomainError& e) {
      throw ConfigError(path + ": " + e.what());
    }
    cfg.schedules.push_back(spec);
  }
  return cfg;
}

SweepResult sweep(const SweepConfig& config, unsigned threads, bool timing) {
  struct Job {
    std::size_t schedule = 0;
    std::size_t trial = 0;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < config.schedules.size(); ++s) {
    for (std::size_t t = 0; t < config.schedules[s].trials; ++t) jobs.push_back({s, t});
  }
  std::vector<SweepRow> rows(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const ScheduleSpec& spec = config.schedules[jobs[j].schedule];
    const double ell = spec.ell_rule.ell(spec.n);
    rows[j].trial = jobs[j].trial;
    rows[j].ell = ell;
    rows[j].result = run_trial(spec.n, ell, derive_seed(spec.seed, jobs[j].trial), 1, timing);
  });

  SweepResult out;
  for (std::size_t s = 0; s < config.schedules.size(); ++s) {
    const ScheduleSpec& spec = config.schedules[s];
    if (spec.trials == 0) continue;
    SweepAggregate agg;
    agg.n = spec.n;
    agg.side = spec.ell_rule.ell(spec.n);
    agg.trials = spec.trials;
    agg.alpha = default_alpha(spec.n, agg.side, spec.alpha_profile);
    const double l2 = agg.side * agg.side;
    std::vector<double> cds;
    std::size_t ge = 0;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].schedule != s) continue;
      const TrialResult& r = rows[j].result;
      cds.push_back(static_cast<double>(r.cds_size));
      agg.mean_pruned += static_cast<double>(r.pruned);
      agg.mean_frac_pruned += static_cast<double>(r.pruned) / static_cast<double>(r.n);
      ge += static_cast<double>(r.cds_size) >= l2 / 4.0 ? 1 : 0;
      agg.all_valid = agg.all_valid && r.dominating && r.component_preserving;
    }
    const double m = static_cast<double>(cds.size());
    agg.mean_cds = mean(cds);
    agg.sd_cds = std::sqrt(sample_variance(cds));
    agg.mean_pruned /= m;
    agg.mean_frac_pruned /= m;
    agg.mean_cds_over_ell2 = agg.mean_cds / l2;
    agg.frac_ge_ell2_over_4 = static_cast<double>(ge) / m;
    out.aggregates.push_back(agg);
  }

  std::vector<std::size_t> order(jobs.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const ScheduleSpec& sa = config.schedules[jobs[a].schedule];
    const ScheduleSpec& sb = config.schedules[jobs[b].schedule];
    return std::tie(sa.n, sa.seed, jobs[a].trial) < std::tie(sb.n, sb.seed, jobs[b].trial);
  });
  out.rows.reserve(rows.size());
  for (std::size_t j : order) out.rows.push_back(rows[j]);
  std::stable_sort(out.aggregates.begin(), out.aggregates.end(),
                   [](const SweepAggregate& a, const SweepAggregate& b) { return a.n < b.n; });
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "schema_ver,n,side,seed,trial,cds_size,U,frac_pruned,comp_g,comp_c,dominating,cds_over_ell2,"
        "ge_ell2_over_4,millis\n";
  for (const SweepRow& row : result.rows) {
    const TrialResult& r = row.result;
    const double l2 = r.side * r.side;
    os << kCsvSchemaVersion << ',' << r.n << ',' << format_double("%.17g", r.side) << ',' << r.seed << ','
       << row.trial << ',' << r.cds_size << ',' << r.pruned << ','
       << format_double("%.9g", static_cast<double>(r.pruned) / static_cast<double>(r.n)) << ','
       << r.components_g << ',' << r.components_c << ',' << (r.dominating ? 1 : 0) << ','
       << format_double("%.9g", static_cast<double>(r.cds_size) / l2) << ','
       << (static_cast<double>(r.cds_size) >= l2 / 4.0 ? 1 : 0) << ',' << format_double("%.3f", r.millis)
       << '\n';
  }
  return os.str();
}

std::string aggregate_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "schema_ver,n,side,trials,mean_cds,sd_cds,mean_U,mean_frac_pruned,mean_cds_over_ell2,"
        "frac_ge_ell2_over_4,all_valid,alpha,xi,alpha_over_n,third_condition_holds\n";
  for (const SweepAggregate& a : result.aggregates) {
    os << kCsvSchemaVersion << ',' << a.n << ',' << format_double("%.17g", a.side) << ',' << a.trials << ','
       << format_double("%.9g", a.mean_cds) << ',' << format_double("%.9g", a.sd_cds) << ','
       << format_double("%.9g", a.mean_pruned) << ',' << format_double("%.9g", a.mean_frac_pruned) << ','
       << format_double("%.9g", a.mean_cds_over_ell2) << ',' << format_double("%.9g", a.frac_ge_ell2_over_4)
       << ',' << (a.all_valid ? 1 : 0) << ',' << format_double("%.9g", a.alpha.alpha) << ','
       << format_double("%.9g", a.alpha.xi) << ','
       << format_double("%.9g", a.alpha.alpha / static_cast<double>(a.n)) << ','
       << (a.alpha.third_holds ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace udgcds::harness
