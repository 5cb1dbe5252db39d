#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "udgcds/coverage.hpp"
#include "udgcds/errors.hpp"
#include "udgcds/harness.hpp"
#include "udgcds/rgg.hpp"
#include "udgcds/rule2.hpp"

namespace udgcds::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Raised when a self-check finds a numerical disagreement.
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json interval_json(const ProportionEstimate& p) {
  return {{"successes", p.successes},
          {"trials", p.trials},
          {"estimate", p.estimate},
          {"ci95", {p.ci95.low, p.ci95.high}}};
}

rule2::GatewaySet read_gateways(const std::string& path, const rgg::UnitDiskGraph& g) {
  std::istringstream in(read_file(path));
  rule2::GatewaySet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long id = 0;
    std::string rest;
    if (!(fields >> id) || (fields >> rest) || id < 1 || static_cast<unsigned long long>(id) > g.size()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected a vertex id in 1.." +
                        std::to_string(g.size()));
    }
    set.members.push_back(rgg::VertexId{static_cast<std::uint32_t>(id)});
  }
  std::sort(set.members.begin(), set.members.end());
  if (std::adjacent_find(set.members.begin(), set.members.end()) != set.members.end()) {
    throw ConfigError(path + ": duplicate vertex id");
  }
  return set;
}

rgg::UnitDiskGraph load_graph(const std::string& path) {
  std::istringstream in(read_file(path));
  try {
    return rgg::read_graph(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

struct Globals {
  unsigned threads = 0;
};

int cmd_geom_check(std::uint64_t seed, std::size_t configs, std::uint64_t samples, const std::string& out_path,
                   std::ostream& out) {
  if (configs < 1 || samples < 1) throw DomainError("geom-check: --configs and --samples must be >= 1");
  const auto rows = geom_check(seed, configs, samples);
  std::string csv = "check,statistic,bound,pass\n";
  bool all = true;
  char buf[64];
  for (const auto& r : rows) {
    csv += r.name;
    std::snprintf(buf, sizeof buf, ",%.17g", r.statistic);
    csv += buf;
    std::snprintf(buf, sizeof buf, ",%.17g", r.bound);
    csv += buf;
    csv += r.pass ? ",1\n" : ",0\n";
    all = all && r.pass;
  }
  emit(out_path, csv, out);
  if (!all) throw CheckFailed("geom-check: at least one geometry check failed");
  return kExitOk;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot rename onto " + path);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rule 2 connected dominating sets on random unit disk graphs"};
  app.name("udgcds");
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--threads", globals.threads, "Worker threads (0 = all cores); output does not depend on it")
      ->check(CLI::NonNegativeNumber);

  // geom-check
  auto* geom = app.add_subcommand("geom-check", "Geometry self-test, CSV of check,statistic,bound,pass");
  std::uint64_t geom_seed = 1;
  std::size_t geom_configs = 20;
  std::uint64_t geom_samples = 200'000;
  std::string geom_out;
  geom->add_option("--seed", geom_seed, "Seed");
  geom->add_option("--configs", geom_configs, "Random configurations per check");
  geom->add_option("--samples", geom_samples, "Monte Carlo samples per comparison");
  geom->add_option("--out", geom_out, "Output CSV (default stdout)");

  // run-rule2
  auto* r2 = app.add_subcommand("run-rule2", "Build a graph, prune it with Rule 2 and verify the result");
  std::string r2_graph;
  std::size_t r2_n = 0;
  double r2_side = 0.0;
  std::uint64_t r2_seed = 0;
  std::string r2_save;
  std::string r2_out;
  bool r2_timing = false;
  auto* opt_graph = r2->add_option("--graph", r2_graph, "Graph file to load");
  auto* opt_n = r2->add_option("--n", r2_n, "Number of random points");
  auto* opt_side = r2->add_option("--side", r2_side, "Square side");
  r2->add_option("--seed", r2_seed, "Seed for the random points");
  opt_graph->excludes(opt_n)->excludes(opt_side);
  opt_n->needs(opt_side);
  opt_side->needs(opt_n);
  r2->add_option("--save-graph", r2_save, "Write the graph that was pruned");
  r2->add_flag("--timing", r2_timing, "Record wall-clock milliseconds (makes output nondeterministic)");
  r2->add_option("--out", r2_out, "Output JSON (default stdout)");

  // local-coverage
  auto* lc = app.add_subcommand("local-coverage", "Two-blue-point coverage experiment in a truncated unit disk");
  coverage::CoverageParams lcp;
  std::string lc_out;
  std::string lc_summary;
  lc->add_option("--b", lcp.b, "Blue points")->required();
  lc->add_option("--w", lcp.w, "White points")->required();
  lc->add_option("--ox", lcp.center.x, "Center x")->required();
  lc->add_option("--oy", lcp.center.y, "Center y")->required();
  lc->add_option("--side", lcp.side, "Square side")->required();
  lc->add_option("--trials", lcp.trials, "Trials")->required();
  lc->add_option("--seed", lcp.seed, "Seed")->required();
  lc->add_option("--exponent", lcp.l_exponent, "Sector-count exponent e in L = floor(b^(1/3) (ln b)^e)")
      ->check(CLI::IsMember({1.5, 2.0}));
  lc->add_option("--out", lc_out, "Per-trial CSV (default: not written)");
  lc->add_option("--summary", lc_summary, "Summary JSON (default stdout)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Rule 2 trials over (n, side) schedules");
  std::string sw_config;
  std::string sw_out;
  std::string sw_summary;
  bool sw_timing = false;
  sw->add_option("--config", sw_config, "Sweep config JSON")->required();
  sw->add_option("--out", sw_out, "Per-trial CSV")->required();
  sw->add_option("--summary", sw_summary, "Per-schedule aggregate CSV");
  sw->add_flag("--timing", sw_timing, "Record wall-clock milliseconds (makes output nondeterministic)");

  // verify
  auto* vf = app.add_subcommand("verify", "Check that a vertex set is a connected dominating set");
  std::string vf_graph;
  std::string vf_gateways;
  std::string vf_out;
  vf->add_option("--graph", vf_graph, "Graph file")->required();
  vf->add_option("--gateways", vf_gateways, "Vertex ids, one per line (default: the Rule 2 set)");
  vf->add_option("--out", vf_out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help("", CLI::AppFormatMode::Normal);
    return kExitValidation;
  }

  try {
    if (*geom) return cmd_geom_check(geom_seed, geom_configs, geom_samples, geom_out, out);

    if (*r2) {
      if (r2_graph.empty() && opt_n->count() == 0) throw ConfigError("run-rule2: give --graph or --n/--side");
      const rgg::UnitDiskGraph g =
          r2_graph.empty() ? rgg::random_udg(r2_n, geometry::SquareRegion(r2_side), r2_seed) : load_graph(r2_graph);
      const harness::TrialResult t = harness::run_trial(g, globals.threads, r2_timing);
      if (!r2_save.empty()) {
        std::ostringstream ss;
        rgg::write_graph(ss, g);
        write_file_atomic(r2_save, ss.str());
      }
      ordered_json j{{"n", t.n},
                     {"side", t.side},
                     {"seed", t.seed},
                     {"cds_size", t.cds_size},
                     {"pruned", t.pruned},
                     {"dominating", t.dominating},
                     {"component_preserving", t.component_preserving},
                     {"components_graph", t.components_g},
                     {"components_set", t.components_c},
                     {"millis", t.millis}};
      emit(r2_out, json_text(j), out);
      return kExitOk;
    }

    if (*lc) {
      if (lcp.b >= 2) {
        const double log_b = std::log(static_cast<double>(lcp.b));
        if (static_cast<double>(lcp.w) > static_cast<double>(lcp.b) * std::pow(log_b, 1.5)) {
          err << "warning: w exceeds b (ln b)^1.5, outside the regime the coverage bound covers\n";
        }
      }
      const coverage::CoverageRun run = coverage::run_local_coverage(lcp, globals.threads);
      if (!lc_out.empty()) {
        std::string csv = "trial,tau,Z,Y,X_b,pair_found\n";
        for (const auto& t : run.trials) {
          csv += std::to_string(t.trial) + "," + std::to_string(t.tau) + "," + std::to_string(t.z) + "," +
                 std::to_string(t.y) + "," + std::to_string(t.x_b) + "," + (t.pair_found ? "1" : "0") + "\n";
        }
        write_file_atomic(lc_out, csv);
      }
      const auto& s = run.summary;
      ordered_json j{{"b", lcp.b},
                     {"w", lcp.w},
                     {"center", {lcp.center.x, lcp.center.y}},
                     {"side", lcp.side},
                     {"trials", lcp.trials},
                     {"seed", lcp.seed},
                     {"exponent", lcp.l_exponent},
                     {"lambda_hat", s.lambda_hat},
                     {"pair_found", interval_json(s.pair_found)},
                     {"failure_rate", 1.0 - s.pair_found.estimate},
                     {"x_b", interval_json(s.x_b)},
                     {"mean_tau", s.mean_tau},
                     {"expected_tau_formula", s.expected_tau_formula},
                     {"expected_tau_exact", s.expected_tau_exact},
                     {"mean_z", s.mean_z},
                     {"expected_z", s.expected_z}};
      emit(lc_summary, json_text(j), out);
      return kExitOk;
    }

    if (*sw) {
      const harness::SweepConfig config = [&] {
        const std::string text = read_file(sw_config);
        try {
          return harness::parse_sweep_config(text);
        } catch (const ConfigError& e) {
          throw ConfigError(sw_config + ": " + e.what());
        }
      }();
      const harness::SweepResult result = harness::sweep(config, globals.threads, sw_timing);
      const std::string rows = harness::sweep_csv(result);
      const std::string aggregates = harness::aggregate_csv(result);
      write_file_atomic(sw_out, rows);
      if (!sw_summary.empty()) write_file_atomic(sw_summary, aggregates);
      for (const auto& spec : config.schedules) {
        const double ell = spec.ell_rule.ell(spec.n);
        if (ell < std::log(static_cast<double>(spec.n))) {
          err << "warning: n=" << spec.n << ": side " << ell << " is below ln n\n";
        }
      }
      return kExitOk;
    }

    if (*vf) {
      const rgg::UnitDiskGraph g = load_graph(vf_graph);
      const rule2::GatewaySet set =
          vf_gateways.empty() ? rule2::prune(g, globals.threads) : read_gateways(vf_gateways, g);
      const rule2::CdsReport report = rule2::verify_cds(g, set);
      ordered_json j{{"n", g.size()},
                     {"side", g.square().side()},
                     {"set_size", set.size()},
                     {"source", vf_gateways.empty() ? "rule2" : "file"},
                     {"dominating", report.dominating},
                     {"component_preserving", report.component_preserving},
                     {"components_graph", report.components_graph},
                     {"components_set", report.components_set}};
      // The literal triple-loop rule is cheap enough to cross-check small graphs.
      constexpr std::size_t kOracleLimit = 200;
      if (g.size() <= kOracleLimit) {
        const bool match = rule2::prune(g, globals.threads) == rule2::brute_force_prune(g);
        j["oracle_checked"] = true;
        j["oracle_match"] = match;
        if (!match) {
          emit(vf_out, json_text(j), out);
          throw CheckFailed("verify: pruning disagrees with the brute-force rule");
        }
      } else {
        j["oracle_checked"] = false;
      }
      emit(vf_out, json_text(j), out);
      return kExitOk;
    }
  } catch (const CheckFailed& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace udgcds::cli
