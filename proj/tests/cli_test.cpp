#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "udgcds");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = udgcds::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const char* env = std::getenv("UDGCDS_TEST_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "udgcds_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string fixture(const char* name) { return std::string(UDGCDS_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("help and usage errors") {
  const Result help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("run-rule2") != std::string::npos);
  CHECK(run({}).code == 1);
  const Result unknown = run({"frobnicate"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({"run-rule2", "--n", "10"}).code == 1);  // --side is required with --n
  CHECK(run({"run-rule2", "--graph", fixture("path.graph"), "--n", "3", "--side", "3"}).code == 1);
  CHECK(run({"local-coverage", "--b", "10"}).code == 1);
}

TEST_CASE("sweep with a missing config reports one diagnostic line") {
  const Result r = run({"sweep", "--config", "missing.json", "--out", (scratch() / "never.csv").string()});
  CHECK(r.code == 1);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(r.err.find("missing.json") != std::string::npos);
  CHECK_FALSE(fs::exists(scratch() / "never.csv"));
}

TEST_CASE("run-rule2 output is deterministic and thread-count independent") {
  const Result a = run({"run-rule2", "--n", "500", "--side", "20", "--seed", "7"});
  const Result b = run({"run-rule2", "--n", "500", "--side", "20", "--seed", "7"});
  const Result c = run({"--threads", "1", "run-rule2", "--n", "500", "--side", "20", "--seed", "7"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  for (const char* key : {"\"n\"", "\"side\"", "\"seed\"", "\"cds_size\"", "\"pruned\"", "\"dominating\"",
                          "\"component_preserving\"", "\"millis\""}) {
    CHECK(a.out.find(key) != std::string::npos);
  }
  CHECK(run({"run-rule2", "--n", "0", "--side", "20"}).code == 1);
  CHECK(run({"run-rule2", "--n", "10", "--side", "-2"}).code == 1);
}

TEST_CASE("run-rule2 saves graphs that load back to the same result") {
  const fs::path g = scratch() / "saved.graph";
  const fs::path j1 = scratch() / "first.json";
  REQUIRE(run({"run-rule2", "--n", "300", "--side", "12", "--seed", "3", "--save-graph", g.string(), "--out",
               j1.string()})
              .code == 0);
  const Result again = run({"run-rule2", "--graph", g.string()});
  REQUIRE(again.code == 0);
  CHECK(again.out == slurp(j1));
  const Result fx = run({"run-rule2", "--graph", fixture("triangle.graph")});
  CHECK(fx.out.find("\"cds_size\": 2") != std::string::npos);
  spit(scratch() / "broken.graph", "2 5 0\n1 1 1\n");
  const Result bad = run({"run-rule2", "--graph", (scratch() / "broken.graph").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("broken.graph") != std::string::npos);
}

TEST_CASE("local-coverage writes per-trial CSV and a summary") {
  const fs::path csv1 = scratch() / "lc1.csv";
  const fs::path csv2 = scratch() / "lc2.csv";
  const std::vector<std::string> args{"local-coverage", "--b", "500", "--w", "500", "--ox", "5", "--oy", "5",
                                      "--side", "10", "--trials", "30", "--seed", "4"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = args;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  const Result a = run(with({"--out", csv1.string()}));
  std::vector<std::string> single{"--threads", "1"};
  const auto b_args = with({"--out", csv2.string()});
  single.insert(single.end(), b_args.begin(), b_args.end());
  const Result b = run(single);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(csv1) == slurp(csv2));
  const std::string text = slurp(csv1);
  CHECK(text.rfind("trial,tau,Z,Y,X_b,pair_found\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 31);
  CHECK(a.out.find("\"ci95\"") != std::string::npos);
  CHECK(a.out.find("\"expected_tau_formula\"") != std::string::npos);

  // D_delta(o) would cross the square's side
  const Result edge = run({"local-coverage", "--b", "500", "--w", "500", "--ox", "0.001", "--oy", "5", "--side",
                           "10", "--trials", "3", "--seed", "4"});
  CHECK(edge.code == 1);
  CHECK(run(with({"--exponent", "3"})).code == 1);
  CHECK(run(with({"--exponent", "2"})).code == 0);
  const Result heavy = run({"local-coverage", "--b", "20", "--w", "5000", "--ox", "5", "--oy", "5", "--side", "10",
                            "--trials", "2", "--seed", "1"});
  CHECK(heavy.code == 0);
  CHECK(heavy.err.find("warning") != std::string::npos);
}

TEST_CASE("sweep writes byte-identical CSV and leaves no file on failure") {
  const fs::path cfg = scratch() / "sweep.json";
  spit(cfg, R"({"schedules": [{"n": 400, "ell_rule": {"kind": "sqrt"}, "trials": 3, "seed": 2},
                              {"n": 200, "ell_rule": {"kind": "power", "t": 0.45}, "trials": 2, "seed": 3}]})");
  const fs::path o1 = scratch() / "s1.csv", o2 = scratch() / "s2.csv", a1 = scratch() / "a1.csv";
  REQUIRE(run({"sweep", "--config", cfg.string(), "--out", o1.string(), "--summary", a1.string()}).code == 0);
  REQUIRE(run({"--threads", "1", "sweep", "--config", cfg.string(), "--out", o2.string()}).code == 0);
  CHECK(slurp(o1) == slurp(o2));
  const std::string rows = slurp(o1);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 6);
  const std::string agg = slurp(a1);
  CHECK(std::count(agg.begin(), agg.end(), '\n') == 3);

  const fs::path bad = scratch() / "bad.json";
  spit(bad, "{\"schedules\": [\n {\"n\": \"many\"}\n]}");
  const fs::path never = scratch() / "never2.csv";
  const Result r = run({"sweep", "--config", bad.string(), "--out", never.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("schedules[0].n") != std::string::npos);
  CHECK_FALSE(fs::exists(never));
}

TEST_CASE("verify") {
  const Result self = run({"verify", "--graph", fixture("two_components.graph")});
  REQUIRE(self.code == 0);
  CHECK(self.out.find("\"dominating\": true") != std::string::npos);
  CHECK(self.out.find("\"oracle_match\": true") != std::string::npos);

  const fs::path gw = scratch() / "gateways.txt";
  spit(gw, "# ends of a path\n1\n3\n");
  const Result split = run({"verify", "--graph", fixture("path.graph"), "--gateways", gw.string()});
  CHECK(split.code == 0);
  CHECK(split.out.find("\"component_preserving\": false") != std::string::npos);

  spit(gw, "1\n9\n");
  CHECK(run({"verify", "--graph", fixture("path.graph"), "--gateways", gw.string()}).code == 1);
  spit(gw, "2\n2\n");
  CHECK(run({"verify", "--graph", fixture("path.graph"), "--gateways", gw.string()}).code == 1);
  CHECK(run({"verify", "--graph", "nope.graph"}).code == 1);
}

TEST_CASE("geom-check") {
  const Result a = run({"geom-check", "--configs", "4", "--samples", "20000", "--seed", "3"});
  const Result b = run({"--threads", "1", "geom-check", "--configs", "4", "--samples", "20000", "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("check,statistic,bound,pass\n", 0) == 0);
  CHECK(a.out.find(",0\n") == std::string::npos);
  CHECK(run({"geom-check", "--configs", "0"}).code == 1);
}

TEST_CASE("write_file_atomic replaces the target in one step") {
  const fs::path p = scratch() / "atomic.txt";
  udgcds::cli::write_file_atomic(p.string(), "one\n");
  udgcds::cli::write_file_atomic(p.string(), "two\n");
  CHECK(slurp(p) == "two\n");
  CHECK_FALSE(fs::exists(scratch() / "atomic.txt.tmp"));
  CHECK_THROWS(udgcds::cli::write_file_atomic((scratch() / "no_such_dir" / "x.txt").string(), "x"));
}
