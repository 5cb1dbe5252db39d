#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "udgcds/rgg.hpp"

using namespace udgcds::rgg;
using udgcds::ConfigError;
using udgcds::DomainError;

namespace {

// chi-square 0.999 quantile with 99 degrees of freedom (scipy.stats.chi2.ppf)
constexpr double kChi2Crit99 = 148.23035916510173;

void check_matches_all_pairs(const UnitDiskGraph& g) {
  const std::vector<Point2D> pts(g.points().begin(), g.points().end());
  const auto ref = oracle::all_pairs_adjacency(pts);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto nb = g.neighbors(VertexId::from_index(i));
    REQUIRE(nb.size() == ref[i].size());
    for (std::size_t k = 0; k < nb.size(); ++k) REQUIRE(nb[k].index() == ref[i][k]);
  }
}

}  // namespace

TEST_CASE("sample_points") {
  const SquareRegion sq(7.0);
  const auto one = sample_points(1, sq, 3);
  REQUIRE(one.size() == 1);
  CHECK(sq.contains(one[0]));
  CHECK(sample_points(100, sq, 3) == sample_points(100, sq, 3));
  CHECK(sample_points(100, sq, 3) != sample_points(100, sq, 4));
  CHECK_THROWS_AS(sample_points(0, sq, 3), DomainError);
}

TEST_CASE("sample_points is uniform over a 10x10 super-grid") {
  const SquareRegion sq(50.0);
  const auto pts = sample_points(100'000, sq, 20261014);
  std::vector<double> counts(100, 0.0);
  for (Point2D p : pts) {
    const int cx = std::min(9, static_cast<int>(p.x / 5.0));
    const int cy = std::min(9, static_cast<int>(p.y / 5.0));
    counts[cy * 10 + cx] += 1;
  }
  double chi2 = 0;
  for (double c : counts) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
  CHECK(chi2 < kChi2Crit99);
}

TEST_CASE("build: edges, closed adjacency and validation") {
  const SquareRegion sq(4.0);
  const auto close = UnitDiskGraph::build({{1, 1}, {1.5, 1}}, sq);
  CHECK(close.edge_count() == 1);
  CHECK(close.adjacent(VertexId{1}, VertexId{2}));
  const auto far = UnitDiskGraph::build({{1, 1}, {2.5, 1}}, sq);
  CHECK(far.edge_count() == 0);
  // distance exactly 1 is an edge
  const auto exact = UnitDiskGraph::build({{1, 1}, {2, 1}}, sq);
  CHECK(exact.edge_count() == 1);
  // points on the far boundary land in the last grid cell
  const auto edge = UnitDiskGraph::build({{4, 4}, {3.5, 4}, {0, 0}}, sq);
  CHECK(edge.adjacent(VertexId{1}, VertexId{2}));
  CHECK_FALSE(edge.adjacent(VertexId{1}, VertexId{3}));
  CHECK_THROWS_AS(UnitDiskGraph::build({{1, 1}, {5, 1}}, sq), DomainError);
  CHECK_THROWS_AS(UnitDiskGraph::build({{1, NAN}}, sq), DomainError);

  const auto nb = close.closed_neighborhood(VertexId{2});
  CHECK(nb.center == VertexId{2});
  CHECK(nb.members == std::vector<VertexId>{VertexId{1}, VertexId{2}});
}

TEST_CASE("grid adjacency equals all-pairs adjacency") {
  for (std::size_t n : {1, 2, 50, 400, 2000}) {
    const double side = std::max(1.0, ell_sqrt(std::max<std::size_t>(n, 3)));
    const auto g = random_udg(n, SquareRegion(side), 100 + n);
    check_matches_all_pairs(g);
    // symmetric, irreflexive
    for (std::size_t i = 0; i < g.size(); ++i) {
      const VertexId v = VertexId::from_index(i);
      for (VertexId w : g.neighbors(v)) {
        CHECK(w != v);
        CHECK(g.adjacent(w, v));
      }
    }
  }
  // dense graph in a tiny square
  check_matches_all_pairs(random_udg(300, SquareRegion(1.5), 8));
}

TEST_CASE("random_udg determinism") {
  const SquareRegion sq(10.0);
  CHECK(random_udg(500, sq, 1) == random_udg(500, sq, 1));
  CHECK_FALSE(random_udg(500, sq, 1) == random_udg(500, sq, 2));
}

TEST_CASE("components") {
  const SquareRegion sq(10.0);
  const auto tri = UnitDiskGraph::build({{1, 1}, {1.5, 1}, {1.2, 1.5}}, sq);
  CHECK(components(tri).count == 1);
  const auto two = UnitDiskGraph::build({{1, 1}, {4, 1}}, sq);
  CHECK(components(two).count == 2);
  CHECK(components(two).label == std::vector<std::uint32_t>{0, 1});

  const auto g = random_udg(800, SquareRegion(18), 77);
  std::vector<std::vector<std::uint32_t>> adj(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (VertexId w : g.neighbors(VertexId::from_index(i))) adj[i].push_back(w.value - 1);
  }
  CHECK(components(g).count == oracle::dfs_components(adj));

  std::vector<VertexId> evens;
  std::vector<bool> keep(g.size(), false);
  for (std::size_t i = 0; i < g.size(); i += 2) {
    evens.push_back(VertexId::from_index(i));
    keep[i] = true;
  }
  CHECK(induced_components(g, evens).count == oracle::dfs_components(adj, keep));

  UnionFind uf(4);
  CHECK(uf.unite(0, 1));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.count() == 3);
}

TEST_CASE("random graphs at l = sqrt(n / ln n) are usually connected") {
  const std::size_t n = 5000;
  const double side = ell_sqrt(n);
  int connected = 0;
  for (int s = 0; s < 100; ++s) {
    connected += components(random_udg(n, SquareRegion(side), udgcds::derive_seed(5000, s))).count == 1 ? 1 : 0;
  }
  CHECK(connected >= 95);
}

TEST_CASE("ell helpers") {
  CHECK(ell_sqrt(10000) == doctest::Approx(std::sqrt(10000 / std::log(10000.0))));
  CHECK(ell_sqrt(10000, 2.0) == doctest::Approx(2 * std::sqrt(10000 / std::log(10000.0))));
  CHECK(ell_power(10000, 0.4) == doctest::Approx(std::pow(10000 / std::log(10000.0), 0.4)));
}

TEST_CASE("graph text format round trip and diagnostics") {
  const auto g = random_udg(200, SquareRegion(9.5), 31);
  std::stringstream ss;
  write_graph(ss, g);
  const auto back = read_graph(ss);
  CHECK(back == g);

  std::stringstream bad_header("3 x 0\n");
  CHECK_THROWS_AS(read_graph(bad_header), ConfigError);
  std::stringstream short_body("2 5 0\n1 1 1\n");
  CHECK_THROWS_AS(read_graph(short_body), ConfigError);
  std::stringstream wrong_id("2 5 0\n1 1 1\n3 2 2\n");
  CHECK_THROWS_AS(read_graph(wrong_id), ConfigError);
  std::stringstream outside("1 5 0\n1 6 1\n");
  CHECK_THROWS(read_graph(outside));
  std::stringstream blank_lines("\n2 5 0\n\n1 1 1\n2 1.5 1\n\n");
  CHECK(read_graph(blank_lines).edge_count() == 1);
  try {
    std::stringstream line3("2 5 0\n1 1 1\n2 oops 1\n");
    read_graph(line3);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
