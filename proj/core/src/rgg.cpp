#include "udgcds/rgg.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "udgcds/random.hpp"

namespace udgcds::rgg {

std::vector<Point2D> sample_points(std::size_t n, const SquareRegion& square, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample_points: n must be >= 1");
  Rng rng(seed);
  std::vector<Point2D> points(n);
  for (auto& p : points) {
    p.x = square.side() * rng.uniform();
    p.y = square.side() * rng.uniform();
  }
  return points;
}

UnitGrid::UnitGrid(std::span<const Point2D> points, const SquareRegion& square)
    : cells_(std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(square.side())))) {
  const std::size_t cell_count = static_cast<std::size_t>(cells_ * cells_);
  start_.assign(cell_count + 1, 0);
  std::vector<std::size_t> cell_index(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [cx, cy] = cell_of(points[i]);
    cell_index[i] = static_cast<std::size_t>(cy * cells_ + cx);
    ++start_[cell_index[i] + 1];
  }
  std::partial_sum(start_.begin(), start_.end(), start_.begin());
  members_.resize(points.size());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    members_[fill[cell_index[i]]++] = static_cast<std::uint32_t>(i);
  }
}

std::pair<std::int64_t, std::int64_t> UnitGrid::cell_of(Point2D p) const {
  const auto clamp_cell = [this](double v) {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(v)), 0, cells_ - 1);
  };
  return {clamp_cell(p.x), clamp_cell(p.y)};
}

UnitDiskGraph UnitDiskGraph::build(std::vector<Point2D> points, const SquareRegion& square, std::uint64_t seed) {
  for (const Point2D& p : points) {
    if (!geometry::is_finite(p) || !square.contains(p)) {
      throw DomainError("build_udg: point outside the square");
    }
  }
  UnitDiskGraph g(std::move(points), square, seed);
  const std::size_t n = g.points_.size();
  const UnitGrid grid(g.points_, square);
  g.offsets_.assign(n + 1, 0);
  std::vector<VertexId> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    scratch.clear();
    const VertexId self = VertexId::from_index(i);
    grid.for_each_within_unit(g.points_, g.points_[i], [&](VertexId v) {
      if (v != self) scratch.push_back(v);
    });
    std::sort(scratch.begin(), scratch.end());
    g.adjacency_.insert(g.adjacency_.end(), scratch.begin(), scratch.end());
    g.offsets_[i + 1] = g.adjacency_.size();
  }
  return g;
}

bool UnitDiskGraph::adjacent(VertexId a, VertexId b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

ClosedNeighborhood UnitDiskGraph::closed_neighborhood(VertexId v) const {
  ClosedNeighborhood cn{v, {}};
  const auto nb = neighbors(v);
  cn.members.reserve(nb.size() + 1);
  auto split = std::lower_bound(nb.begin(), nb.end(), v);
  cn.members.insert(cn.members.end(), nb.begin(), split);
  cn.members.push_back(v);
  cn.members.insert(cn.members.end(), split, nb.end());
  return cn;
}

UnitDiskGraph random_udg(std::size_t n, const SquareRegion& square, std::uint64_t seed) {
  return UnitDiskGraph::build(sample_points(n, square, seed), square, seed);
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

namespace {

ComponentLabeling relabel(UnionFind& uf, std::size_t n, const std::vector<std::uint8_t>* keep) {
  ComponentLabeling out;
  out.label.assign(n, 0);
  std::vector<std::int64_t> root_label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep && !(*keep)[i]) continue;
    const std::size_t r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = static_cast<std::int64_t>(out.count++);
    out.label[i] = static_cast<std::uint32_t>(root_label[r]);
  }
  return out;
}

}  // namespace

ComponentLabeling components(const UnitDiskGraph& g) {
  UnionFind uf(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (VertexId v : g.neighbors(VertexId::from_index(i))) {
      if (v.index() > i) uf.unite(i, v.index());
    }
  }
  return relabel(uf, g.size(), nullptr);
}

ComponentLabeling induced_components(const UnitDiskGraph& g, std::span<const VertexId> members) {
  std::vector<std::uint8_t> keep(g.size(), 0);
  for (VertexId v : members) {
    if (!g.contains(v)) throw DomainError("induced_components: vertex not in graph");
    keep[v.index()] = 1;
  }
  UnionFind uf(g.size());
  for (VertexId v : members) {
    for (VertexId w : g.neighbors(v)) {
      if (keep[w.index()]) uf.unite(v.index(), w.index());
    }
  }
  return relabel(uf, g.size(), &keep);
}

double ell_sqrt(std::size_t n, double c) {
  if (n < 2) throw DomainError("ell_sqrt: n must be >= 2");
  const double nd = static_cast<double>(n);
  return c * std::sqrt(nd / std::log(nd));
}

double ell_power(std::size_t n, double t) {
  if (n < 2) throw DomainError("ell_power: n must be >= 2");
  const double nd = static_cast<double>(n);
  return std::pow(nd / std::log(nd), t);
}

void write_graph(std::ostream& out, const UnitDiskGraph& g) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu %.17g %llu\n", g.size(), g.square().side(),
                static_cast<unsigned long long>(g.seed()));
  out << buf;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point2D p = g.points()[i];
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i + 1, p.x, p.y);
    out << buf;
  }
}

UnitDiskGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& why) {
    return ConfigError("graph file line " + std::to_string(line_no) + ": " + why);
  };
  std::size_t n = 0;
  double side = 0.0;
  unsigned long long seed = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream header(line);
    if (!(header >> n >> side >> seed)) throw fail("expected header 'n side seed'");
    break;
  }
  if (n == 0) throw fail("missing header or n = 0");
  if (!(side > 0.0) || !std::isfinite(side)) throw fail("side must be > 0");
  std::vector<Point2D> points(n);
  std::vector<std::uint8_t> seen(n, 0);
  std::size_t read = 0;
  while (read < n && std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::size_t id = 0;
    Point2D p;
    if (!(row >> id >> p.x >> p.y)) throw fail("expected 'id x y'");
    if (id < 1 || id > n) throw fail("id out of range 1.." + std::to_string(n));
    if (seen[id - 1]) throw fail("duplicate id " + std::to_string(id));
    seen[id - 1] = 1;
    points[id - 1] = p;
    ++read;
  }
  if (read != n) throw fail("expected " + std::to_string(n) + " vertex lines, found " + std::to_string(read));
  const SquareRegion square(side);
  for (std::size_t i = 0; i < n; ++i) {
    if (!geometry::is_finite(points[i]) || !square.contains(points[i])) {
      throw ConfigError("graph file: vertex " + std::to_string(i + 1) + " lies outside the square");
    }
  }
  return UnitDiskGraph::build(std::move(points), square, seed);
}

}  // namespace udgcds::rgg
