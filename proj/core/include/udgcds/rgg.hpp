#pragma once

// Random unit disk graphs: uniform point sampling in the square, grid-bucketed
// radius-1 adjacency, connected components, and a line-oriented text format.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "udgcds/geometry.hpp"

namespace udgcds::rgg {

using geometry::Point2D;
using geometry::SquareRegion;

// IDs run 1..n; their numeric order is the Rule 2 priority order.
struct VertexId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const { return value - 1; }
  static constexpr VertexId from_index(std::size_t i) { return {static_cast<std::uint32_t>(i + 1)}; }

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

// Point j (0-based) of the result carries VertexId j + 1.
std::vector<Point2D> sample_points(std::size_t n, const SquareRegion& square, std::uint64_t seed);

// Buckets of side 1 over the square; a radius-1 query touches at most 9 cells.
class UnitGrid {
 public:
  UnitGrid(std::span<const Point2D> points, const SquareRegion& square);

  // Calls fn(VertexId) for every point within distance 1 of p (p included if it is a point).
  template <class Fn>
  void for_each_within_unit(std::span<const Point2D> points, Point2D p, Fn&& fn) const {
    const auto [cx, cy] = cell_of(p);
    for (std::int64_t gy = std::max<std::int64_t>(0, cy - 1); gy <= std::min<std::int64_t>(cells_ - 1, cy + 1); ++gy) {
      for (std::int64_t gx = std::max<std::int64_t>(0, cx - 1); gx <= std::min<std::int64_t>(cells_ - 1, cx + 1); ++gx) {
        const std::size_t cell = static_cast<std::size_t>(gy * cells_ + gx);
        for (std::uint32_t k = start_[cell]; k < start_[cell + 1]; ++k) {
          const std::uint32_t idx = members_[k];
          if (geometry::dist2(points[idx], p) <= 1.0) fn(VertexId::from_index(idx));
        }
      }
    }
  }

 private:
  std::pair<std::int64_t, std::int64_t> cell_of(Point2D p) const;

  std::int64_t cells_ = 1;  // per axis
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> members_;
};

struct ClosedNeighborhood {
  VertexId center;
  std::vector<VertexId> members;  // sorted, includes center
};

class UnitDiskGraph {
 public:
  // Edges join distinct points at distance <= 1. Every point must lie in the square.
  static UnitDiskGraph build(std::vector<Point2D> points, const SquareRegion& square, std::uint64_t seed = 0);

  std::size_t size() const { return points_.size(); }
  const SquareRegion& square() const { return square_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const Point2D> points() const { return points_; }
  Point2D point(VertexId v) const { return points_[v.index()]; }
  bool contains(VertexId v) const { return v.value >= 1 && v.value <= points_.size(); }

  // Sorted ascending, excludes v itself.
  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v.index()], adjacency_.data() + offsets_[v.index() + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v.index() + 1] - offsets_[v.index()]; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  bool adjacent(VertexId a, VertexId b) const;
  ClosedNeighborhood closed_neighborhood(VertexId v) const;

  friend bool operator==(const UnitDiskGraph& a, const UnitDiskGraph& b) {
    return a.square_.side() == b.square_.side() && a.seed_ == b.seed_ && a.points_ == b.points_ &&
           a.offsets_ == b.offsets_ && a.adjacency_ == b.adjacency_;
  }

 private:
  UnitDiskGraph(std::vector<Point2D> points, SquareRegion square, std::uint64_t seed)
      : points_(std::move(points)), square_(square), seed_(seed) {}

  std::vector<Point2D> points_;
  SquareRegion square_;
  std::uint64_t seed_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adjacency_;
};

// build_udg(sample_points(n, square, seed), square)
UnitDiskGraph random_udg(std::size_t n, const SquareRegion& square, std::uint64_t seed);

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t count() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::size_t components_;
};

struct ComponentLabeling {
  std::vector<std::uint32_t> label;  // per vertex index, labels 0..count-1 in order of first appearance
  std::size_t count = 0;
};

ComponentLabeling components(const UnitDiskGraph& g);

// Components of the subgraph induced by `members` (label is only meaningful for members).
ComponentLabeling induced_components(const UnitDiskGraph& g, std::span<const VertexId> members);

// ℓ = c · sqrt(n / ln n)
double ell_sqrt(std::size_t n, double c = 1.0);
// ℓ = (n / ln n)^t
double ell_power(std::size_t n, double t);

// Text format:
//   n side seed
//   id x y        (n lines, id = 1..n, coordinates printed round-trip exact)
// Adjacency is rebuilt on load.
void write_graph(std::ostream& out, const UnitDiskGraph& g);
UnitDiskGraph read_graph(std::istream& in);

}  // namespace udgcds::rgg
