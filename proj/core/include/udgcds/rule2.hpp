#pragma once

// Rule 2 gateway pruning. Vertex i is excluded iff its closed neighborhood
// N(i) holds two adjacent vertices i1 > i2 > i with N(i) ⊆ N(i1) ∪ N(i2).
// Every decision is made against the original graph (one shot, no
// re-pruning), so the result does not depend on evaluation order.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "udgcds/rgg.hpp"

namespace udgcds::rule2 {

using rgg::UnitDiskGraph;
using rgg::VertexId;

struct GatewaySet {
  std::vector<VertexId> members;  // sorted ascending

  std::size_t size() const { return members.size(); }
  bool contains(VertexId v) const;
  friend bool operator==(const GatewaySet&, const GatewaySet&) = default;
};

struct ExclusionWitness {
  VertexId excluded;
  VertexId high;  // i1
  VertexId low;   // i2
};

// Reusable scratch space for exclusion tests on one graph. Not thread-safe;
// use one per thread.
class ExclusionChecker {
 public:
  explicit ExclusionChecker(const UnitDiskGraph& g);

  // Candidate pairs are tried with i1 descending, then i2 descending; the
  // first covering pair is returned.
  std::optional<ExclusionWitness> check(VertexId i);

 private:
  const std::uint64_t* mask_of(std::size_t higher_pos);

  const UnitDiskGraph& graph_;
  std::vector<std::int32_t> local_;  // global index -> position in N(i), or -1
  std::vector<VertexId> members_;
  std::vector<VertexId> higher_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint8_t> ready_;
  std::size_t words_ = 0;
};

std::optional<ExclusionWitness> is_excluded(const UnitDiskGraph& g, VertexId i);

// C(V) = vertices not excluded. threads = 0 uses all cores; the result is
// identical for any thread count.
GatewaySet prune(const UnitDiskGraph& g, unsigned threads = 0);

// Literal transcription of the rule using plain adjacency scans. Quadratic in
// degree per candidate pair; meant for small graphs.
GatewaySet brute_force_prune(const UnitDiskGraph& g);

struct CdsReport {
  bool dominating = false;
  // Induced subgraph has one component per component of g. A component of g
  // with no member in the set (e.g. an isolated vertex left out) fails this.
  bool component_preserving = false;
  std::size_t components_graph = 0;
  std::size_t components_set = 0;

  bool ok() const { return dominating && component_preserving; }
};

CdsReport verify_cds(const UnitDiskGraph& g, const GatewaySet& c);

}  // namespace udgcds::rule2
