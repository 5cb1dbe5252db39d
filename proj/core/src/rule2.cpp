#include "udgcds/rule2.hpp"

#include <algorithm>

#include "udgcds/parallel.hpp"

namespace udgcds::rule2 {

bool GatewaySet::contains(VertexId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

ExclusionChecker::ExclusionChecker(const UnitDiskGraph& g) : graph_(g), local_(g.size(), -1) {}

const std::uint64_t* ExclusionChecker::mask_of(std::size_t higher_pos) {
  std::uint64_t* mask = masks_.data() + higher_pos * words_;
  if (!ready_[higher_pos]) {
    const VertexId h = higher_[higher_pos];
    const auto set_bit = [mask](std::int32_t pos) { mask[pos >> 6] |= std::uint64_t{1} << (pos & 63); };
    set_bit(local_[h.index()]);
    for (VertexId w : graph_.neighbors(h)) {
      const std::int32_t pos = local_[w.index()];
      if (pos >= 0) set_bit(pos);
    }
    ready_[higher_pos] = 1;
  }
  return mask;
}

std::optional<ExclusionWitness> ExclusionChecker::check(VertexId i) {
  if (!graph_.contains(i)) throw DomainError("is_excluded: unknown vertex id");
  const auto nb = graph_.neighbors(i);
  higher_.clear();
  for (auto it = nb.rbegin(); it != nb.rend() && *it > i; ++it) higher_.push_back(*it);
  if (higher_.size() < 2) return std::nullopt;

  members_.assign(nb.begin(), nb.end());
  members_.push_back(i);
  for (std::size_t k = 0; k < members_.size(); ++k) local_[members_[k].index()] = static_cast<std::int32_t>(k);

  const std::size_t m = members_.size();
  words_ = (m + 63) / 64;
  masks_.assign(higher_.size() * words_, 0);
  ready_.assign(higher_.size(), 0);
  const std::uint64_t last_word = (m % 64 == 0) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (m % 64)) - 1);

  std::optional<ExclusionWitness> witness;
  for (std::size_t a = 0; a + 1 < higher_.size() && !witness; ++a) {
    const std::uint64_t* ma = mask_of(a);
    for (std::size_t b = a + 1; b < higher_.size(); ++b) {
      const std::int32_t pos_b = local_[higher_[b].index()];
      if (!((ma[pos_b >> 6] >> (pos_b & 63)) & 1U)) continue;  // i1, i2 not adjacent
      const std::uint64_t* mb = mask_of(b);
      bool covers = true;
      for (std::size_t w = 0; w < words_ && covers; ++w) {
        const std::uint64_t want = (w + 1 == words_) ? last_word : ~std::uint64_t{0};
        covers = ((ma[w] | mb[w]) & want) == want;
      }
      if (covers) {
        witness = ExclusionWitness{i, higher_[a], higher_[b]};
        break;
      }
    }
  }
  for (VertexId v : members_) local_[v.index()] = -1;
  return witness;
}

std::optional<ExclusionWitness> is_excluded(const UnitDiskGraph& g, VertexId i) {
  ExclusionChecker checker(g);
  return checker.check(i);
}

GatewaySet prune(const UnitDiskGraph& g, unsigned threads) {
  std::vector<std::uint8_t> excluded(g.size(), 0);
  parallel_blocks(g.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    ExclusionChecker checker(g);
    for (std::size_t k = begin; k < end; ++k) {
      excluded[k] = checker.check(VertexId::from_index(k)).has_value() ? 1 : 0;
    }
  });
  GatewaySet c;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!excluded[k]) c.members.push_back(VertexId::from_index(k));
  }
  return c;
}

GatewaySet brute_force_prune(const UnitDiskGraph& g) {
  const auto in_closed = [&g](VertexId v, VertexId center) {
    if (v == center) return true;
    const auto nb = g.neighbors(center);
    return std::find(nb.begin(), nb.end(), v) != nb.end();
  };
  GatewaySet c;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const VertexId i = VertexId::from_index(k);
    const std::vector<VertexId> closed = g.closed_neighborhood(i).members;
    bool excluded = false;
    for (VertexId i1 : closed) {
      for (VertexId i2 : closed) {
        if (!(i1 > i2 && i2 > i)) continue;
        if (!in_closed(i2, i1)) continue;
        bool covered = true;
        for (VertexId v : closed) {
          if (!in_closed(v, i1) && !in_closed(v, i2)) {
            covered = false;
            break;
          }
        }
        if (covered) excluded = true;
      }
    }
    if (!excluded) c.members.push_back(i);
  }
  return c;
}

CdsReport verify_cds(const UnitDiskGraph& g, const GatewaySet& c) {
  std::vector<std::uint8_t> in_set(g.size(), 0);
  for (VertexId v : c.members) {
    if (!g.contains(v)) throw DomainError("verify_cds: member not in graph");
    in_set[v.index()] = 1;
  }
  CdsReport report;
  report.dominating = true;
  for (std::size_t k = 0; k < g.size() && report.dominating; ++k) {
    if (in_set[k]) continue;
    const auto nb = g.neighbors(VertexId::from_index(k));
    report.dominating = std::any_of(nb.begin(), nb.end(), [&](VertexId w) { return in_set[w.index()] != 0; });
  }
  const rgg::ComponentLabeling host = rgg::components(g);
  const rgg::ComponentLabeling sub = rgg::induced_components(g, c.members);
  report.components_graph = host.count;
  report.components_set = sub.count;
  std::vector<std::uint8_t> touched(host.count, 0);
  for (VertexId v : c.members) touched[host.label[v.index()]] = 1;
  const bool every_component_hit = std::all_of(touched.begin(), touched.end(), [](std::uint8_t t) { return t != 0; });
  report.component_preserving = every_component_hit && host.count == sub.count;
  return report;
}

}  // namespace udgcds::rule2
