#pragma once

#include "moddec/syndrome_graph.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace moddec {

enum class DecodeStatus { Ok, Abort };

/// Union-find decoder state for one graph. Reusable across calls; every call
/// resets exactly what it touched. Not safe for concurrent use.
class DecoderWorkspace {
 public:
  explicit DecoderWorkspace(const SyndromeGraph& g)
      : g_(&g),
        boundary_(static_cast<std::uint32_t>(g.num_checks())),
        parent_(g.num_checks() + 1, kNone),
        size_(g.num_checks() + 1, 0),
        odd_(g.num_checks() + 1, 0),
        at_boundary_(g.num_checks() + 1, 0),
        defect_(g.num_checks() + 1, 0),
        visited_(g.num_checks() + 1, 0),
        tree_edge_(g.num_checks() + 1, 0),
        tree_parent_(g.num_checks() + 1, 0),
        adj_head_(g.num_checks() + 1, kNone),
        members_(g.num_checks() + 1),
        growth_(g.num_edges(), 0) {}

  const SyndromeGraph& graph() const { return *g_; }

  /// Decodes the defect list over `active` edges (all edges when null), with
  /// `open` checks (none when null) merged into the virtual boundary. Defects
  /// must not lie on open checks. On Ok, `correction` is a sorted edge list
  /// whose syndrome matches the defects on every non-open check.
  DecodeStatus decode(std::span<const CheckId> defects, const EdgeSet* active, const CheckSet* open,
                      std::vector<EdgeId>& correction) {
    correction.clear();
    if (active) require_edge_set(*g_, *active);
    if (open) require_check_set(*g_, *open);
    active_ = active;
    open_ = open;
    init_node(boundary_);
    at_boundary_[boundary_] = 1;

    for (CheckId c : defects) {
      if (c >= g_->num_checks()) throw std::out_of_range("defect is not a check of the graph");
      if (open && open->test(c)) throw std::invalid_argument("defect lies on an open check");
      if (parent_[c] == kNone) init_node(c);
      defect_[c] ^= 1;
      odd_[c] ^= 1;
    }
    candidates_.assign(defects.begin(), defects.end());

    DecodeStatus status = grow();
    if (status == DecodeStatus::Ok) peel(correction);
    reset();
    return status;
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffU;

  bool is_active(EdgeId e) const { return active_ == nullptr || active_->bits().test(e); }

  std::uint32_t node_of(CheckId c) const {
    if (c == kBoundary) return boundary_;
    if (open_ && open_->bits().test(c)) return boundary_;
    return c;
  }

  void init_node(std::uint32_t v) {
    parent_[v] = v;
    size_[v] = 1;
    odd_[v] = 0;
    at_boundary_[v] = 0;
    members_[v].clear();
    if (v != boundary_) members_[v].push_back(v);
    touched_nodes_.push_back(v);
  }

  std::uint32_t find(std::uint32_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    odd_[a] ^= odd_[b];
    at_boundary_[a] |= at_boundary_[b];
    auto& ma = members_[a];
    auto& mb = members_[b];
    ma.insert(ma.end(), mb.begin(), mb.end());
    mb.clear();
  }

  DecodeStatus grow() {
    while (true) {
      odd_roots_.clear();
      for (auto c : candidates_) {
        auto r = find(c);
        if (odd_[r] && !at_boundary_[r]) odd_roots_.push_back(r);
      }
      if (odd_roots_.empty()) return DecodeStatus::Ok;
      std::sort(odd_roots_.begin(), odd_roots_.end());
      odd_roots_.erase(std::unique(odd_roots_.begin(), odd_roots_.end()), odd_roots_.end());
      candidates_ = odd_roots_;

      fused_round_.clear();
      for (auto r : odd_roots_) {
        bool grew = false;
        for (auto v : members_[r]) {
          for (auto e : g_->incident(v)) {
            if (growth_[e] >= 2 || !is_active(e)) continue;
            auto u = node_of(g_->other_end(e, v));
            if (u != boundary_ && parent_[u] != kNone && find(u) == r) continue;
            if (growth_[e] == 0) touched_edges_.push_back(e);
            grew = true;
            if (++growth_[e] == 2) fused_round_.push_back(e);
          }
        }
        if (!grew) return DecodeStatus::Abort;
      }
      for (auto e : fused_round_) {
        const auto& ed = g_->edge(e);
        auto a = node_of(ed.a);
        auto b = node_of(ed.b);
        if (parent_[a] == kNone) init_node(a);
        if (parent_[b] == kNone) init_node(b);
        fused_.push_back(e);
        unite(a, b);
      }
    }
  }

  void peel(std::vector<EdgeId>& correction) {
    // Spanning forest of the fused edges, rooted at the boundary first.
    adj_next_.assign(2 * fused_.size(), kNone);
    adj_edge_.assign(2 * fused_.size(), 0);
    adj_to_.assign(2 * fused_.size(), 0);
    for (std::size_t k = 0; k < fused_.size(); ++k) {
      const auto& ed = g_->edge(fused_[k]);
      std::uint32_t ends[2] = {node_of(ed.a), node_of(ed.b)};
      for (int s = 0; s < 2; ++s) {
        auto slot = static_cast<std::uint32_t>(2 * k + s);
        adj_edge_[slot] = fused_[k];
        adj_to_[slot] = ends[1 - s];
        adj_next_[slot] = adj_head_[ends[s]];
        adj_head_[ends[s]] = slot;
      }
    }
    order_.clear();
    roots_.clear();
    roots_.push_back(boundary_);
    for (auto v : touched_nodes_)
      if (v != boundary_) roots_.push_back(v);
    std::sort(roots_.begin() + 1, roots_.end());
    for (auto root : roots_) {
      if (visited_[root]) continue;
      visited_[root] = 1;
      tree_parent_[root] = kNone;
      std::size_t head = order_.size();
      order_.push_back(root);
      while (head < order_.size()) {
        auto v = order_[head++];
        for (auto slot = adj_head_[v]; slot != kNone; slot = adj_next_[slot]) {
          auto u = adj_to_[slot];
          if (visited_[u]) continue;
          visited_[u] = 1;
          tree_parent_[u] = v;
          tree_edge_[u] = adj_edge_[slot];
          order_.push_back(u);
        }
      }
    }
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      auto v = *it;
      if (tree_parent_[v] == kNone || !defect_[v]) continue;
      correction.push_back(tree_edge_[v]);
      defect_[v] = 0;
      defect_[tree_parent_[v]] ^= 1;
    }
    for (auto v : order_)
      if (v != boundary_ && tree_parent_[v] == kNone && defect_[v])
        throw std::logic_error("union-find peeling left an unmatched defect");
    std::sort(correction.begin(), correction.end());
  }

  void reset() {
    for (auto v : touched_nodes_) {
      parent_[v] = kNone;
      size_[v] = 0;
      odd_[v] = 0;
      at_boundary_[v] = 0;
      defect_[v] = 0;
      visited_[v] = 0;
      adj_head_[v] = kNone;
      members_[v].clear();
    }
    for (auto e : touched_edges_) growth_[e] = 0;
    touched_nodes_.clear();
    touched_edges_.clear();
    fused_.clear();
    candidates_.clear();
  }

  const SyndromeGraph* g_;
  const EdgeSet* active_ = nullptr;
  const CheckSet* open_ = nullptr;
  std::uint32_t boundary_;
  std::vector<std::uint32_t> parent_, size_;
  std::vector<std::uint8_t> odd_, at_boundary_, defect_, visited_;
  std::vector<EdgeId> tree_edge_;
  std::vector<std::uint32_t> tree_parent_, adj_head_;
  std::vector<std::vector<std::uint32_t>> members_;
  std::vector<std::uint8_t> growth_;
  std::vector<std::uint32_t> touched_nodes_, candidates_, odd_roots_, order_, roots_;
  std::vector<EdgeId> touched_edges_, fused_, fused_round_;
  std::vector<std::uint32_t> adj_next_, adj_to_;
  std::vector<EdgeId> adj_edge_;
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Ok;
  EdgeSet correction;
};

/// One-shot decode of a syndrome set. `active` restricts the usable edges.
inline DecodeResult decode(const SyndromeGraph& g, const CheckSet& syndrome, const EdgeSet* active = nullptr) {
  require_check_set(g, syndrome);
  DecoderWorkspace ws(g);
  auto defects = syndrome.ids();
  std::vector<EdgeId> corr;
  DecodeResult r;
  r.status = ws.decode(defects, active, nullptr, corr);
  r.correction = EdgeSet::from_ids(g.num_edges(), corr);
  return r;
}

}  // namespace moddec
