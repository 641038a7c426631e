#pragma once

#include "moddec/index_set.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace moddec {

inline constexpr CheckId kBoundary = std::numeric_limits<CheckId>::max();

struct Edge {
  CheckId a = 0;
  CheckId b = kBoundary;  // kBoundary for a dangling edge

  bool dangling() const { return b == kBoundary; }
};

/// Checks are vertices, error generators are edges. Immutable once built.
class SyndromeGraph {
 public:
  class Builder {
   public:
    CheckId add_check() { return static_cast<CheckId>(num_checks_++); }

    CheckId add_checks(std::size_t n) {
      auto first = static_cast<CheckId>(num_checks_);
      num_checks_ += n;
      return first;
    }

    EdgeId add_edge(CheckId a, CheckId b) {
      if (a == kBoundary) std::swap(a, b);
      if (a == kBoundary) throw std::invalid_argument("edge needs at least one non-boundary endpoint");
      if (a >= num_checks_ || (b != kBoundary && b >= num_checks_))
        throw std::out_of_range("edge endpoint is not a known check");
      edges_.push_back({a, b});
      return static_cast<EdgeId>(edges_.size() - 1);
    }

    EdgeId add_dangling(CheckId a) { return add_edge(a, kBoundary); }

    std::size_t num_checks() const { return num_checks_; }
    std::size_t num_edges() const { return edges_.size(); }

    SyndromeGraph build() && { return SyndromeGraph(num_checks_, std::move(edges_)); }

   private:
    std::size_t num_checks_ = 0;
    std::vector<Edge> edges_;
  };

  SyndromeGraph() = default;

  SyndromeGraph(std::size_t num_checks, std::vector<Edge> edges) : num_checks_(num_checks), edges_(std::move(edges)) {
    offsets_.assign(num_checks_ + 1, 0);
    for (const auto& e : edges_) {
      if (e.a >= num_checks_ || (e.b != kBoundary && e.b >= num_checks_))
        throw std::out_of_range("edge endpoint is not a known check");
      ++offsets_[e.a + 1];
      if (!e.dangling()) ++offsets_[e.b + 1];
    }
    for (std::size_t c = 0; c < num_checks_; ++c) offsets_[c + 1] += offsets_[c];
    adjacency_.resize(offsets_.back());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto& e = edges_[id];
      adjacency_[fill[e.a]++] = id;
      if (!e.dangling()) adjacency_[fill[e.b]++] = id;
    }
  }

  std::size_t num_checks() const { return num_checks_; }
  std::size_t num_edges() const { return edges_.size(); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const EdgeId> incident(CheckId c) const {
    return {adjacency_.data() + offsets_.at(c), adjacency_.data() + offsets_.at(c + 1)};
  }

  /// The endpoint of e that is not c (kBoundary for a dangling edge).
  CheckId other_end(EdgeId e, CheckId c) const {
    const auto& ed = edges_[e];
    return ed.a == c ? ed.b : ed.a;
  }

  EdgeSet empty_edges() const { return EdgeSet(num_edges()); }
  CheckSet empty_checks() const { return CheckSet(num_checks()); }
  EdgeSet all_edges() const { return EdgeSet::all(num_edges()); }

 private:
  std::size_t num_checks_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<EdgeId> adjacency_;
};

inline void require_edge_set(const SyndromeGraph& g, const EdgeSet& s) {
  if (s.size() != g.num_edges()) throw std::invalid_argument("edge set is not sized to the graph");
}

inline void require_check_set(const SyndromeGraph& g, const CheckSet& s) {
  if (s.size() != g.num_checks()) throw std::invalid_argument("check set is not sized to the graph");
}

inline CheckSet syndrome_of(const SyndromeGraph& g, const EdgeSet& error) {
  require_edge_set(g, error);
  CheckSet out(g.num_checks());
  error.for_each([&](EdgeId e) {
    const auto& ed = g.edge(e);
    out.flip(ed.a);
    if (!ed.dangling()) out.flip(ed.b);
  });
  return out;
}

/// Incident-edge set of a check ("star"); its syndrome is always empty.
inline EdgeSet star(const SyndromeGraph& g, CheckId c) {
  EdgeSet s(g.num_edges());
  for (auto e : g.incident(c)) s.flip(e);
  return s;
}

/// Components of `error` under the relation "shares a non-boundary check".
/// Components are ordered by their smallest edge id.
inline std::vector<EdgeSet> connected_clusters(const SyndromeGraph& g, const EdgeSet& error) {
  require_edge_set(g, error);
  std::vector<EdgeSet> clusters;
  EdgeSet seen(g.num_edges());
  std::vector<EdgeId> stack;
  error.for_each([&](EdgeId start) {
    if (seen.test(start)) return;
    EdgeSet comp(g.num_edges());
    seen.set(start);
    stack.push_back(start);
    while (!stack.empty()) {
      EdgeId e = stack.back();
      stack.pop_back();
      comp.set(e);
      const auto& ed = g.edge(e);
      for (CheckId c : {ed.a, ed.b}) {
        if (c == kBoundary) continue;
        for (auto f : g.incident(c)) {
          if (error.test(f) && !seen.test(f)) {
            seen.set(f);
            stack.push_back(f);
          }
        }
      }
    }
    clusters.push_back(std::move(comp));
  });
  return clusters;
}

/// Edges within hop distance `radius` of `seed`, never entering `excluded`.
inline EdgeSet grow_region(const SyndromeGraph& g, const EdgeSet& seed, int radius, const EdgeSet& excluded) {
  require_edge_set(g, seed);
  require_edge_set(g, excluded);
  if (radius < 0) throw std::invalid_argument("grow_region: negative radius");
  if (seed.intersects(excluded)) throw std::invalid_argument("grow_region: seed intersects excluded");
  EdgeSet grown(g.num_edges());
  if (radius == 0) return grown;
  EdgeSet visited = seed | excluded;
  std::vector<EdgeId> layer = seed.ids();
  std::vector<EdgeId> next;
  std::vector<char> check_done(g.num_checks(), 0);
  for (int step = 1; step <= radius && !layer.empty(); ++step) {
    next.clear();
    for (auto e : layer) {
      const auto& ed = g.edge(e);
      for (CheckId c : {ed.a, ed.b}) {
        if (c == kBoundary || check_done[c]) continue;
        check_done[c] = 1;
        for (auto f : g.incident(c)) {
          if (visited.test(f)) continue;
          visited.set(f);
          grown.set(f);
          next.push_back(f);
        }
      }
    }
    layer.swap(next);
  }
  return grown;
}

/// Hop distance from `from` to the nearest edge of `to`, without entering
/// `excluded`. Empty when `to` is unreachable.
inline std::optional<int> region_distance(const SyndromeGraph& g, const EdgeSet& from, const EdgeSet& to,
                                          const EdgeSet& excluded) {
  require_edge_set(g, from);
  require_edge_set(g, to);
  require_edge_set(g, excluded);
  if (from.intersects(to)) return 0;
  EdgeSet visited = from | excluded;
  std::vector<EdgeId> layer = from.ids();
  std::vector<EdgeId> next;
  std::vector<char> check_done(g.num_checks(), 0);
  for (int step = 1; !layer.empty(); ++step) {
    next.clear();
    for (auto e : layer) {
      const auto& ed = g.edge(e);
      for (CheckId c : {ed.a, ed.b}) {
        if (c == kBoundary || check_done[c]) continue;
        check_done[c] = 1;
        for (auto f : g.incident(c)) {
          if (visited.test(f)) continue;
          if (to.test(f)) return step;
          visited.set(f);
          next.push_back(f);
        }
      }
    }
    layer.swap(next);
  }
  return std::nullopt;
}

struct Frontier {
  CheckSet interior;    // every incident edge inside
  CheckSet straddling;  // incident edges both inside and outside
};

inline Frontier frontier_checks(const SyndromeGraph& g, const EdgeSet& inside) {
  require_edge_set(g, inside);
  Frontier f{CheckSet(g.num_checks()), CheckSet(g.num_checks())};
  for (CheckId c = 0; c < g.num_checks(); ++c) {
    bool any_in = false;
    bool any_out = false;
    for (auto e : g.incident(c)) {
      if (inside.test(e))
        any_in = true;
      else
        any_out = true;
    }
    if (any_in && !any_out) f.interior.set(c);
    if (any_in && any_out) f.straddling.set(c);
  }
  return f;
}

}  // namespace moddec
