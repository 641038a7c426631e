#pragma once

#include "moddec/moddec.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace moddec::testing {

/// Path c0 - c1 - ... - c_n with edge i joining c_i and c_{i+1}.
inline SyndromeGraph path_graph(std::size_t edges) {
  SyndromeGraph::Builder b;
  b.add_checks(edges + 1);
  for (std::size_t i = 0; i < edges; ++i) b.add_edge(static_cast<CheckId>(i), static_cast<CheckId>(i + 1));
  return std::move(b).build();
}

inline std::optional<EdgeId> edge_between(const SyndromeGraph& g, CheckId a, CheckId b) {
  for (auto e : g.incident(a))
    if (g.other_end(e, a) == b) return e;
  return std::nullopt;
}

inline EdgeSet random_edges(const SyndromeGraph& g, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  EdgeSet s(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (coin(rng)) s.set(e);
  return s;
}

/// Boundary of a unit square face: four internal edges around a 4-cycle, or
/// three edges closing through the boundary. Enumerated from the graph alone.
inline std::vector<EdgeSet> short_cycles(const SyndromeGraph& g) {
  std::vector<EdgeSet> out;
  const auto nc = static_cast<CheckId>(g.num_checks());
  for (CheckId a = 0; a < nc; ++a)
    for (auto e1 : g.incident(a)) {
      CheckId b = g.other_end(e1, a);
      if (b == kBoundary || b <= a) continue;
      for (auto e2 : g.incident(b)) {
        if (e2 == e1) continue;
        CheckId c = g.other_end(e2, b);
        if (c == kBoundary || c == a) continue;
        for (auto e3 : g.incident(c)) {
          if (e3 == e2) continue;
          CheckId dd = g.other_end(e3, c);
          if (dd == kBoundary || dd == b || dd == a) continue;
          if (auto e4 = edge_between(g, dd, a); e4 && a < c && a < dd)
            out.push_back(EdgeSet(g.num_edges(), {e1, e2, e3, *e4}));
        }
      }
    }
  // Boundary triangles: two neighbouring checks that both touch the boundary.
  for (CheckId a = 0; a < nc; ++a)
    for (auto e1 : g.incident(a)) {
      CheckId b = g.other_end(e1, a);
      if (b == kBoundary || b <= a) continue;
      for (auto da : g.incident(a)) {
        if (g.other_end(da, a) != kBoundary) continue;
        for (auto db : g.incident(b))
          if (g.other_end(db, b) == kBoundary) out.push_back(EdgeSet(g.num_edges(), {e1, da, db}));
      }
    }
  return out;
}

/// Oracle for minimum-weight logical counts by plain subset enumeration:
/// smallest w <= max_w with an undetectable error of odd membrane parity, and
/// how many there are. {-1, 0} when none exists up to max_w.
inline std::pair<int, long> brute_force_logicals(const SyndromeGraph& g, const EdgeSet& membrane, int max_w) {
  const int m = static_cast<int>(g.num_edges());
  std::vector<int> parity(g.num_checks(), 0);
  int odd_checks = 0;
  auto toggle = [&](EdgeId e) {
    for (CheckId c : {g.edge(e).a, g.edge(e).b}) {
      if (c == kBoundary) continue;
      parity[c] ^= 1;
      odd_checks += parity[c] ? 1 : -1;
    }
  };
  for (int w = 1; w <= max_w; ++w) {
    long count = 0;
    auto rec = [&](auto& self, int start, int left, int crossings) -> void {
      if (left == 0) {
        if (odd_checks == 0 && crossings % 2 == 1) ++count;
        return;
      }
      for (int e = start; e <= m - left; ++e) {
        toggle(static_cast<EdgeId>(e));
        self(self, e + 1, left - 1, crossings + (membrane.test(static_cast<std::size_t>(e)) ? 1 : 0));
        toggle(static_cast<EdgeId>(e));
      }
    };
    rec(rec, 0, w, 0);
    if (count > 0) return {w, count};
  }
  return {-1, 0};
}

/// Second oracle for larger graphs: enumerates simple boundary-to-boundary
/// paths of exactly w edges by depth-first search and deduplicates them as
/// edge sets. Valid at the minimum weight, where logicals are single paths.
inline long count_logical_paths(const SyndromeGraph& g, const EdgeSet& membrane, int w) {
  std::set<std::vector<EdgeId>> found;
  std::vector<char> on_path(g.num_checks(), 0);
  std::vector<EdgeId> edges;
  auto dfs = [&](auto& self, CheckId at, int crossings) -> void {
    if (static_cast<int>(edges.size()) == w) return;
    for (auto e : g.incident(at)) {
      CheckId nxt = g.other_end(e, at);
      int cr = crossings + (membrane.test(e) ? 1 : 0);
      if (nxt == kBoundary) {
        if (e == edges.front()) continue;
        if (static_cast<int>(edges.size()) + 1 == w && cr % 2 == 1) {
          auto key = edges;
          key.push_back(e);
          std::sort(key.begin(), key.end());
          found.insert(key);
        }
        continue;
      }
      if (on_path[nxt]) continue;
      on_path[nxt] = 1;
      edges.push_back(e);
      self(self, nxt, cr);
      edges.pop_back();
      on_path[nxt] = 0;
    }
  };
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!g.edge(e).dangling()) continue;
    CheckId start = g.edge(e).a;
    on_path[start] = 1;
    edges.push_back(e);
    dfs(dfs, start, membrane.test(e) ? 1 : 0);
    edges.pop_back();
    on_path[start] = 0;
  }
  return static_cast<long>(found.size());
}

}  // namespace moddec::testing
