#pragma once

#include "moddec/syndrome_graph.hpp"

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace moddec {

struct NoiseModel {
  double p_error = 0.0;
  std::uint64_t seed = 0;
};

class EnumerationCapExceeded : public std::runtime_error {
 public:
  explicit EnumerationCapExceeded(double count)
      : std::runtime_error("enumeration would visit " + format_count(count) + " errors, above the configured cap"),
        count_(count) {}
  double count() const { return count_; }

 private:
  static std::string format_count(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.0f", c);
    return buf;
  }
  double count_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Key of the random stream for one (seed, trial, stream) triple. Trials never
/// share state, so any execution order yields the same samples.
inline std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  return detail::splitmix64(detail::splitmix64(detail::splitmix64(seed) ^ trial) ^ (stream * 0x632be59bd9b4e019ULL));
}

/// Sorted ids of flipped edges among `num_edges`, each flipped independently
/// with probability p. Uses geometric gaps between flips.
inline std::vector<EdgeId> sample_sparse(std::size_t num_edges, const NoiseModel& model, std::uint64_t trial,
                                         std::uint64_t stream = 0) {
  if (!(model.p_error >= 0.0 && model.p_error <= 1.0)) throw std::invalid_argument("p_error must lie in [0, 1]");
  std::vector<EdgeId> out;
  if (model.p_error == 0.0 || num_edges == 0) return out;
  if (model.p_error == 1.0) {
    out.resize(num_edges);
    for (std::size_t e = 0; e < num_edges; ++e) out[e] = static_cast<EdgeId>(e);
    return out;
  }
  std::mt19937_64 rng(trial_key(model.seed, trial, stream));
  std::geometric_distribution<std::uint64_t> gap(model.p_error);
  std::uint64_t pos = gap(rng);
  while (pos < num_edges) {
    out.push_back(static_cast<EdgeId>(pos));
    std::uint64_t step = gap(rng);
    if (step >= num_edges - pos - 1) break;
    pos += 1 + step;
  }
  return out;
}

inline EdgeSet sample(const SyndromeGraph& g, const NoiseModel& model, std::uint64_t trial, std::uint64_t stream = 0) {
  return EdgeSet::from_ids(g.num_edges(), sample_sparse(g.num_edges(), model, trial, stream));
}

/// Number of subsets of size <= max_weight of an m-element set.
inline double count_errors(std::size_t m, int max_weight) {
  double total = 0.0;
  double term = 1.0;
  for (int k = 0; k <= max_weight && static_cast<std::size_t>(k) <= m; ++k) {
    total += term;
    term = term * static_cast<double>(m - k) / static_cast<double>(k + 1);
  }
  return total;
}

/// Visits every error of weight <= max_weight supported on `restrict`, once
/// each, as a sorted id list: first the empty error, then by weight, then
/// lexicographically. Refuses when the count exceeds `cap`.
template <class Visit>
void enumerate_errors(const SyndromeGraph& g, int max_weight, const EdgeSet& restrict, Visit&& visit,
                      double cap = 5e7) {
  require_edge_set(g, restrict);
  if (max_weight < 0) throw std::invalid_argument("max_weight must be >= 0");
  const auto pool = restrict.ids();
  const double count = count_errors(pool.size(), max_weight);
  if (count > cap) throw EnumerationCapExceeded(count);
  std::vector<EdgeId> current;
  visit(static_cast<const std::vector<EdgeId>&>(current));
  const int m = static_cast<int>(pool.size());
  for (int w = 1; w <= max_weight && w <= m; ++w) {
    std::vector<int> idx(w);
    for (int i = 0; i < w; ++i) idx[i] = i;
    while (true) {
      current.resize(w);
      for (int i = 0; i < w; ++i) current[i] = pool[idx[i]];
      visit(static_cast<const std::vector<EdgeId>&>(current));
      int i = w - 1;
      while (i >= 0 && idx[i] == m - w + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < w; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

template <class Visit>
void enumerate_errors(const SyndromeGraph& g, int max_weight, Visit&& visit, double cap = 5e7) {
  enumerate_errors(g, max_weight, g.all_edges(), std::forward<Visit>(visit), cap);
}

}  // namespace moddec
