#pragma once

#include "moddec/modular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace moddec {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z = 1.96) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: zero trials");
  if (failures > trials) throw std::invalid_argument("wilson_interval: failures exceed trials");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct MembraneLer {
  std::string membrane;
  Sector sector = Sector::Primal;
  bool is_meta_check = false;
  int crossed_interfaces = 0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double ler = 0.0;
  Interval ci;

  /// Binomial standard error of the point estimate.
  double sigma() const { return trials ? std::sqrt(ler * (1.0 - ler) / static_cast<double>(trials)) : 0.0; }
};

struct LerReport {
  std::string network;
  int d = 0;
  int b = 0;
  ScheduleKind schedule = ScheduleKind::Monolithic;
  double p = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t aborted_trials = 0;       // summed over sectors
  std::uint64_t inconsistent_trials = 0;  // ∂κ != ∂ε, must stay zero
  std::vector<MembraneLer> membranes;

  const MembraneLer& at(const std::string& name) const {
    for (const auto& m : membranes)
      if (m.membrane == name) return m;
    throw std::out_of_range("no membrane named " + name);
  }
};

struct PlanSpec {
  ScheduleKind kind = ScheduleKind::EdgeVertex;
  int b = 0;
};

struct McOptions {
  std::vector<Sector> sectors{Sector::Primal, Sector::Dual};
  unsigned jobs = 1;
};

inline unsigned default_jobs() { return std::max(1U, std::thread::hardware_concurrency()); }

/// Per-membrane logical error rates. Trial t of sector s always sees the
/// same error sample, so reports depend only on the seed, never on `jobs`.
inline LerReport run_monte_carlo(const LogicalNetwork& net, const PlanSpec& spec, double p, std::uint64_t trials,
                                 std::uint64_t seed, const McOptions& opts = {}) {
  if (trials < 1) throw std::invalid_argument("run_monte_carlo: trials must be >= 1");
  LerReport rep;
  rep.network = net.id;
  rep.d = net.distance();
  rep.b = spec.b;
  rep.schedule = spec.kind;
  rep.p = p;
  rep.trials = trials;
  rep.seed = seed;
  const NoiseModel model{p, seed};
  for (auto s : opts.sectors) {
    const auto& g = net.graph(s);
    const auto plan = make_plan(net, s, spec.kind, spec.b);
    const auto membranes = membrane_indicators(net, s);
    const std::size_t nm = membranes.size();
    const unsigned jobs = std::max(1U, std::min<unsigned>(opts.jobs, static_cast<unsigned>(trials)));

    struct Counts {
      std::vector<std::uint64_t> failures;
      std::uint64_t aborted = 0;
      std::uint64_t inconsistent = 0;
    };
    std::vector<Counts> counts(jobs);
    auto worker = [&](unsigned j) {
      PlanRunner runner(g, plan, membranes);
      Counts& c = counts[j];
      c.failures.assign(nm, 0);
      const std::uint64_t lo = trials * j / jobs;
      const std::uint64_t hi = trials * (j + 1) / jobs;
      for (std::uint64_t t = lo; t < hi; ++t) {
        auto err = sample_sparse(g.num_edges(), model, t, static_cast<std::uint64_t>(s));
        auto rec = runner.run(err);
        for (std::size_t m = 0; m < nm; ++m) c.failures[m] += rec.flips[m] ? 1 : 0;
        c.aborted += rec.any_abort ? 1 : 0;
        c.inconsistent += rec.syndrome_consistent ? 0 : 1;
      }
    };
    if (jobs == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
      for (auto& th : pool) th.join();
    }

    const auto globals = net.globals(s);
    for (std::size_t m = 0; m < nm; ++m) {
      MembraneLer ml;
      ml.membrane = globals[m]->name;
      ml.sector = s;
      ml.is_meta_check = globals[m]->is_meta_check;
      ml.crossed_interfaces = globals[m]->crossed_interfaces;
      ml.trials = trials;
      for (const auto& c : counts) ml.failures += c.failures[m];
      ml.ler = static_cast<double>(ml.failures) / static_cast<double>(trials);
      ml.ci = wilson_interval(ml.failures, trials);
      rep.membranes.push_back(ml);
    }
    for (const auto& c : counts) {
      rep.aborted_trials += c.aborted;
      rep.inconsistent_trials += c.inconsistent;
    }
  }
  return rep;
}

/// One report per buffer size, all sharing the seed so the error samples are paired.
inline std::vector<LerReport> sweep_buffer(const LogicalNetwork& net, ScheduleKind kind, double p,
                                           const std::vector<int>& buffers, std::uint64_t trials, std::uint64_t seed,
                                           const McOptions& opts = {}) {
  std::vector<LerReport> out;
  for (int b : buffers) out.push_back(run_monte_carlo(net, {kind, b}, p, trials, seed, opts));
  return out;
}

// ---------------------------------------------------------------------------
// Decay fits

struct DecayFit {
  double alpha = 0.0;
  double beta = 0.0;
  double beta_stderr = 0.0;     // from the weights when given, else from the residual scatter
  std::vector<double> residuals;  // log-space: ln LER - ln(alpha e^{-beta L})
};

/// Least squares of ln LER = ln alpha - beta L. `sigmas` are optional
/// standard errors of ln LER used as weights.
inline DecayFit fit_logical_decay(const std::vector<std::pair<double, double>>& points,
                                  const std::vector<double>& sigmas = {}) {
  if (points.size() < 2) throw std::invalid_argument("fit_logical_decay: needs at least two points");
  if (!sigmas.empty() && sigmas.size() != points.size())
    throw std::invalid_argument("fit_logical_decay: one sigma per point");
  double sw = 0, sx = 0, sy = 0;
  std::vector<double> w(points.size(), 1.0), y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].second > 0.0)) throw std::invalid_argument("fit_logical_decay: LER must be positive");
    y[i] = std::log(points[i].second);
    if (!sigmas.empty()) w[i] = 1.0 / (sigmas[i] * sigmas[i]);
    sw += w[i];
    sx += w[i] * points[i].first;
    sy += w[i] * y[i];
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sxx += w[i] * (points[i].first - xbar) * (points[i].first - xbar);
    sxy += w[i] * (points[i].first - xbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_logical_decay: all L values coincide");
  DecayFit fit;
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  fit.beta = -slope;
  fit.alpha = std::exp(intercept);
  double ssr = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double r = y[i] - (intercept + slope * points[i].first);
    fit.residuals.push_back(r);
    ssr += w[i] * r * r;
  }
  if (!sigmas.empty())
    fit.beta_stderr = std::sqrt(1.0 / sxx);
  else
    fit.beta_stderr = points.size() > 2 ? std::sqrt(ssr / static_cast<double>(points.size() - 2) / sxx) : 0.0;
  return fit;
}

// ---------------------------------------------------------------------------
// Membrane size

struct MembraneSize {
  int weight = -1;     // minimum weight of an undetectable error flipping the membrane; -1 if none
  double count = 0.0;  // number of such minimum-weight errors
};

/// Shortest closed walks through the boundary that cross the membrane an odd
/// number of times, found by BFS on (check or boundary) x (crossing parity).
/// Each minimal error is a cycle through the boundary and is met once per
/// direction, hence the halving.
inline MembraneSize membrane_size(const SyndromeGraph& g, const EdgeSet& membrane,
                                  std::size_t state_cap = 50'000'000) {
  require_edge_set(g, membrane);
  const std::size_t nodes = g.num_checks() + 1;
  if (2 * nodes > state_cap) throw std::length_error("membrane_size: state space above cap");
  const auto boundary = static_cast<std::uint32_t>(g.num_checks());
  std::vector<int> dist(2 * nodes, -1);
  std::vector<double> ways(2 * nodes, 0.0);
  std::vector<std::uint32_t> boundary_edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (g.edge(e).dangling()) boundary_edges.push_back(e);

  auto state = [](std::uint32_t node, int parity) { return 2 * node + static_cast<std::uint32_t>(parity); };
  const std::uint32_t start = state(boundary, 0);
  const std::uint32_t goal = state(boundary, 1);
  dist[start] = 0;
  ways[start] = 1.0;
  std::vector<std::uint32_t> queue{start};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t cur = queue[head];
    if (cur == goal) continue;
    const std::uint32_t node = cur / 2;
    const int parity = static_cast<int>(cur % 2);
    if (dist[goal] >= 0 && dist[cur] >= dist[goal]) break;
    auto relax = [&](EdgeId e, std::uint32_t to) {
      std::uint32_t next = state(to, parity ^ (membrane.bits().test(e) ? 1 : 0));
      if (to == boundary && next == start) return;
      if (dist[next] < 0) {
        dist[next] = dist[cur] + 1;
        queue.push_back(next);
      }
      if (dist[next] == dist[cur] + 1) ways[next] += ways[cur];
    };
    if (node == boundary) {
      for (auto e : boundary_edges) relax(e, g.edge(e).a);
    } else {
      for (auto e : g.incident(node)) {
        CheckId other = g.other_end(e, node);
        relax(e, other == kBoundary ? boundary : other);
      }
    }
  }
  MembraneSize out;
  if (dist[goal] >= 0) {
    out.weight = dist[goal];
    out.count = ways[goal] / 2.0;
  }
  return out;
}

inline MembraneSize membrane_size(const LogicalNetwork& net, const GlobalMembrane& m) {
  return membrane_size(net.graph(m.sector), m.indicator);
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length series");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  auto rx = ranks(x);
  auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Size ansatz: LER(M) ≈ p_unit * size(M) with p_unit = Σ LER / Σ size.
inline std::vector<double> size_ansatz(const std::vector<double>& lers, const std::vector<double>& sizes) {
  if (lers.size() != sizes.size()) throw std::invalid_argument("size_ansatz: length mismatch");
  const double total_size = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  const double p_unit = total_size > 0 ? std::accumulate(lers.begin(), lers.end(), 0.0) / total_size : 0.0;
  std::vector<double> out;
  for (double s : sizes) out.push_back(p_unit * s);
  return out;
}

}  // namespace moddec
