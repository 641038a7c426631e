#pragma once

#include "moddec/network.hpp"
#include "moddec/noise.hpp"
#include "moddec/uf_decoder.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace moddec {

enum class ScheduleKind { Sequential, ParallelVertex, EdgeVertex, Monolithic };
enum class TaskKind { Vertex, Edge, Whole };

inline const char* schedule_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::Sequential: return "sequential";
    case ScheduleKind::ParallelVertex: return "parallel-vertex";
    case ScheduleKind::EdgeVertex: return "edge-vertex";
    case ScheduleKind::Monolithic: return "monolithic";
  }
  return "?";
}

inline ScheduleKind parse_schedule(const std::string& s) {
  if (s == "sequential") return ScheduleKind::Sequential;
  if (s == "parallel-vertex") return ScheduleKind::ParallelVertex;
  if (s == "edge-vertex") return ScheduleKind::EdgeVertex;
  if (s == "monolithic") return ScheduleKind::Monolithic;
  throw std::invalid_argument("unknown schedule '" + s + "'");
}

inline const char* task_kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::Vertex: return "vertex";
    case TaskKind::Edge: return "edge";
    case TaskKind::Whole: return "whole";
  }
  return "?";
}

/// One commit region of a partition. Tasks of lower rank precede neighbouring
/// tasks of higher rank in the schedule.
struct RegionSpec {
  TaskKind kind = TaskKind::Vertex;
  EdgeSet commit;
  int rank = 0;
  int block = -1;
  int interface = -1;
  std::string label;
};

using Partition = std::vector<RegionSpec>;

struct DecodingTask {
  int id = 0;
  TaskKind kind = TaskKind::Vertex;
  std::string label;
  int rank = 0;
  EdgeSet commit;       // C_i
  EdgeSet buffer;       // B_i
  CheckSet checks;      // Σ_i
  CheckSet open_checks; // straddling towards edges the task cannot see
  std::vector<int> deps;       // direct predecessors
  std::vector<int> ancestors;  // all predecessors, ascending
};

struct DecodingPlan {
  ScheduleKind kind = ScheduleKind::Monolithic;
  Sector sector = Sector::Primal;
  int buffer_size = 0;
  std::vector<DecodingTask> tasks;
  std::vector<int> order;  // a topological order

  /// Tasks grouped by longest-path level; tasks within a level are independent.
  std::vector<std::vector<int>> levels() const {
    std::vector<int> level(tasks.size(), 0);
    int max_level = -1;
    for (int id : order) {
      for (int p : tasks[id].deps) level[id] = std::max(level[id], level[p] + 1);
      max_level = std::max(max_level, level[id]);
    }
    std::vector<std::vector<int>> out(static_cast<std::size_t>(max_level + 1));
    for (int id : order) out[level[id]].push_back(id);
    return out;
  }

  int depth() const { return static_cast<int>(levels().size()); }

  EdgeSet past(int id) const {
    EdgeSet p(tasks[id].commit.size());
    for (int a : tasks[id].ancestors) p |= tasks[a].commit;
    return p;
  }
};

// ---------------------------------------------------------------------------
// Partitions

/// One edge task per interface layer, then one vertex task per block interior.
inline Partition partition_edge_vertex(const LogicalNetwork& net, Sector s) {
  Partition part;
  for (std::size_t k = 0; k < net.connections().size(); ++k) {
    const auto& c = net.connections()[k];
    part.push_back({TaskKind::Edge, net.interface_edges(s, static_cast<int>(k)), 0, -1, static_cast<int>(k),
                    "edge:" + net.describe(c.a) + "-" + net.describe(c.b)});
  }
  for (std::size_t b = 0; b < net.blocks().size(); ++b)
    part.push_back({TaskKind::Vertex, net.block_edges(s, static_cast<int>(b)), 1, static_cast<int>(b), -1,
                    "vertex:" + net.blocks()[b].name});
  return part;
}

/// Block ranks: block order for the sequential schedule, a greedy colouring
/// of the block graph for the parallel one.
inline std::vector<int> block_ranks(const LogicalNetwork& net, ScheduleKind kind) {
  const std::size_t nb = net.blocks().size();
  std::vector<int> rank(nb, 0);
  if (kind == ScheduleKind::Sequential) {
    for (std::size_t b = 0; b < nb; ++b) rank[b] = static_cast<int>(b);
    return rank;
  }
  std::vector<std::set<int>> nbrs(nb);
  for (const auto& c : net.connections()) {
    if (c.a.block == c.b.block) continue;
    nbrs[c.a.block].insert(c.b.block);
    nbrs[c.b.block].insert(c.a.block);
  }
  std::vector<int> colour(nb, -1);
  for (std::size_t b = 0; b < nb; ++b) {
    std::set<int> used;
    for (int o : nbrs[b])
      if (colour[o] >= 0) used.insert(colour[o]);
    int col = 0;
    while (used.count(col)) ++col;
    colour[b] = col;
  }
  return colour;
}

/// Vertex-only partition: each interface is committed by the earlier of its two blocks.
inline Partition partition_vertex(const LogicalNetwork& net, Sector s, const std::vector<int>& rank) {
  Partition part;
  for (std::size_t b = 0; b < net.blocks().size(); ++b)
    part.push_back({TaskKind::Vertex, net.block_edges(s, static_cast<int>(b)), rank[b], static_cast<int>(b), -1,
                    "vertex:" + net.blocks()[b].name});
  for (std::size_t k = 0; k < net.connections().size(); ++k) {
    const auto& c = net.connections()[k];
    int owner = c.a.block;
    if (rank[c.b.block] < rank[c.a.block] || (rank[c.b.block] == rank[c.a.block] && c.b.block < c.a.block))
      owner = c.b.block;
    part[owner].commit |= net.interface_edges(s, static_cast<int>(k));
  }
  return part;
}

inline Partition partition_monolithic(const SyndromeGraph& g) {
  return {{TaskKind::Whole, g.all_edges(), 0, -1, -1, "whole"}};
}

inline Partition make_partition(const LogicalNetwork& net, Sector s, ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::EdgeVertex: return partition_edge_vertex(net, s);
    case ScheduleKind::Monolithic: return partition_monolithic(net.graph(s));
    default: return partition_vertex(net, s, block_ranks(net, kind));
  }
}

// ---------------------------------------------------------------------------
// Scheduling

/// Orders every pair of neighbouring regions (regions whose edges meet at a
/// check) from lower to higher rank. Neighbours of equal rank cannot be
/// ordered and are rejected.
inline DecodingPlan build_schedule(const SyndromeGraph& g, const Partition& part, ScheduleKind kind, Sector s) {
  if (part.empty()) throw std::invalid_argument("build_schedule: empty partition");
  const std::size_t nt = part.size();
  std::vector<int> owner(g.num_edges(), -1);
  for (std::size_t i = 0; i < nt; ++i) {
    require_edge_set(g, part[i].commit);
    part[i].commit.for_each([&](EdgeId e) {
      if (owner[e] >= 0) throw std::invalid_argument("build_schedule: commit regions overlap");
      owner[e] = static_cast<int>(i);
    });
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (owner[e] < 0) throw std::invalid_argument("build_schedule: commit regions do not cover every edge");

  std::vector<std::set<int>> preds(nt);
  std::vector<int> seen;
  for (CheckId c = 0; c < g.num_checks(); ++c) {
    seen.clear();
    for (auto e : g.incident(c)) seen.push_back(owner[e]);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (std::size_t x = 0; x < seen.size(); ++x)
      for (std::size_t y = x + 1; y < seen.size(); ++y) {
        int i = seen[x], j = seen[y];
        if (part[i].rank == part[j].rank)
          throw std::invalid_argument("build_schedule: neighbouring regions '" + part[i].label + "' and '" +
                                      part[j].label + "' cannot be ordered");
        if (part[i].rank < part[j].rank)
          preds[j].insert(i);
        else
          preds[i].insert(j);
      }
  }

  DecodingPlan plan;
  plan.kind = kind;
  plan.sector = s;
  for (std::size_t i = 0; i < nt; ++i) {
    DecodingTask t;
    t.id = static_cast<int>(i);
    t.kind = part[i].kind;
    t.label = part[i].label;
    t.rank = part[i].rank;
    t.commit = part[i].commit;
    t.buffer = EdgeSet(g.num_edges());
    t.deps.assign(preds[i].begin(), preds[i].end());
    plan.tasks.push_back(std::move(t));
  }
  plan.order.resize(nt);
  for (std::size_t i = 0; i < nt; ++i) plan.order[i] = static_cast<int>(i);
  std::stable_sort(plan.order.begin(), plan.order.end(),
                   [&](int a, int b) { return plan.tasks[a].rank < plan.tasks[b].rank; });
  std::vector<std::set<int>> anc(nt);
  for (int id : plan.order)
    for (int p : plan.tasks[id].deps) {
      anc[id].insert(p);
      anc[id].insert(anc[p].begin(), anc[p].end());
    }
  for (std::size_t i = 0; i < nt; ++i) plan.tasks[i].ancestors.assign(anc[i].begin(), anc[i].end());
  return plan;
}

/// Grows each task's buffer to radius b around its commit, blocked by the
/// commits of its ancestors, and derives Σ_i and the open checks.
inline DecodingPlan grow_buffers(DecodingPlan plan, const SyndromeGraph& g, int b) {
  if (b < 0) throw std::invalid_argument("buffer size must be >= 0");
  plan.buffer_size = b;
  for (auto& t : plan.tasks) {
    EdgeSet past = plan.past(t.id);
    t.buffer = grow_region(g, t.commit, b, past);
    EdgeSet visible = t.commit | t.buffer;
    Frontier all = frontier_checks(g, past | visible);
    Frontier p = frontier_checks(g, past);
    Frontier v = frontier_checks(g, visible);
    t.checks = all.interior - p.interior;
    t.open_checks = all.straddling & (v.interior | v.straddling);
  }
  return plan;
}

inline DecodingPlan make_plan(const LogicalNetwork& net, Sector s, ScheduleKind kind, int b) {
  const auto& g = net.graph(s);
  return grow_buffers(build_schedule(g, make_partition(net, s, kind), kind, s), g, b);
}

struct TaskBuffering {
  int task = 0;
  std::optional<int> distance;  // commit-to-future hop distance; empty when the future is unreachable
  bool pass = true;
};

struct BufferingReport {
  int d = 0;
  bool pass = true;
  std::vector<TaskBuffering> tasks;
};

/// Sufficient form of the buffering condition: every commit region sits at
/// least d hops from the edges its task cannot see, with past commits as barriers.
inline BufferingReport check_buffering_condition(const DecodingPlan& plan, const SyndromeGraph& g, int d) {
  BufferingReport rep;
  rep.d = d;
  for (const auto& t : plan.tasks) {
    EdgeSet past = plan.past(t.id);
    EdgeSet future = g.all_edges() - (past | t.commit | t.buffer);
    TaskBuffering tb;
    tb.task = t.id;
    if (!future.empty()) tb.distance = region_distance(g, t.commit, future, past);
    tb.pass = !tb.distance || *tb.distance >= d;
    rep.pass = rep.pass && tb.pass;
    rep.tasks.push_back(tb);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Execution

struct RunRecord {
  std::vector<std::vector<EdgeId>> task_commits;  // κ_i as sorted edge ids
  EdgeSet kappa;                                  // XOR of all κ_i
  std::vector<char> aborted;                      // per task
  bool any_abort = false;
  bool syndrome_consistent = true;  // ∂κ = ∂ε (checked when no task aborted)
  std::vector<char> flips;          // per membrane, aborts included
};

/// Executes one plan on many error samples. Holds per-task data in the form
/// the inner loop wants and one decoder workspace per concurrent slot.
class PlanRunner {
 public:
  PlanRunner(const SyndromeGraph& g, DecodingPlan plan, std::vector<EdgeSet> membranes)
      : g_(&g), plan_(std::move(plan)), membranes_(std::move(membranes)) {
    const std::size_t ne = g.num_edges();
    words_ = std::max<std::size_t>(1, (membranes_.size() + 63) / 64);
    edge_mask_.assign(ne * words_, 0);
    for (std::size_t m = 0; m < membranes_.size(); ++m) {
      require_edge_set(g, membranes_[m]);
      membranes_[m].for_each([&](EdgeId e) { edge_mask_[e * words_ + m / 64] |= 1ULL << (m % 64); });
    }
    for (const auto& t : plan_.tasks) {
      TaskData td;
      td.active = t.commit | t.buffer;
      td.region_mask.assign(words_, 0);
      for (std::size_t m = 0; m < membranes_.size(); ++m)
        if (membranes_[m].intersects(td.active)) td.region_mask[m / 64] |= 1ULL << (m % 64);
      tasks_.push_back(std::move(td));
    }
    workspaces_.push_back(std::make_unique<DecoderWorkspace>(g));
    scratch_.push_back(Scratch(g));
  }

  const DecodingPlan& plan() const { return plan_; }
  const SyndromeGraph& graph() const { return *g_; }
  std::size_t num_membranes() const { return membranes_.size(); }

  /// Runs all tasks on a sorted error list. With `concurrent`, independent
  /// tasks of each DAG level run on separate threads; results are identical.
  RunRecord run(const std::vector<EdgeId>& error, bool concurrent = false) {
    RunRecord rec;
    const std::size_t nt = plan_.tasks.size();
    rec.task_commits.assign(nt, {});
    rec.aborted.assign(nt, 0);
    if (!concurrent) {
      for (int id : plan_.order) run_task(id, error, rec, 0);
    } else {
      for (const auto& level : plan_.levels()) {
        while (workspaces_.size() < level.size()) {
          workspaces_.push_back(std::make_unique<DecoderWorkspace>(*g_));
          scratch_.push_back(Scratch(*g_));
        }
        std::vector<std::future<void>> jobs;
        for (std::size_t k = 0; k < level.size(); ++k)
          jobs.push_back(std::async(std::launch::async, [&, k] { run_task(level[k], error, rec, k); }));
        for (auto& j : jobs) j.get();
      }
    }
    finish(error, rec);
    return rec;
  }

 private:
  struct TaskData {
    EdgeSet active;
    std::vector<std::uint64_t> region_mask;
  };

  struct Scratch {
    explicit Scratch(const SyndromeGraph& g) : parity(g.num_checks(), 0) {}
    std::vector<std::uint8_t> parity;
    std::vector<CheckId> touched, defects;
    std::vector<EdgeId> mu;
  };

  void run_task(int id, const std::vector<EdgeId>& error, RunRecord& rec, std::size_t slot) {
    const auto& t = plan_.tasks[id];
    auto& sc = scratch_[slot];
    auto toggle = [&](EdgeId e) {
      const auto& ed = g_->edge(e);
      for (CheckId c : {ed.a, ed.b}) {
        if (c == kBoundary || !t.checks.bits().test(c)) continue;
        if (!sc.parity[c]) sc.touched.push_back(c);
        sc.parity[c] ^= 1;
      }
    };
    for (auto e : error) toggle(e);
    for (int a : t.ancestors)
      for (auto e : rec.task_commits[a]) toggle(e);
    sc.defects.clear();
    for (auto c : sc.touched) {
      if (sc.parity[c]) sc.defects.push_back(c);
      sc.parity[c] = 0;
    }
    sc.touched.clear();
    std::sort(sc.defects.begin(), sc.defects.end());
    auto status = workspaces_[slot]->decode(sc.defects, &tasks_[id].active, &t.open_checks, sc.mu);
    auto& out = rec.task_commits[id];
    out.clear();
    if (status == DecodeStatus::Abort) {
      rec.aborted[id] = 1;
      return;
    }
    for (auto e : sc.mu)
      if (t.commit.bits().test(e)) out.push_back(e);
  }

  void finish(const std::vector<EdgeId>& error, RunRecord& rec) {
    const std::size_t ne = g_->num_edges();
    rec.kappa = EdgeSet(ne);
    for (const auto& k : rec.task_commits)
      for (auto e : k) rec.kappa.flip(e);
    EdgeSet residual = EdgeSet::from_ids(ne, error) ^ rec.kappa;

    std::vector<std::uint64_t> acc(words_, 0);
    residual.for_each([&](EdgeId e) {
      for (std::size_t w = 0; w < words_; ++w) acc[w] ^= edge_mask_[e * words_ + w];
    });
    for (std::size_t i = 0; i < rec.aborted.size(); ++i) {
      if (!rec.aborted[i]) continue;
      rec.any_abort = true;
      for (std::size_t w = 0; w < words_; ++w) acc[w] |= tasks_[i].region_mask[w];
    }
    rec.flips.assign(membranes_.size(), 0);
    for (std::size_t m = 0; m < membranes_.size(); ++m) rec.flips[m] = (acc[m / 64] >> (m % 64)) & 1ULL;
    rec.syndrome_consistent = rec.any_abort || syndrome_of(*g_, residual).empty();
  }

  const SyndromeGraph* g_;
  DecodingPlan plan_;
  std::vector<EdgeSet> membranes_;
  std::size_t words_ = 1;
  std::vector<std::uint64_t> edge_mask_;
  std::vector<TaskData> tasks_;
  std::vector<std::unique_ptr<DecoderWorkspace>> workspaces_;
  std::vector<Scratch> scratch_;
};

inline std::vector<EdgeSet> membrane_indicators(const LogicalNetwork& net, Sector s) {
  std::vector<EdgeSet> out;
  for (const auto* m : net.globals(s)) out.push_back(m->indicator);
  return out;
}

inline RunRecord run_plan(const SyndromeGraph& g, const DecodingPlan& plan, const EdgeSet& error,
                          const std::vector<EdgeSet>& membranes = {}) {
  require_edge_set(g, error);
  PlanRunner runner(g, plan, membranes);
  return runner.run(error.ids());
}

struct Counterexample {
  std::vector<EdgeId> error;
  std::vector<int> flipped;  // membrane indices
  bool aborted = false;
};

struct AuditResult {
  std::size_t errors_checked = 0;
  std::size_t failures = 0;
  std::size_t inconsistent = 0;  // trials violating ∂κ = ∂ε
  std::vector<Counterexample> counterexamples;  // the first `keep` failures
};

/// Runs the plan on every error of weight <= max_weight and collects those
/// that flip a membrane or abort.
inline AuditResult soundness_audit(const SyndromeGraph& g, const DecodingPlan& plan,
                                   const std::vector<EdgeSet>& membranes, int max_weight, double cap = 5e7,
                                   std::size_t keep = 100) {
  PlanRunner runner(g, plan, membranes);
  AuditResult res;
  enumerate_errors(
      g, max_weight,
      [&](const std::vector<EdgeId>& err) {
        auto rec = runner.run(err);
        ++res.errors_checked;
        if (!rec.syndrome_consistent) ++res.inconsistent;
        bool fail = rec.any_abort;
        std::vector<int> flipped;
        for (std::size_t m = 0; m < rec.flips.size(); ++m)
          if (rec.flips[m]) flipped.push_back(static_cast<int>(m));
        fail = fail || !flipped.empty();
        if (!fail) return;
        ++res.failures;
        if (res.counterexamples.size() < keep) res.counterexamples.push_back({err, flipped, rec.any_abort});
      },
      cap);
  return res;
}

}  // namespace moddec
