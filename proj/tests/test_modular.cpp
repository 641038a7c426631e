#include "support.hpp"

#include <gtest/gtest.h>

namespace moddec {
namespace {

// Check id of lattice site (x, y, t) inside identity block `block` of a glued chain.
CheckId site(const LogicalNetwork& net, Sector s, int block, int x, int y, int t) {
  const int n = net.blocks()[block].ports[0].width;
  return net.check_offset(s, block) + static_cast<CheckId>((t * n + y) * n + x);
}

EdgeId edge(const LogicalNetwork& net, Sector s, CheckId a, CheckId b) {
  auto e = testing::edge_between(net.graph(s), a, b);
  EXPECT_TRUE(e.has_value());
  return e.value_or(0);
}

std::size_t count_kind(const DecodingPlan& plan, TaskKind k) {
  std::size_t n = 0;
  for (const auto& t : plan.tasks) n += t.kind == k ? 1 : 0;
  return n;
}

TEST(Partition, EdgeVertexChain) {
  auto net = build_network(builtin_chain(3, 3));
  auto part = partition_edge_vertex(net, Sector::Primal);
  int edges = 0, vertices = 0;
  for (const auto& r : part) (r.kind == TaskKind::Edge ? edges : vertices)++;
  EXPECT_EQ(edges, 2);
  EXPECT_EQ(vertices, 3);
}

TEST(Partition, EdgeVertexSingleBlock) {
  auto net = build_network(builtin_chain(1, 3));
  auto plan = make_plan(net, Sector::Primal, ScheduleKind::EdgeVertex, 0);
  EXPECT_EQ(count_kind(plan, TaskKind::Edge), 0u);
  EXPECT_EQ(count_kind(plan, TaskKind::Vertex), 1u);
}

TEST(Partition, EdgeVertexMsd15) {
  auto net = build_network(builtin_msd15(3));
  auto plan = make_plan(net, Sector::Dual, ScheduleKind::EdgeVertex, 0);
  EXPECT_EQ(count_kind(plan, TaskKind::Edge), 46u);
  EXPECT_EQ(count_kind(plan, TaskKind::Vertex), 27u);
  EXPECT_EQ(plan.depth(), 2);
  for (const auto& lvl = plan.levels(); const auto& t : plan.tasks)
    EXPECT_EQ(t.kind == TaskKind::Edge, std::find(lvl[0].begin(), lvl[0].end(), t.id) != lvl[0].end());
}

TEST(Partition, CommitsPartitionEveryEdge) {
  for (const auto& desc : {builtin_chain(3, 3), builtin_ring4(3), builtin_bipartite_ghz({{1, 1}, {1, 0}}, 3)}) {
    auto net = build_network(desc);
    for (auto kind : {ScheduleKind::Sequential, ScheduleKind::ParallelVertex, ScheduleKind::EdgeVertex,
                      ScheduleKind::Monolithic})
      for (auto s : kSectors) {
        auto plan = make_plan(net, s, kind, 2);
        EdgeSet seen(net.graph(s).num_edges());
        for (const auto& t : plan.tasks) {
          EXPECT_FALSE(seen.intersects(t.commit));
          seen |= t.commit;
          EXPECT_FALSE(t.buffer.intersects(t.commit));
          EXPECT_FALSE(t.buffer.intersects(plan.past(t.id)));
        }
        EXPECT_EQ(seen, net.graph(s).all_edges());
      }
  }
}

TEST(Schedule, Depths) {
  auto ring = build_network(builtin_ring4(3));
  auto chain = build_network(builtin_chain(4, 3));
  EXPECT_EQ(make_plan(ring, Sector::Primal, ScheduleKind::EdgeVertex, 1).depth(), 2);
  EXPECT_EQ(make_plan(chain, Sector::Primal, ScheduleKind::EdgeVertex, 1).depth(), 2);
  EXPECT_EQ(make_plan(chain, Sector::Primal, ScheduleKind::Sequential, 1).depth(), 4);
  // A chain is two-colourable.
  EXPECT_EQ(make_plan(chain, Sector::Primal, ScheduleKind::ParallelVertex, 1).depth(), 2);
  auto mono = make_plan(chain, Sector::Primal, ScheduleKind::Monolithic, 3);
  ASSERT_EQ(mono.tasks.size(), 1u);
  EXPECT_TRUE(mono.tasks[0].deps.empty());
  EXPECT_TRUE(mono.tasks[0].buffer.empty());
}

TEST(Schedule, SequentialChainIsAPath) {
  auto net = build_network(builtin_chain(4, 3));
  auto plan = make_plan(net, Sector::Primal, ScheduleKind::Sequential, 0);
  ASSERT_EQ(plan.tasks.size(), 4u);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(plan.tasks[i].deps, std::vector<int>{i - 1});
}

TEST(Schedule, NeighbouringTasksAreOrdered) {
  for (auto kind : {ScheduleKind::Sequential, ScheduleKind::ParallelVertex, ScheduleKind::EdgeVertex}) {
    auto net = build_network(builtin_ring4(3));
    const auto& g = net.graph(Sector::Primal);
    auto plan = make_plan(net, Sector::Primal, kind, 0);
    std::vector<int> owner(g.num_edges());
    for (const auto& t : plan.tasks) t.commit.for_each([&](EdgeId e) { owner[e] = t.id; });
    for (CheckId c = 0; c < g.num_checks(); ++c)
      for (auto e1 : g.incident(c))
        for (auto e2 : g.incident(c)) {
          int i = owner[e1], j = owner[e2];
          if (i == j) continue;
          const auto& di = plan.tasks[i].deps;
          const auto& dj = plan.tasks[j].deps;
          EXPECT_TRUE(std::count(di.begin(), di.end(), j) + std::count(dj.begin(), dj.end(), i) == 1);
        }
  }
}

TEST(Schedule, EqualRankNeighboursAreRejected) {
  auto net = build_network(builtin_chain(2, 3));
  auto part = partition_vertex(net, Sector::Primal, {0, 0});
  EXPECT_THROW(build_schedule(net.graph(Sector::Primal), part, ScheduleKind::ParallelVertex, Sector::Primal),
               std::invalid_argument);
}

// Every check a task reads is settled by its ancestors or by edges it decodes itself.
TEST(Schedule, TasksReadOnlySettledChecks) {
  auto net = build_network(builtin_ring4(3));
  for (auto kind : {ScheduleKind::Sequential, ScheduleKind::ParallelVertex, ScheduleKind::EdgeVertex})
    for (int b : {0, 2}) {
      const auto& g = net.graph(Sector::Dual);
      auto plan = make_plan(net, Sector::Dual, kind, b);
      for (const auto& t : plan.tasks) {
        EdgeSet settled = plan.past(t.id) | t.commit | t.buffer;
        EXPECT_FALSE(t.checks.intersects(t.open_checks));
        t.checks.for_each([&](CheckId c) {
          for (auto e : g.incident(c)) EXPECT_TRUE(settled.test(e));
        });
      }
    }
}

TEST(Buffers, ZeroMeansEmpty) {
  auto net = build_network(builtin_ring4(3));
  for (const auto& t : make_plan(net, Sector::Primal, ScheduleKind::EdgeVertex, 0).tasks)
    EXPECT_TRUE(t.buffer.empty());
}

// The edge task between b0 and b1 reaches exactly b hop-layers into each block:
// an edge of b1 whose lowest check sits at layer t is t + 1 hops away.
TEST(Buffers, EdgeTaskLayersOnIdentityChain) {
  const int d = 7, n = d - 1;
  auto net = build_network(builtin_chain(2, d));
  for (auto s : kSectors) {
    const auto& g = net.graph(s);
    for (int b : {1, 2, 3, 5}) {
      auto plan = make_plan(net, s, ScheduleKind::EdgeVertex, b);
      const auto& task = plan.tasks[0];
      ASSERT_EQ(task.kind, TaskKind::Edge);
      EdgeSet expect(g.num_edges());
      for (int blk : {0, 1}) {
        const CheckId off = net.check_offset(s, blk);
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
          if (net.origins(s)[e].block != blk) continue;
          const auto& ed = g.edge(e);
          int ta = static_cast<int>(ed.a - off) / (n * n);
          int tb = ed.dangling() ? ta : static_cast<int>(ed.b - off) / (n * n);
          int hops = blk == 1 ? std::min(ta, tb) + 1 : n - std::max(ta, tb);
          if (hops <= b) expect.set(e);
        }
      }
      EXPECT_EQ(task.buffer, expect) << "b=" << b;
    }
  }
}

TEST(Buffering, ConditionHoldsAtBEqualsD) {
  auto net = build_network(builtin_chain(3, 5));
  const auto& g = net.graph(Sector::Primal);
  EXPECT_TRUE(check_buffering_condition(make_plan(net, Sector::Primal, ScheduleKind::EdgeVertex, 5), g, 5).pass);
  EXPECT_FALSE(check_buffering_condition(make_plan(net, Sector::Primal, ScheduleKind::EdgeVertex, 0), g, 5).pass);
  EXPECT_FALSE(check_buffering_condition(make_plan(net, Sector::Primal, ScheduleKind::Sequential, 0), g, 5).pass);
  auto mono = check_buffering_condition(make_plan(net, Sector::Primal, ScheduleKind::Monolithic, 0), g, 5);
  EXPECT_TRUE(mono.pass);
  EXPECT_FALSE(mono.tasks[0].distance.has_value());
}

TEST(Run, MonolithicMatchesDirectDecode) {
  auto net = build_network(builtin_ring4(3));
  std::mt19937_64 rng(12);
  for (auto s : kSectors) {
    const auto& g = net.graph(s);
    auto plan = make_plan(net, s, ScheduleKind::Monolithic, 0);
    auto membranes = membrane_indicators(net, s);
    for (int t = 0; t < 200; ++t) {
      auto err = testing::random_edges(g, 0.04, rng);
      auto rec = run_plan(g, plan, err, membranes);
      auto direct = decode(g, syndrome_of(g, err));
      ASSERT_EQ(direct.status, DecodeStatus::Ok);
      EXPECT_EQ(rec.kappa, direct.correction);
      for (std::size_t m = 0; m < membranes.size(); ++m)
        EXPECT_EQ(rec.flips[m] != 0, (err ^ direct.correction).overlap_parity(membranes[m]));
    }
  }
}

TEST(Run, SyndromeConsistentForEverySchedule) {
  auto net = build_network(builtin_ring4(5));
  std::mt19937_64 rng(13);
  for (auto kind : {ScheduleKind::Sequential, ScheduleKind::ParallelVertex, ScheduleKind::EdgeVertex})
    for (int b : {0, 1, 3, 5})
      for (auto s : kSectors) {
        const auto& g = net.graph(s);
        PlanRunner runner(g, make_plan(net, s, kind, b), membrane_indicators(net, s));
        for (int t = 0; t < 50; ++t) {
          auto rec = runner.run(testing::random_edges(g, 0.03, rng).ids());
          EXPECT_TRUE(rec.syndrome_consistent);
          EdgeSet sum(g.num_edges());
          for (const auto& k : rec.task_commits) sum ^= EdgeSet::from_ids(g.num_edges(), k);
          EXPECT_EQ(sum, rec.kappa);
        }
      }
}

TEST(Run, ConcurrentEqualsSerial) {
  auto net = build_network(builtin_msd15(3));
  std::mt19937_64 rng(14);
  for (auto s : kSectors) {
    const auto& g = net.graph(s);
    PlanRunner runner(g, make_plan(net, s, ScheduleKind::EdgeVertex, 2), membrane_indicators(net, s));
    for (int t = 0; t < 20; ++t) {
      auto err = testing::random_edges(g, 0.03, rng).ids();
      auto a = runner.run(err, false);
      auto b = runner.run(err, true);
      EXPECT_EQ(a.task_commits, b.task_commits);
      EXPECT_EQ(a.flips, b.flips);
      EXPECT_EQ(a.aborted, b.aborted);
    }
  }
}

// An error deep inside b0, more than b hops from the only interface, is left
// entirely to the vertex task.
TEST(Run, ConfinedErrorLeavesEdgeTasksIdle) {
  const int d = 7, b = 3;
  auto net = build_network(builtin_chain(3, d));
  const auto s = Sector::Primal;
  const auto& g = net.graph(s);
  EdgeSet err(g.num_edges());
  err.set(edge(net, s, site(net, s, 0, 2, 2, 0), site(net, s, 0, 3, 2, 0)));
  err.set(edge(net, s, site(net, s, 0, 1, 4, 0), site(net, s, 0, 1, 4, 1)));
  auto plan = make_plan(net, s, ScheduleKind::EdgeVertex, b);
  auto iface = net.interface_edges(s, 0);
  ASSERT_GE(*region_distance(g, err, iface, g.empty_edges()), b + 1);
  auto rec = run_plan(g, plan, err, membrane_indicators(net, s));
  for (const auto& t : plan.tasks)
    if (t.kind == TaskKind::Edge) {
      EXPECT_TRUE(rec.task_commits[t.id].empty()) << t.label;
    }
  EXPECT_EQ(rec.kappa, err);
  EXPECT_EQ(std::count(rec.flips.begin(), rec.flips.end(), 1), 0);
}

// Distance reduction without buffers at d = 7. Weight ceil(d/4) = 2: an
// interface edge at facet column c plus the b0 edge from column c to c + 1 on
// its top layer. Without buffers the edge task sees nothing, b0 and b1 send
// their defects to opposite walls, and the membrane flips.
TEST(Run, UnbufferedEdgeTaskIsMisledByShortError) {
  const int d = 7, n = d - 1, c = n / 2 - 1;
  auto net = build_network(builtin_chain(2, d));
  const auto s = Sector::Primal;
  const auto& g = net.graph(s);
  const int y = n / 2;
  EdgeSet err(g.num_edges());
  err.set(edge(net, s, site(net, s, 0, c, y, n - 1), site(net, s, 1, c, y, 0)));
  err.set(edge(net, s, site(net, s, 0, c, y, n - 1), site(net, s, 0, c + 1, y, n - 1)));
  ASSERT_EQ(err.count(), static_cast<std::size_t>((d + 3) / 4));
  auto membranes = membrane_indicators(net, s);
  auto flips = [&](ScheduleKind k, int b) { return run_plan(g, make_plan(net, s, k, b), err, membranes).flips[0]; };
  EXPECT_EQ(flips(ScheduleKind::EdgeVertex, 0), 1);
  EXPECT_EQ(flips(ScheduleKind::EdgeVertex, d), 0);
  EXPECT_EQ(flips(ScheduleKind::Monolithic, 0), 0);
}

TEST(Audit, BufferedChainIsSoundAtD3) {
  auto net = build_network(builtin_chain(3, 3));
  for (auto s : kSectors) {
    auto res = soundness_audit(net.graph(s), make_plan(net, s, ScheduleKind::EdgeVertex, 3),
                               membrane_indicators(net, s), 1);
    EXPECT_EQ(res.failures, 0u);
    EXPECT_EQ(res.inconsistent, 0u);
    EXPECT_EQ(res.errors_checked, net.graph(s).num_edges() + 1);
  }
}

TEST(Audit, BufferedChainIsSoundAtD5) {
  auto net = build_network(builtin_chain(3, 5));
  for (auto s : kSectors) {
    auto res = soundness_audit(net.graph(s), make_plan(net, s, ScheduleKind::EdgeVertex, 5),
                               membrane_indicators(net, s), 2);
    EXPECT_EQ(res.failures, 0u);
    EXPECT_EQ(res.inconsistent, 0u);
  }
}

TEST(Audit, UnbufferedChainLosesDistance) {
  auto net = build_network(builtin_chain(3, 5));
  auto res = soundness_audit(net.graph(Sector::Primal), make_plan(net, Sector::Primal, ScheduleKind::EdgeVertex, 0),
                             membrane_indicators(net, Sector::Primal), 2);
  EXPECT_GT(res.failures, 0u);
  EXPECT_EQ(res.inconsistent, 0u);
  ASSERT_FALSE(res.counterexamples.empty());
  EXPECT_LE(res.counterexamples[0].error.size(), 2u);
}

TEST(Audit, RefusesAboveCap) {
  auto net = build_network(builtin_chain(3, 5));
  EXPECT_THROW(soundness_audit(net.graph(Sector::Primal), make_plan(net, Sector::Primal, ScheduleKind::EdgeVertex, 0),
                               membrane_indicators(net, Sector::Primal), 4, 1e6),
               EnumerationCapExceeded);
}

}  // namespace
}  // namespace moddec
