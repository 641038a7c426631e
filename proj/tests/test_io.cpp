#include "support.hpp"

#include <gtest/gtest.h>

namespace moddec {
namespace {

std::string where_of(const std::string& text) {
  try {
    parse_network_text(text);
  } catch (const FormatError& e) {
    return e.where();
  }
  return "<accepted>";
}

TEST(NetworkFile, BuiltinsRoundTrip) {
  for (const auto& desc : {builtin_chain(3, 5), builtin_ring4(3), builtin_msd15(3)}) {
    auto text = to_json(desc).dump(2);
    auto back = parse_network_text(text);
    EXPECT_EQ(to_json(back), to_json(desc));
    EXPECT_EQ(network_info(build_network(back)), network_info(build_network(desc)));
  }
}

TEST(NetworkFile, MinimalDocument) {
  auto desc = parse_network_text(R"({
    "version": 1,
    "blocks": [{"name": "a", "type": "identity", "d": 3, "n_ports": 2},
               {"name": "s", "type": "z_spider", "d": 3, "n_ports": 3}],
    "edges": [[["a", "OUT"], ["s", "P1"]]]
  })");
  auto net = build_network(desc);
  EXPECT_EQ(net.blocks().size(), 2u);
  EXPECT_EQ(net.external_ports().size(), 3u);
}

TEST(NetworkFile, UnknownFieldsCarryJsonPointers) {
  EXPECT_EQ(where_of(R"({"version":1,"blocks":[],"edges":[],"extra":0})"), "/extra");
  EXPECT_EQ(where_of(R"({"version":1,"blocks":[{"name":"a","type":"identity","d":3,"n_ports":2,"colour":1}],"edges":[]})"),
            "/blocks/0/colour");
}

TEST(NetworkFile, ShapeErrors) {
  EXPECT_EQ(where_of(R"({"blocks":[],"edges":[]})"), "");
  EXPECT_EQ(where_of(R"({"version":2,"blocks":[],"edges":[]})"), "/version");
  EXPECT_EQ(where_of(R"({"version":1,"blocks":[{"name":"a","type":"cube","d":3,"n_ports":2}],"edges":[]})"),
            "/blocks/0/type");
  EXPECT_EQ(where_of(R"({"version":1,"blocks":[{"name":"a","type":"identity","d":"3","n_ports":2}],"edges":[]})"),
            "/blocks/0/d");
  EXPECT_EQ(where_of(R"({"version":1,"blocks":[],"edges":[[["a","IN"],["b","OUT"]]]})"), "/edges/0/0/0");
  EXPECT_EQ(where_of(R"({"version":1,"blocks":[],"edges":[["a","IN"]]})"), "/edges/0/0");
  EXPECT_EQ(where_of(R"({"version":1,"blocks":[],"edges":[[["a","IN"]]]})"), "/edges/0");
}

TEST(NetworkFile, MalformedJsonReportsLineAndColumn) {
  EXPECT_EQ(where_of("{\n  \"version\": 1,\n  \"blocks\": [,]\n}"), "line 3, column 14");
}

TEST(NetworkFile, NetworkErrorsSurfaceFromBuild) {
  auto desc = parse_network_text(R"({"version":1,
    "blocks":[{"name":"a","type":"identity","d":3,"n_ports":2},{"name":"b","type":"identity","d":3,"n_ports":2}],
    "edges":[[["a","OUT"],["b","IN"]],[["a","OUT"],["b","OUT"]]]})");
  EXPECT_THROW(build_network(desc), NetworkError);
}

TEST(Info, RingSummary) {
  auto info = network_info(build_network(builtin_ring4(3)), true);
  EXPECT_EQ(info["blocks"].size(), 4u);
  EXPECT_EQ(info["interfaces"].size(), 4u);
  EXPECT_EQ(info["external_ports"].size(), 8u);
  EXPECT_EQ(info["meta_checks"], 1);
  for (const auto& m : info["membranes"]) EXPECT_TRUE(m.contains("size"));
}

TEST(Csv, HeaderAndRows) {
  auto net = build_network(builtin_chain(2, 3));
  auto rep = run_monte_carlo(net, {ScheduleKind::EdgeVertex, 1}, 0.01, 100, 3);
  auto csv = to_csv({rep});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "network,d,b,schedule,p,trials,failures,ler,ci_lo,ci_hi,membrane");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("\nchain2,3,1,edge-vertex,0.01,100,"), std::string::npos);
}

TEST(Csv, ByteIdenticalForSameSeed) {
  auto net = build_network(builtin_ring4(3));
  auto a = to_csv({run_monte_carlo(net, {ScheduleKind::EdgeVertex, 2}, 0.02, 200, 77)});
  auto b = to_csv({run_monte_carlo(net, {ScheduleKind::EdgeVertex, 2}, 0.02, 200, 77)});
  EXPECT_EQ(a, b);
}

TEST(PlanSummary, ReportsBuffering) {
  auto net = build_network(builtin_chain(3, 3));
  auto plan = make_plan(net, Sector::Primal, ScheduleKind::EdgeVertex, 3);
  auto js = plan_summary(plan, net.graph(Sector::Primal), 3);
  EXPECT_EQ(js["num_tasks"], 5);
  EXPECT_EQ(js["depth"], 2);
  EXPECT_EQ(js["buffering"]["pass"], true);
}

}  // namespace
}  // namespace moddec
