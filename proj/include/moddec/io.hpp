#pragma once

#include "moddec/modular.hpp"
#include "moddec/network.hpp"
#include "moddec/stats.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace moddec {

using json = nlohmann::ordered_json;

/// Malformed network file. `where` is a JSON pointer or "line L, column C".
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline constexpr int kNetworkFileVersion = 1;

namespace detail {

inline void reject_unknown(const json& obj, const std::string& ptr, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw FormatError(ptr + "/" + it.key(), "unknown field");
  }
}

inline const json& require(const json& obj, const std::string& ptr, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(ptr, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string get_string(const json& v, const std::string& ptr) {
  if (!v.is_string()) throw FormatError(ptr, "expected a string");
  return v.get<std::string>();
}

inline int get_int(const json& v, const std::string& ptr) {
  if (!v.is_number_integer()) throw FormatError(ptr, "expected an integer");
  return v.get<int>();
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace detail

inline BlockKind parse_block_kind(const std::string& s) {
  if (s == "identity") return BlockKind::Identity;
  if (s == "z_spider") return BlockKind::ZSpider;
  if (s == "x_spider") return BlockKind::XSpider;
  throw std::invalid_argument("unknown block type '" + s + "'");
}

/// Validates the document shape and converts it. Network-level errors (bad
/// ports, shape mismatch) surface later from build_network.
inline NetworkDescription description_from_json(const json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw FormatError("/", "expected an object");
  reject_unknown(doc, "", {"version", "name", "blocks", "edges"});
  NetworkDescription desc;
  desc.version = get_int(require(doc, "", "version"), "/version");
  if (desc.version != kNetworkFileVersion)
    throw FormatError("/version", "unsupported version " + std::to_string(desc.version));
  if (doc.contains("name")) desc.name = get_string(doc["name"], "/name");

  const json& blocks = require(doc, "", "blocks");
  if (!blocks.is_array()) throw FormatError("/blocks", "expected an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string ptr = "/blocks/" + std::to_string(i);
    const json& b = blocks[i];
    if (!b.is_object()) throw FormatError(ptr, "expected an object");
    reject_unknown(b, ptr, {"name", "type", "d", "n_ports"});
    BlockDecl decl;
    decl.name = get_string(require(b, ptr, "name"), ptr + "/name");
    if (!names.insert(decl.name).second) throw FormatError(ptr + "/name", "duplicate block name '" + decl.name + "'");
    try {
      decl.type = parse_block_kind(get_string(require(b, ptr, "type"), ptr + "/type"));
    } catch (const std::invalid_argument& e) {
      throw FormatError(ptr + "/type", e.what());
    }
    decl.d = get_int(require(b, ptr, "d"), ptr + "/d");
    if (decl.d < 2) throw FormatError(ptr + "/d", "d must be >= 2");
    decl.n_ports = get_int(require(b, ptr, "n_ports"), ptr + "/n_ports");
    desc.blocks.push_back(decl);
  }

  const json& edges = require(doc, "", "edges");
  if (!edges.is_array()) throw FormatError("/edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ptr = "/edges/" + std::to_string(i);
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 2) throw FormatError(ptr, "expected [[block, port], [block, port]]");
    PortName ends[2];
    for (int k = 0; k < 2; ++k) {
      const std::string p = ptr + "/" + std::to_string(k);
      if (!e[k].is_array() || e[k].size() != 2) throw FormatError(p, "expected [block, port]");
      ends[k] = {get_string(e[k][0], p + "/0"), get_string(e[k][1], p + "/1")};
      if (!names.count(ends[k].block)) throw FormatError(p + "/0", "unknown block '" + ends[k].block + "'");
    }
    desc.edges.push_back({ends[0], ends[1]});
  }
  return desc;
}

inline NetworkDescription parse_network_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw FormatError(detail::line_column(text, at), "malformed JSON");
  }
  return description_from_json(doc);
}

inline NetworkDescription load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_network_text(ss.str());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

inline json to_json(const NetworkDescription& desc) {
  json doc;
  doc["version"] = desc.version;
  doc["name"] = desc.name;
  doc["blocks"] = json::array();
  for (const auto& b : desc.blocks)
    doc["blocks"].push_back({{"name", b.name}, {"type", block_kind_name(b.type)}, {"d", b.d}, {"n_ports", b.n_ports}});
  doc["edges"] = json::array();
  for (const auto& [a, b] : desc.edges)
    doc["edges"].push_back(json::array({json::array({a.block, a.port}), json::array({b.block, b.port})}));
  return doc;
}

// ---------------------------------------------------------------------------
// Summaries

/// Network summary: blocks, interfaces, external ports and global membranes,
/// with minimum-weight logical counts when `sizes` is set.
inline json network_info(const LogicalNetwork& net, bool sizes = false) {
  json out;
  out["network"] = net.id;
  out["d"] = net.distance();
  out["blocks"] = json::array();
  for (const auto& b : net.blocks()) {
    json ports = json::array();
    for (const auto& p : b.ports) ports.push_back(p.name);
    out["blocks"].push_back({{"name", b.name}, {"type", block_kind_name(b.kind)}, {"ports", ports}});
  }
  out["interfaces"] = json::array();
  for (const auto& c : net.connections()) out["interfaces"].push_back({net.describe(c.a), net.describe(c.b)});
  out["external_ports"] = json::array();
  for (const auto& p : net.external_ports()) out["external_ports"].push_back(net.describe(p));
  out["meta_checks"] = net.meta_check_count();
  out["membranes"] = json::array();
  for (const auto& g : net.globals()) {
    json m{{"name", g.name},
           {"sector", sector_name(g.sector)},
           {"meta_check", g.is_meta_check},
           {"parts", g.parts.size()},
           {"crossed_interfaces", g.crossed_interfaces}};
    if (sizes) {
      auto sz = membrane_size(net, g);
      m["min_weight"] = sz.weight;
      m["size"] = sz.count;
    }
    out["membranes"].push_back(m);
  }
  return out;
}

inline json plan_summary(const DecodingPlan& plan, const SyndromeGraph& g, int d) {
  json out;
  out["schedule"] = schedule_name(plan.kind);
  out["sector"] = sector_name(plan.sector);
  out["b"] = plan.buffer_size;
  out["num_tasks"] = plan.tasks.size();
  out["depth"] = plan.depth();
  auto rep = check_buffering_condition(plan, g, d);
  out["buffering"] = {{"d", d}, {"pass", rep.pass}};
  out["tasks"] = json::array();
  for (const auto& t : plan.tasks) {
    const auto& tb = rep.tasks[t.id];
    out["tasks"].push_back({{"id", t.id},
                            {"kind", task_kind_name(t.kind)},
                            {"label", t.label},
                            {"commit", t.commit.count()},
                            {"buffer", t.buffer.count()},
                            {"checks", t.checks.count()},
                            {"open_checks", t.open_checks.count()},
                            {"deps", t.deps},
                            {"future_distance", tb.distance ? json(*tb.distance) : json(nullptr)},
                            {"buffering_pass", tb.pass}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline constexpr const char* kCsvHeader = "network,d,b,schedule,p,trials,failures,ler,ci_lo,ci_hi,membrane";

/// One CSV row per membrane, no header.
inline std::string csv_rows(const LerReport& rep) {
  using detail::fmt_double;
  std::string out;
  for (const auto& m : rep.membranes) {
    out += rep.network + "," + std::to_string(rep.d) + "," + std::to_string(rep.b) + "," +
           schedule_name(rep.schedule) + "," + fmt_double(rep.p) + "," + std::to_string(m.trials) + "," +
           std::to_string(m.failures) + "," + fmt_double(m.ler) + "," + fmt_double(m.ci.lo) + "," +
           fmt_double(m.ci.hi) + "," + m.membrane + "\n";
  }
  return out;
}

inline std::string to_csv(const std::vector<LerReport>& reps) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : reps) out += csv_rows(r);
  return out;
}

inline json to_json(const LerReport& rep) {
  json out{{"network", rep.network},
           {"d", rep.d},
           {"b", rep.b},
           {"schedule", schedule_name(rep.schedule)},
           {"p", rep.p},
           {"trials", rep.trials},
           {"seed", rep.seed},
           {"aborted_trials", rep.aborted_trials},
           {"inconsistent_trials", rep.inconsistent_trials}};
  out["membranes"] = json::array();
  for (const auto& m : rep.membranes)
    out["membranes"].push_back({{"membrane", m.membrane},
                                {"sector", sector_name(m.sector)},
                                {"meta_check", m.is_meta_check},
                                {"crossed_interfaces", m.crossed_interfaces},
                                {"trials", m.trials},
                                {"failures", m.failures},
                                {"ler", m.ler},
                                {"ci", {m.ci.lo, m.ci.hi}}});
  return out;
}

}  // namespace moddec
