#pragma once

#include "moddec/blocks.hpp"
#include "moddec/gf2.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace moddec {

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PortRef {
  int block = -1;
  std::string port;

  friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct Connection {
  PortRef a;
  PortRef b;
};

/// Owner of a glued edge: a block interior or an interface layer.
struct EdgeOrigin {
  int block = -1;
  int interface = -1;
};

struct GlobalMembrane {
  Sector sector = Sector::Primal;
  std::vector<std::pair<int, int>> parts;  // (block, index into that block's membranes)
  std::vector<Pauli> external_label;       // aligned with LogicalNetwork::external_ports()
  EdgeSet indicator;
  bool is_meta_check = false;
  int crossed_interfaces = 0;
  std::string name;
};

class LogicalNetwork {
 public:
  std::string id = "network";

  int add_block(BlockSpec block) {
    for (const auto& b : blocks_)
      if (b.name == block.name) throw NetworkError("duplicate block name '" + block.name + "'");
    blocks_.push_back(std::move(block));
    glued_ = false;
    return static_cast<int>(blocks_.size() - 1);
  }

  int block_index(const std::string& name) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if (blocks_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  int connect(const PortRef& a, const PortRef& b) {
    const PortFacet& fa = facet(a);
    const PortFacet& fb = facet(b);
    if (a == b) throw NetworkError("cannot connect port " + describe(a) + " to itself");
    for (const auto& c : connections_)
      for (const auto* p : {&a, &b})
        if (c.a == *p || c.b == *p) throw NetworkError("port " + describe(*p) + " is already matched");
    if (fa.width != fb.width)
      throw NetworkError("facet shape mismatch between " + describe(a) + " and " + describe(b));
    if (fa.width % 2 != 0)
      throw NetworkError("gluing needs odd d so that membrane traces meet at the facet centre");
    connections_.push_back({a, b});
    glued_ = false;
    return static_cast<int>(connections_.size() - 1);
  }

  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  const std::vector<Connection>& connections() const { return connections_; }

  /// Builds the glued graphs and derives global membranes.
  void glue() {
    for (auto s : kSectors) glue_sector(s);
    compute_external_ports();
    glued_ = true;
    globals_.clear();
    for (auto s : kSectors) derive_sector_membranes(s);
  }

  bool glued() const { return glued_; }

  const SyndromeGraph& graph(Sector s) const { return sector(s).graph; }
  const std::vector<EdgeOrigin>& origins(Sector s) const { return sector(s).origins; }
  CheckId check_offset(Sector s, int block) const { return sector(s).check_offset.at(block); }
  EdgeId edge_offset(Sector s, int block) const { return sector(s).edge_offset.at(block); }

  EdgeSet block_edges(Sector s, int block) const {
    const auto& sd = sector(s);
    EdgeSet out(sd.graph.num_edges());
    for (EdgeId e = 0; e < sd.origins.size(); ++e)
      if (sd.origins[e].block == block) out.set(e);
    return out;
  }

  EdgeSet interface_edges(Sector s, int iface) const {
    const auto& sd = sector(s);
    EdgeSet out(sd.graph.num_edges());
    for (EdgeId e = 0; e < sd.origins.size(); ++e)
      if (sd.origins[e].interface == iface) out.set(e);
    return out;
  }

  /// Maps an edge set of one block's graph into the glued graph.
  EdgeSet lift(Sector s, int block, const EdgeSet& local) const {
    const auto& sd = sector(s);
    EdgeSet out(sd.graph.num_edges());
    EdgeId off = sd.edge_offset.at(block);
    local.for_each([&](EdgeId e) { out.set(off + e); });
    return out;
  }

  const std::vector<PortRef>& external_ports() const { return external_; }
  const std::vector<GlobalMembrane>& globals() const { return globals_; }

  std::vector<const GlobalMembrane*> globals(Sector s) const {
    std::vector<const GlobalMembrane*> out;
    for (const auto& g : globals_)
      if (g.sector == s) out.push_back(&g);
    return out;
  }

  int meta_check_count() const {
    int n = 0;
    for (const auto& g : globals_) n += g.is_meta_check ? 1 : 0;
    return n;
  }

  int distance() const {
    int d = 0;
    for (const auto& b : blocks_) d = d == 0 ? b.distance : std::min(d, b.distance);
    return d;
  }

  std::string describe(const PortRef& p) const {
    std::string block = p.block >= 0 && p.block < static_cast<int>(blocks_.size()) ? blocks_[p.block].name
                                                                                  : std::to_string(p.block);
    return block + "." + p.port;
  }

 private:
  struct SectorData {
    SyndromeGraph graph;
    std::vector<EdgeOrigin> origins;
    std::vector<CheckId> check_offset;
    std::vector<EdgeId> edge_offset;
  };

  const PortFacet& facet(const PortRef& p) const {
    if (p.block < 0 || p.block >= static_cast<int>(blocks_.size()))
      throw NetworkError("unknown block index " + std::to_string(p.block));
    int idx = blocks_[p.block].port_index(p.port);
    if (idx < 0) throw NetworkError("block '" + blocks_[p.block].name + "' has no port '" + p.port + "'");
    return blocks_[p.block].ports[idx];
  }

  const SectorData& sector(Sector s) const {
    if (!glued_) throw NetworkError("network is not glued");
    return sectors_[static_cast<int>(s)];
  }

  void glue_sector(Sector s) {
    SectorData sd;
    SyndromeGraph::Builder builder;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& g = blocks_[bi].graph(s);
      CheckId coff = builder.add_checks(g.num_checks());
      sd.check_offset.push_back(coff);
      sd.edge_offset.push_back(static_cast<EdgeId>(builder.num_edges()));
      for (const auto& e : g.edges()) {
        builder.add_edge(coff + e.a, e.dangling() ? kBoundary : coff + e.b);
        sd.origins.push_back({static_cast<int>(bi), -1});
      }
    }
    for (std::size_t k = 0; k < connections_.size(); ++k) {
      const auto& c = connections_[k];
      const PortFacet& fa = facet(c.a);
      const PortFacet& fb = facet(c.b);
      const int n = fa.width;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          CheckId ca = sd.check_offset[c.a.block] + fa.site(s, u, v);
          CheckId cb = sd.check_offset[c.b.block] + fb.site(s, n - 1 - u, v);
          builder.add_edge(ca, cb);
          sd.origins.push_back({-1, static_cast<int>(k)});
        }
    }
    sd.graph = std::move(builder).build();
    sectors_[static_cast<int>(s)] = std::move(sd);
  }

  void compute_external_ports() {
    external_.clear();
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi)
      for (const auto& port : blocks_[bi].ports) {
        PortRef ref{static_cast<int>(bi), port.name};
        bool matched = false;
        for (const auto& c : connections_) matched = matched || c.a == ref || c.b == ref;
        if (!matched) external_.push_back(ref);
      }
  }

  void derive_sector_membranes(Sector s) {
    std::vector<std::pair<int, int>> vars;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi)
      for (std::size_t mi = 0; mi < blocks_[bi].membranes.size(); ++mi)
        if (blocks_[bi].membranes[mi].sector == s) vars.emplace_back(static_cast<int>(bi), static_cast<int>(mi));
    const std::size_t nv = vars.size();
    if (nv == 0) return;

    auto port_row = [&](const PortRef& p) {
      gf2::Row row(nv);
      for (std::size_t k = 0; k < nv; ++k)
        if (vars[k].first == p.block && acts_on(blocks_[p.block].membranes[vars[k].second].at(p.port), s))
          row.flip(k);
      return row;
    };
    std::vector<gf2::Row> cancel;
    for (const auto& c : connections_) cancel.push_back(port_row(c.a) ^ port_row(c.b));
    std::vector<gf2::Row> external_rows;
    for (const auto& p : external_) external_rows.push_back(port_row(p));

    auto external_weight = [&](const gf2::Row& v) {
      std::size_t w = 0;
      for (const auto& r : external_rows) w += (r & v).count() % 2;
      return w;
    };
    auto weight = [&](const gf2::Row& v) { return std::make_pair(v.count(), external_weight(v)); };

    auto with_external = cancel;
    with_external.insert(with_external.end(), external_rows.begin(), external_rows.end());
    auto meta = gf2::kernel(with_external, nv);
    gf2::sparsify(meta, weight);
    auto full = gf2::kernel(cancel, nv);
    gf2::sparsify(full, weight);

    // Extend the meta-check basis to a basis of the full kernel.
    std::vector<gf2::Row> chosen;
    std::vector<gf2::Row> echelon;
    auto try_add = [&](const gf2::Row& v) {
      gf2::Row r = v;
      for (const auto& e : echelon)
        if (r.test(e.find_first())) r ^= e;
      if (r.none()) return false;
      for (auto& e : echelon)
        if (e.test(r.find_first())) e ^= r;
      echelon.push_back(r);
      return true;
    };
    for (const auto& v : meta)
      if (try_add(v)) chosen.push_back(v);
    std::size_t n_meta = chosen.size();
    for (const auto& v : full)
      if (try_add(v)) chosen.push_back(v);

    int meta_index = 0;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      const auto& v = chosen[k];
      GlobalMembrane gm;
      gm.sector = s;
      gm.indicator = EdgeSet(graph(s).num_edges());
      for (std::size_t j = 0; j < nv; ++j) {
        if (!v.test(j)) continue;
        gm.parts.push_back(vars[j]);
        gm.indicator ^= lift(s, vars[j].first, blocks_[vars[j].first].membranes[vars[j].second].indicator);
      }
      for (std::size_t e = 0; e < external_.size(); ++e) {
        bool on = (external_rows[e] & v).count() % 2 != 0;
        gm.external_label.push_back(on ? (s == Sector::Primal ? Pauli::X : Pauli::Z) : Pauli::I);
      }
      for (const auto& c : connections_) gm.crossed_interfaces += (port_row(c.a) & v).count() % 2 != 0 ? 1 : 0;
      gm.is_meta_check = k < n_meta;
      if (gm.is_meta_check) {
        gm.name = std::string("meta_") + (s == Sector::Primal ? "X" : "Z") + std::to_string(meta_index++);
      } else {
        for (auto p : gm.external_label) gm.name += pauli_char(p);
      }
      globals_.push_back(std::move(gm));
    }
  }

  std::vector<BlockSpec> blocks_;
  std::vector<Connection> connections_;
  std::array<SectorData, 2> sectors_;
  std::vector<PortRef> external_;
  std::vector<GlobalMembrane> globals_;
  bool glued_ = false;
};

// ---------------------------------------------------------------------------
// Declarative descriptions and builtins

struct BlockDecl {
  std::string name;
  BlockKind type = BlockKind::Identity;
  int d = 3;
  int n_ports = 2;
};

struct PortName {
  std::string block;
  std::string port;
};

struct NetworkDescription {
  int version = 1;
  std::string name = "network";
  std::vector<BlockDecl> blocks;
  std::vector<std::pair<PortName, PortName>> edges;
};

inline LogicalNetwork build_network(const NetworkDescription& desc) {
  LogicalNetwork net;
  net.id = desc.name;
  for (const auto& b : desc.blocks) {
    if (b.type == BlockKind::Identity) {
      if (b.n_ports != 2) throw NetworkError("identity block '" + b.name + "' must have 2 ports");
      net.add_block(build_identity_block(b.d, b.name));
    } else {
      net.add_block(build_spider_block(b.d, b.n_ports, b.type, b.name));
    }
  }
  for (const auto& [a, b] : desc.edges) {
    int ba = net.block_index(a.block);
    int bb = net.block_index(b.block);
    if (ba < 0) throw NetworkError("edge refers to unknown block '" + a.block + "'");
    if (bb < 0) throw NetworkError("edge refers to unknown block '" + b.block + "'");
    net.connect({ba, a.port}, {bb, b.port});
  }
  net.glue();
  return net;
}

inline NetworkDescription builtin_chain(int n, int d) {
  if (n < 1) throw std::invalid_argument("chain needs at least one block");
  NetworkDescription desc;
  desc.name = "chain" + std::to_string(n);
  for (int i = 0; i < n; ++i) desc.blocks.push_back({"b" + std::to_string(i), BlockKind::Identity, d, 2});
  for (int i = 0; i + 1 < n; ++i)
    desc.edges.push_back({{"b" + std::to_string(i), "OUT"}, {"b" + std::to_string(i + 1), "IN"}});
  return desc;
}

/// Four 4-port Z-spiders; P2 of each meets P1 of the next, P3 and P4 stay external.
inline NetworkDescription builtin_ring4(int d) {
  NetworkDescription desc;
  desc.name = "ring4";
  for (int i = 0; i < 4; ++i) desc.blocks.push_back({"z" + std::to_string(i), BlockKind::ZSpider, d, 4});
  for (int i = 0; i < 4; ++i)
    desc.edges.push_back({{"z" + std::to_string(i), "P2"}, {"z" + std::to_string((i + 1) % 4), "P1"}});
  return desc;
}

using BinaryMatrix = std::vector<std::vector<int>>;

/// One Z-spider per row and one X-spider per column, an interface per 1-entry,
/// and one external port on every spider (its last port).
inline NetworkDescription builtin_bipartite_ghz(const BinaryMatrix& matrix, int d, std::string name = "bipartite") {
  if (matrix.empty()) throw std::invalid_argument("bipartite matrix is empty");
  const std::size_t rows = matrix.size();
  const std::size_t cols = matrix[0].size();
  std::vector<int> row_deg(rows, 0), col_deg(cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (matrix[r].size() != cols) throw std::invalid_argument("bipartite matrix is ragged");
    for (std::size_t c = 0; c < cols; ++c) {
      if (matrix[r][c] != 0 && matrix[r][c] != 1) throw std::invalid_argument("bipartite matrix must be binary");
      row_deg[r] += matrix[r][c];
      col_deg[c] += matrix[r][c];
    }
  }
  auto arity = [](int deg, const std::string& who) {
    if (deg < 1) throw NetworkError(who + " has no connections");
    if (deg + 1 > 6) throw NetworkError(who + " needs " + std::to_string(deg + 1) + " ports; at most 6 are supported");
    return deg + 1;
  };
  NetworkDescription desc;
  desc.name = std::move(name);
  for (std::size_t r = 0; r < rows; ++r)
    desc.blocks.push_back({"z" + std::to_string(r), BlockKind::ZSpider, d, arity(row_deg[r], "row " + std::to_string(r))});
  for (std::size_t c = 0; c < cols; ++c)
    desc.blocks.push_back(
        {"x" + std::to_string(c), BlockKind::XSpider, d, arity(col_deg[c], "column " + std::to_string(c))});
  std::vector<int> row_next(rows, 1), col_next(cols, 1);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (matrix[r][c])
        desc.edges.push_back({{"z" + std::to_string(r), "P" + std::to_string(row_next[r]++)},
                              {"x" + std::to_string(c), "P" + std::to_string(col_next[c]++)}});
  return desc;
}

/// Shipped 11 x 16 adjacency with 46 ones: rows 0-1 have degree 5, rows 2-10
/// degree 4, and columns are filled cyclically. It reproduces the block and
/// interface counts of the 15-to-1 distillation network but is a stand-in, not
/// that network's exact adjacency.
inline BinaryMatrix msd15_matrix() {
  BinaryMatrix m(11, std::vector<int>(16, 0));
  int col = 0;
  for (int r = 0; r < 11; ++r) {
    int deg = r < 2 ? 5 : 4;
    for (int k = 0; k < deg; ++k) {
      m[r][col] = 1;
      col = (col + 1) % 16;
    }
  }
  return m;
}

inline NetworkDescription builtin_msd15(int d) { return builtin_bipartite_ghz(msd15_matrix(), d, "msd15"); }

}  // namespace moddec
