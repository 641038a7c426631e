#pragma once

#include "moddec/syndrome_graph.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace moddec {

enum class Pauli : std::uint8_t { I, X, Y, Z };
enum class Sector : std::uint8_t { Primal = 0, Dual = 1 };
enum class BlockKind : std::uint8_t { Identity, ZSpider, XSpider };

inline constexpr std::array<Sector, 2> kSectors{Sector::Primal, Sector::Dual};

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("unknown Pauli label '") + c + "'");
}

/// Primal membranes carry X-type labels, dual membranes Z-type labels.
inline bool acts_on(Pauli p, Sector s) {
  if (p == Pauli::Y) return true;
  return s == Sector::Primal ? p == Pauli::X : p == Pauli::Z;
}

inline const char* sector_name(Sector s) { return s == Sector::Primal ? "primal" : "dual"; }

inline const char* block_kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::Identity: return "identity";
    case BlockKind::ZSpider: return "z_spider";
    case BlockKind::XSpider: return "x_spider";
  }
  return "?";
}

/// A port facet is a width × width grid of boundary checks, addressed by (u, v).
/// Primal rough walls sit at the u-ends of the facet and dual rough walls at the
/// v-ends. Gluing two facets joins (u, v) with (width-1-u, v).
struct PortFacet {
  std::string name;
  int width = 0;
  std::array<std::vector<CheckId>, 2> sites;  // per sector, index u * width + v

  CheckId site(Sector s, int u, int v) const { return sites[static_cast<int>(s)].at(u * width + v); }
};

struct PartialMembrane {
  std::vector<std::pair<std::string, Pauli>> label;  // one entry per port, in port order
  Sector sector = Sector::Primal;
  EdgeSet indicator;

  Pauli at(const std::string& port) const {
    for (const auto& [name, p] : label)
      if (name == port) return p;
    throw std::out_of_range("membrane label has no port " + port);
  }

  std::string label_string() const {
    std::string out;
    for (const auto& [name, p] : label) {
      if (p == Pauli::I) continue;
      if (!out.empty()) out += ' ';
      out += pauli_char(p);
      out += '_';
      out += name;
    }
    return out.empty() ? "I" : out;
  }
};

struct BlockSpec {
  std::string name;
  BlockKind kind = BlockKind::Identity;
  int distance = 0;
  std::array<SyndromeGraph, 2> graphs;
  std::vector<PortFacet> ports;
  std::vector<PartialMembrane> membranes;

  const SyndromeGraph& graph(Sector s) const { return graphs[static_cast<int>(s)]; }

  int port_index(const std::string& port) const {
    for (std::size_t i = 0; i < ports.size(); ++i)
      if (ports[i].name == port) return static_cast<int>(i);
    return -1;
  }
};

/// Parity of |residual ∩ indicator|.
inline bool membrane_parity(const PartialMembrane& m, Sector residual_sector, const EdgeSet& residual) {
  if (m.sector != residual_sector) throw std::invalid_argument("membrane_parity: sector mismatch");
  return m.indicator.overlap_parity(residual);
}

namespace detail {

/// Position of the membrane trace on a facet axis of the given width: the cut
/// runs between coordinates cut_index and cut_index + 1, where -1 means the
/// cut passes between the facet's first row and whatever lies beyond it.
/// For even widths the cut sits at the centre and is invariant under u -> width-1-u.
inline int cut_index(int width) { return width / 2 - 1; }

struct Lattice {
  int lx, ly, lt;
  SyndromeGraph::Builder builder;
  std::vector<int> wall;  // per edge: -1 internal, otherwise the tag of the dangling wall

  Lattice(int x_extent, int y_extent, int t_extent) : lx(x_extent), ly(y_extent), lt(t_extent) {
    builder.add_checks(static_cast<std::size_t>(lx) * ly * lt);
    for (int t = 0; t < lt; ++t)
      for (int y = 0; y < ly; ++y)
        for (int x = 0; x < lx; ++x) {
          if (x + 1 < lx) add_internal(at(x, y, t), at(x + 1, y, t));
          if (y + 1 < ly) add_internal(at(x, y, t), at(x, y + 1, t));
          if (t + 1 < lt) add_internal(at(x, y, t), at(x, y, t + 1));
        }
  }

  CheckId at(int x, int y, int t) const { return static_cast<CheckId>((t * ly + y) * lx + x); }
  std::array<int, 3> coords(CheckId c) const {
    int id = static_cast<int>(c);
    return {id % lx, (id / lx) % ly, id / (lx * ly)};
  }

  void add_internal(CheckId a, CheckId b) {
    builder.add_edge(a, b);
    wall.push_back(-1);
  }
  void add_wall(int x, int y, int t, int tag) {
    builder.add_dangling(at(x, y, t));
    wall.push_back(tag);
  }

  /// Edges crossing the cut (S, complement): internal edges with exactly one
  /// endpoint in S, and dangling edges whose check side differs from the
  /// side assigned to their wall.
  template <class InS, class WallInS>
  EdgeSet cut(const SyndromeGraph& g, InS&& in_s, WallInS&& wall_in_s) const {
    EdgeSet m(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const auto& ed = g.edge(e);
      auto ca = coords(ed.a);
      bool a_in = in_s(ca[0], ca[1], ca[2]);
      bool b_in;
      if (ed.dangling()) {
        b_in = wall_in_s(wall[e]);
      } else {
        auto cb = coords(ed.b);
        b_in = in_s(cb[0], cb[1], cb[2]);
      }
      if (a_in != b_in) m.set(e);
    }
    return m;
  }
};

inline std::vector<std::pair<std::string, Pauli>> make_label(const std::vector<PortFacet>& ports,
                                                            const std::vector<Pauli>& paulis) {
  std::vector<std::pair<std::string, Pauli>> label;
  for (std::size_t i = 0; i < ports.size(); ++i) label.emplace_back(ports[i].name, paulis[i]);
  return label;
}

struct XY {
  int x, y;
};

struct Slot {
  std::vector<XY> sites;  // ccw order along the perimeter
  XY before;              // perimeter site immediately before sites[0]
};

inline std::vector<Slot> spider_slots(int n, int n_ports, int lx, int ly) {
  std::vector<Slot> slots;
  auto make = [&](auto pos, XY before) {
    Slot s;
    for (int k = 0; k < n; ++k) s.sites.push_back(pos(k));
    s.before = before;
    slots.push_back(std::move(s));
  };
  if (n_ports <= 4) {
    make([&](int k) { return XY{lx - 1, 1 + k}; }, XY{lx - 1, 0});
    make([&](int k) { return XY{lx - 2 - k, ly - 1}; }, XY{lx - 1, ly - 1});
    make([&](int k) { return XY{0, ly - 2 - k}; }, XY{0, ly - 1});
    make([&](int k) { return XY{1 + k, 0}; }, XY{0, 0});
  } else {
    make([&](int k) { return XY{lx - 1, 1 + k}; }, XY{lx - 1, 0});
    make([&](int k) { return XY{2 * n + 1 - k, ly - 1}; }, XY{lx - 1, ly - 1});
    make([&](int k) { return XY{n - k, ly - 1}; }, XY{n + 1, ly - 1});
    make([&](int k) { return XY{0, ly - 2 - k}; }, XY{0, ly - 1});
    make([&](int k) { return XY{1 + k, 0}; }, XY{0, 0});
    make([&](int k) { return XY{n + 2 + k, 0}; }, XY{n + 1, 0});
  }
  slots.resize(static_cast<std::size_t>(n_ports));
  return slots;
}

}  // namespace detail

/// Identity block: a (d-1)^3 cubic lattice per sector. Primal is rough on the
/// two x-facets, dual on the two y-facets; IN (t = 0) and OUT (t = top) are ports.
inline BlockSpec build_identity_block(int d, std::string name = "identity") {
  if (d < 2) throw std::invalid_argument("identity block needs d >= 2");
  const int n = d - 1;
  const int c = detail::cut_index(n);
  BlockSpec spec;
  spec.name = std::move(name);
  spec.kind = BlockKind::Identity;
  spec.distance = d;

  std::array<detail::Lattice, 2> lat{detail::Lattice(n, n, n), detail::Lattice(n, n, n)};
  for (int t = 0; t < n; ++t)
    for (int y = 0; y < n; ++y) {
      lat[0].add_wall(0, y, t, 0);
      lat[0].add_wall(n - 1, y, t, 1);
    }
  for (int t = 0; t < n; ++t)
    for (int x = 0; x < n; ++x) {
      lat[1].add_wall(x, 0, t, 0);
      lat[1].add_wall(x, n - 1, t, 1);
    }
  for (int s = 0; s < 2; ++s) spec.graphs[s] = std::move(lat[s].builder).build();

  PortFacet in{"IN", n, {}};
  PortFacet out{"OUT", n, {}};
  for (int s = 0; s < 2; ++s) {
    in.sites[s].resize(static_cast<std::size_t>(n) * n);
    out.sites[s].resize(static_cast<std::size_t>(n) * n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        in.sites[s][u * n + v] = lat[s].at(n - 1 - u, v, 0);
        out.sites[s][u * n + v] = lat[s].at(u, v, n - 1);
      }
  }
  spec.ports = {in, out};

  auto wall_high = [](int tag) { return tag == 1; };
  PartialMembrane xx;
  xx.label = detail::make_label(spec.ports, {Pauli::X, Pauli::X});
  xx.sector = Sector::Primal;
  xx.indicator = lat[0].cut(spec.graphs[0], [&](int x, int, int) { return x > c; }, wall_high);
  PartialMembrane zz;
  zz.label = detail::make_label(spec.ports, {Pauli::Z, Pauli::Z});
  zz.sector = Sector::Dual;
  zz.indicator = lat[1].cut(spec.graphs[1], [&](int, int y, int) { return y > c; }, wall_high);
  spec.membranes = {std::move(xx), std::move(zz)};
  return spec;
}

/// Spider block with 2..6 ports. The slab is (d+1) x (d+1) x (d-1) for up to
/// four ports (ports centred on the side facets, ccw from +x) and a two-cube
/// bar (2d+1) x (d+1) x (d-1) for five or six ports. For a Z-spider the primal
/// sector is rough on the side strips between ports, so its membranes run
/// between consecutive ports; the dual sector is rough top and bottom and
/// carries the single all-port membrane. An X-spider swaps the two sectors.
inline BlockSpec build_spider_block(int d, int n_ports, BlockKind kind, std::string name = "spider") {
  if (d < 2) throw std::invalid_argument("spider block needs d >= 2");
  if (n_ports < 2 || n_ports > 6) throw std::invalid_argument("spider block needs 2..6 ports");
  if (kind == BlockKind::Identity) throw std::invalid_argument("spider kind must be Z or X");
  const int n = d - 1;
  const int c = detail::cut_index(n);
  const int lx = n_ports <= 4 ? n + 2 : 2 * n + 3;
  const int ly = n + 2;
  const int lt = n;
  const Sector ring = kind == BlockKind::ZSpider ? Sector::Primal : Sector::Dual;
  const Sector sheet = ring == Sector::Primal ? Sector::Dual : Sector::Primal;
  const Pauli ring_pauli = ring == Sector::Primal ? Pauli::X : Pauli::Z;
  const Pauli sheet_pauli = ring == Sector::Primal ? Pauli::Z : Pauli::X;

  BlockSpec spec;
  spec.name = std::move(name);
  spec.kind = kind;
  spec.distance = d;

  auto slots = detail::spider_slots(n, n_ports, lx, ly);

  // Arcs of the perimeter between consecutive ports, found by angle around the
  // slab centre; arc k runs ccw from port k's trace to port k+1's trace.
  const double cx = (lx - 1) / 2.0;
  const double cy = (ly - 1) / 2.0;
  std::vector<double> theta;
  for (const auto& slot : slots) {
    detail::XY a = c >= 0 ? slot.sites[c] : slot.before;
    detail::XY b = slot.sites[c + 1];
    theta.push_back(std::atan2((a.y + b.y) / 2.0 - cy, (a.x + b.x) / 2.0 - cx));
  }
  auto wrap = [](double a) {
    const double two_pi = 2 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
  };
  auto arc_of = [&](int x, int y) {
    double phi = std::atan2(y - cy, x - cx);
    for (int k = 0; k < n_ports; ++k) {
      double start = theta[k];
      double span = wrap(theta[(k + 1) % n_ports] - start);
      if (wrap(phi - start) < span) return k;
    }
    return n_ports - 1;
  };

  std::vector<std::vector<char>> is_port(lx, std::vector<char>(ly, 0));
  for (const auto& slot : slots)
    for (auto p : slot.sites) is_port[p.x][p.y] = 1;

  std::array<detail::Lattice, 2> lat{detail::Lattice(lx, ly, lt), detail::Lattice(lx, ly, lt)};
  auto& ring_lat = lat[static_cast<int>(ring)];
  auto& sheet_lat = lat[static_cast<int>(sheet)];
  for (int t = 0; t < lt; ++t)
    for (int y = 0; y < ly; ++y)
      for (int x = 0; x < lx; ++x) {
        bool perimeter = x == 0 || y == 0 || x == lx - 1 || y == ly - 1;
        if (perimeter && !is_port[x][y]) ring_lat.add_wall(x, y, t, arc_of(x, y));
      }
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x < lx; ++x) {
      sheet_lat.add_wall(x, y, 0, 0);
      sheet_lat.add_wall(x, y, lt - 1, 1);
    }
  for (int s = 0; s < 2; ++s) spec.graphs[s] = std::move(lat[s].builder).build();

  for (int k = 0; k < n_ports; ++k) {
    PortFacet port{"P" + std::to_string(k + 1), n, {}};
    for (int s = 0; s < 2; ++s) {
      port.sites[s].resize(static_cast<std::size_t>(n) * n);
      for (int tau = 0; tau < n; ++tau)
        for (int t = 0; t < n; ++t) {
          auto p = slots[k].sites[tau];
          int u = ring == Sector::Primal ? tau : t;
          int v = ring == Sector::Primal ? t : tau;
          port.sites[s][u * n + v] = lat[s].at(p.x, p.y, t);
        }
    }
    spec.ports.push_back(std::move(port));
  }

  PartialMembrane all_ports;
  all_ports.label = detail::make_label(spec.ports, std::vector<Pauli>(n_ports, sheet_pauli));
  all_ports.sector = sheet;
  all_ports.indicator = sheet_lat.cut(
      spec.graph(sheet), [&](int, int, int t) { return t > c; }, [](int tag) { return tag == 1; });
  std::vector<PartialMembrane> pairs;
  for (int k = 0; k + 1 < n_ports; ++k) {
    std::vector<Pauli> paulis(n_ports, Pauli::I);
    paulis[k] = ring_pauli;
    paulis[k + 1] = ring_pauli;
    PartialMembrane m;
    m.label = detail::make_label(spec.ports, paulis);
    m.sector = ring;
    m.indicator = ring_lat.cut(
        spec.graph(ring), [&](int x, int y, int) { return arc_of(x, y) == k; }, [&](int tag) { return tag == k; });
    pairs.push_back(std::move(m));
  }
  spec.membranes.push_back(std::move(all_ports));
  for (auto& m : pairs) spec.membranes.push_back(std::move(m));
  return spec;
}

}  // namespace moddec
