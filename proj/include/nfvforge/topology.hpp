#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nfvforge/errors.hpp"

namespace nfvforge {

enum class Arch { kFatTree, kVl2, kBcube };

inline const char* to_string(Arch arch) {
  switch (arch) {
    case Arch::kFatTree: return "fat-tree";
    case Arch::kVl2: return "vl2";
    case Arch::kBcube: return "bcube";
  }
  return "?";
}

inline Arch arch_from_string(const std::string& name) {
  if (name == "fat-tree") return Arch::kFatTree;
  if (name == "vl2") return Arch::kVl2;
  if (name == "bcube") return Arch::kBcube;
  throw ConfigError("unknown architecture '" + name + "'");
}

enum class NodeKind {
  kServer,
  kEdgeTor,
  kAggregation,
  kCore,
  kIntermediate,
  kBcubeSwitch,
};

inline const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kServer: return "SERVER";
    case NodeKind::kEdgeTor: return "EDGE_TOR";
    case NodeKind::kAggregation: return "AGGREGATION";
    case NodeKind::kCore: return "CORE";
    case NodeKind::kIntermediate: return "INTERMEDIATE";
    case NodeKind::kBcubeSwitch: return "BCUBE_SWITCH";
  }
  return "?";
}

inline NodeKind node_kind_from_string(const std::string& name) {
  if (name == "SERVER") return NodeKind::kServer;
  if (name == "EDGE_TOR") return NodeKind::kEdgeTor;
  if (name == "AGGREGATION") return NodeKind::kAggregation;
  if (name == "CORE") return NodeKind::kCore;
  if (name == "INTERMEDIATE") return NodeKind::kIntermediate;
  if (name == "BCUBE_SWITCH") return NodeKind::kBcubeSwitch;
  throw DataError("unknown node kind '" + name + "'");
}

/// level holds the BCube switch level, the pod index for fat-tree pod
/// switches, and 0 for everything else.
struct Node {
  int id = 0;
  NodeKind kind = NodeKind::kServer;
  int level = 0;
  std::string label;

  bool operator==(const Node&) const = default;
};

/// Undirected, stored with a < b. Capacity stays unset by default; none of
/// the builders assigns one.
struct Link {
  int a = 0;
  int b = 0;
  std::optional<double> capacity;

  bool operator==(const Link&) const = default;
};

struct Path {
  std::vector<int> hops;

  bool operator==(const Path&) const = default;
  bool operator<(const Path& other) const { return hops < other.hops; }
};

struct FatTreeParams {
  int k = 0;

  bool operator==(const FatTreeParams&) const = default;
};
struct Vl2Params {
  int d_a = 0;
  int d_i = 0;
  int servers_per_tor = 20;

  bool operator==(const Vl2Params&) const = default;
};
struct BcubeParams {
  int n = 0;
  int k = 0;

  bool operator==(const BcubeParams&) const = default;
};
using TopologyParams = std::variant<FatTreeParams, Vl2Params, BcubeParams>;

struct Topology {
  Arch arch = Arch::kFatTree;
  TopologyParams params = FatTreeParams{};
  std::vector<Node> nodes;
  std::vector<Link> links;
  /// Per placed server: the edge/ToR node id it hangs off (fat tree, VL2)
  /// or its base-n address (BCube). Not serialized.
  std::map<int, int> server_slot;
  /// (src, dst) with src < dst, both server node ids.
  std::map<std::pair<int, int>, std::vector<Path>> paths;

  std::vector<int> server_ids() const {
    std::vector<int> ids;
    for (const auto& node : nodes)
      if (node.kind == NodeKind::kServer) ids.push_back(node.id);
    return ids;
  }

  bool operator==(const Topology&) const = default;
};

// ---------------------------------------------------------------------------
// parameter fitting
// ---------------------------------------------------------------------------

namespace detail {

inline long long ipow(long long base, int exp) {
  long long value = 1;
  for (int i = 0; i < exp; ++i) {
    value *= base;
    if (value > (1LL << 40)) throw ConfigError("topology size out of range");
  }
  return value;
}

inline long long capacity_of(const TopologyParams& params) {
  if (const auto* ft = std::get_if<FatTreeParams>(&params))
    return static_cast<long long>(ft->k) * ft->k * ft->k / 4;
  if (const auto* vl2 = std::get_if<Vl2Params>(&params))
    return static_cast<long long>(vl2->d_a) * vl2->d_i / 4 *
           vl2->servers_per_tor;
  const auto& bc = std::get<BcubeParams>(params);
  return ipow(bc.n, bc.k + 1);
}

}  // namespace detail

/// Smallest even k with k^3/4 >= requested servers.
inline FatTreeParams fit_fat_tree(int requested_servers) {
  if (requested_servers < 1)
    throw ConfigError("requested_servers must be positive");
  for (int k = 2;; k += 2) {
    const long long cap = static_cast<long long>(k) * k * k / 4;
    if (cap >= requested_servers) return {k};
    if (cap > (1LL << 40)) throw ConfigError("topology size out of range");
  }
}

/// Smallest even d_a = d_i whose ToR tier holds the requested servers.
inline Vl2Params fit_vl2(int requested_servers, int servers_per_tor) {
  if (requested_servers < 1)
    throw ConfigError("requested_servers must be positive");
  if (servers_per_tor < 1)
    throw ConfigError("servers_per_tor must be positive");
  for (int d = 2;; d += 2) {
    const long long cap =
        static_cast<long long>(d) * d / 4 * servers_per_tor;
    if (cap >= requested_servers) return {d, d, servers_per_tor};
    if (cap > (1LL << 40)) throw ConfigError("topology size out of range");
  }
}

/// Smallest level count k with n^(k+1) >= requested servers.
inline BcubeParams fit_bcube(int requested_servers, int n) {
  if (requested_servers < 1)
    throw ConfigError("requested_servers must be positive");
  if (n < 2) throw ConfigError("n must be at least 2");
  for (int k = 0;; ++k) {
    if (detail::ipow(n, k + 1) >= requested_servers) return {n, k};
  }
}

// ---------------------------------------------------------------------------
// fabric construction (switch tiers only; servers attach in place_servers)
// ---------------------------------------------------------------------------

namespace detail {

inline void add_link(Topology& topo, int a, int b) {
  if (a > b) std::swap(a, b);
  topo.links.push_back({a, b, std::nullopt});
}

inline void finish_links(Topology& topo) {
  std::sort(topo.links.begin(), topo.links.end(),
            [](const Link& x, const Link& y) {
              return std::pair(x.a, x.b) < std::pair(y.a, y.b);
            });
}

// Node-id layout, fat tree: cores first, then per pod k/2 aggregation
// switches followed by k/2 edge switches. The path enumerator relies on it.
inline int fat_tree_agg_id(int k, int pod, int agg) {
  return (k / 2) * (k / 2) + pod * k + agg;
}
inline int fat_tree_edge_id(int k, int pod, int edge) {
  return (k / 2) * (k / 2) + pod * k + k / 2 + edge;
}

// Node-id layout, VL2: intermediates, then aggregations, then ToRs.
inline int vl2_agg_id(const Vl2Params& p, int agg) { return p.d_a / 2 + agg; }
inline int vl2_tor_id(const Vl2Params& p, int tor) {
  return p.d_a / 2 + p.d_i + tor;
}

// Node-id layout, BCube fabric: level * n^k + index before pruning. After
// partial placement the ids are compacted, so lookups must go through the
// adjacency, not this formula.
inline long long bcube_switch_index(long long addr, int level, int n) {
  const long long hi = addr / ipow(n, level + 1);
  const long long lo = addr % ipow(n, level);
  return hi * ipow(n, level) + lo;
}

}  // namespace detail

inline Topology fat_tree_fabric(int k) {
  if (k < 2 || k % 2 != 0) throw ConfigError("k must be even and >= 2");
  Topology topo;
  topo.arch = Arch::kFatTree;
  topo.params = FatTreeParams{k};
  const int half = k / 2;

  for (int j = 0; j < half * half; ++j)
    topo.nodes.push_back(
        {j, NodeKind::kCore, 0, "core" + std::to_string(j)});
  for (int p = 0; p < k; ++p) {
    for (int a = 0; a < half; ++a)
      topo.nodes.push_back({detail::fat_tree_agg_id(k, p, a),
                            NodeKind::kAggregation, p,
                            "pod" + std::to_string(p) + "-agg" +
                                std::to_string(a)});
    for (int e = 0; e < half; ++e)
      topo.nodes.push_back({detail::fat_tree_edge_id(k, p, e),
                            NodeKind::kEdgeTor, p,
                            "pod" + std::to_string(p) + "-edge" +
                                std::to_string(e)});
  }

  for (int p = 0; p < k; ++p)
    for (int a = 0; a < half; ++a) {
      for (int e = 0; e < half; ++e)
        detail::add_link(topo, detail::fat_tree_agg_id(k, p, a),
                         detail::fat_tree_edge_id(k, p, e));
      // Aggregation switch a in every pod owns the same k/2-core stripe.
      for (int j = a * half; j < (a + 1) * half; ++j)
        detail::add_link(topo, j, detail::fat_tree_agg_id(k, p, a));
    }
  detail::finish_links(topo);
  return topo;
}

inline Topology vl2_fabric(int d_a, int d_i, int servers_per_tor) {
  if (d_a < 2 || d_a % 2 != 0) throw ConfigError("d_a must be even and >= 2");
  if (d_i < 2 || d_i % 2 != 0) throw ConfigError("d_i must be even and >= 2");
  if (servers_per_tor < 1)
    throw ConfigError("servers_per_tor must be positive");
  Topology topo;
  topo.arch = Arch::kVl2;
  const Vl2Params params{d_a, d_i, servers_per_tor};
  topo.params = params;

  for (int j = 0; j < d_a / 2; ++j)
    topo.nodes.push_back(
        {j, NodeKind::kIntermediate, 0, "int" + std::to_string(j)});
  for (int j = 0; j < d_i; ++j)
    topo.nodes.push_back({detail::vl2_agg_id(params, j),
                          NodeKind::kAggregation, 0,
                          "agg" + std::to_string(j)});
  const int tors = d_a * d_i / 4;
  for (int j = 0; j < tors; ++j)
    topo.nodes.push_back({detail::vl2_tor_id(params, j), NodeKind::kEdgeTor,
                          0, "tor" + std::to_string(j)});

  for (int a = 0; a < d_i; ++a)
    for (int m = 0; m < d_a / 2; ++m)
      detail::add_link(topo, m, detail::vl2_agg_id(params, a));
  for (int t = 0; t < tors; ++t) {
    detail::add_link(topo, detail::vl2_tor_id(params, t),
                     detail::vl2_agg_id(params, (2 * t) % d_i));
    detail::add_link(topo, detail::vl2_tor_id(params, t),
                     detail::vl2_agg_id(params, (2 * t + 1) % d_i));
  }
  detail::finish_links(topo);
  return topo;
}

inline Topology bcube_fabric(int n, int k) {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (k < 0) throw ConfigError("k must be non-negative");
  detail::ipow(n, k + 1);  // size guard
  Topology topo;
  topo.arch = Arch::kBcube;
  topo.params = BcubeParams{n, k};
  const long long per_level = detail::ipow(n, k);
  for (int level = 0; level <= k; ++level)
    for (long long s = 0; s < per_level; ++s)
      topo.nodes.push_back({static_cast<int>(level * per_level + s),
                            NodeKind::kBcubeSwitch, level,
                            "bcube-L" + std::to_string(level) + "-S" +
                                std::to_string(s)});
  return topo;
}

// ---------------------------------------------------------------------------
// server placement
// ---------------------------------------------------------------------------

namespace detail {

inline void compact_bcube(Topology& topo) {
  std::set<int> linked;
  for (const Link& l : topo.links) {
    linked.insert(l.a);
    linked.insert(l.b);
  }
  std::vector<int> remap(topo.nodes.size(), -1);
  std::vector<Node> kept;
  for (const Node& node : topo.nodes) {
    if (node.kind == NodeKind::kBcubeSwitch && linked.count(node.id) == 0)
      continue;
    remap[static_cast<std::size_t>(node.id)] = static_cast<int>(kept.size());
    kept.push_back(node);
    kept.back().id = static_cast<int>(kept.size()) - 1;
  }
  topo.nodes = std::move(kept);
  for (Link& l : topo.links) {
    l.a = remap[static_cast<std::size_t>(l.a)];
    l.b = remap[static_cast<std::size_t>(l.b)];
  }
  std::map<int, int> slot;
  for (const auto& [server, addr] : topo.server_slot)
    slot[remap[static_cast<std::size_t>(server)]] = addr;
  topo.server_slot = std::move(slot);
}

}  // namespace detail

/// Appends `requested_servers` servers to a fabric, spread as evenly as
/// possible over the edge/ToR tier (level-0 switches for BCube): the first
/// `requested mod T` slots take one extra. BCube switches left without any
/// placed server are dropped and ids re-compacted.
inline Topology place_servers(Topology topo, int requested_servers) {
  if (!topo.server_slot.empty())
    throw ConfigError("servers are already placed");
  if (requested_servers < 1)
    throw ConfigError("requested_servers must be positive");
  const long long capacity = detail::capacity_of(topo.params);
  if (requested_servers > capacity)
    throw ConfigError("requested " + std::to_string(requested_servers) +
                      " servers but the " + std::string(to_string(topo.arch)) +
                      " parameterization caps at " + std::to_string(capacity));

  std::vector<int> tor_ids;
  for (const Node& node : topo.nodes) {
    if (topo.arch == Arch::kBcube) {
      if (node.kind == NodeKind::kBcubeSwitch && node.level == 0)
        tor_ids.push_back(node.id);
    } else if (node.kind == NodeKind::kEdgeTor) {
      tor_ids.push_back(node.id);
    }
  }

  const int tors = static_cast<int>(tor_ids.size());
  const int base = requested_servers / tors;
  const int extra = requested_servers % tors;
  int next_id = static_cast<int>(topo.nodes.size());
  int seq = 0;

  const auto* bc = std::get_if<BcubeParams>(&topo.params);
  for (int t = 0; t < tors; ++t) {
    const int count = base + (t < extra ? 1 : 0);
    for (int j = 0; j < count; ++j, ++seq) {
      const int id = next_id++;
      topo.nodes.push_back(
          {id, NodeKind::kServer, 0, "srv" + std::to_string(seq)});
      if (bc != nullptr) {
        const long long addr = static_cast<long long>(t) * bc->n + j;
        topo.server_slot[id] = static_cast<int>(addr);
        for (int level = 0; level <= bc->k; ++level) {
          const long long per_level = detail::ipow(bc->n, bc->k);
          const long long sw =
              level * per_level + detail::bcube_switch_index(addr, level, bc->n);
          detail::add_link(topo, id, static_cast<int>(sw));
        }
      } else {
        topo.server_slot[id] = tor_ids[static_cast<std::size_t>(t)];
        detail::add_link(topo, id, tor_ids[static_cast<std::size_t>(t)]);
      }
    }
  }

  if (bc != nullptr && requested_servers < capacity)
    detail::compact_bcube(topo);
  detail::finish_links(topo);
  return topo;
}

inline Topology build_fat_tree(int k) {
  Topology fabric = fat_tree_fabric(k);
  return place_servers(std::move(fabric), k * k * k / 4);
}

inline Topology build_vl2(int d_a, int d_i, int servers_per_tor) {
  Topology fabric = vl2_fabric(d_a, d_i, servers_per_tor);
  return place_servers(std::move(fabric),
                       d_a * d_i / 4 * servers_per_tor);
}

inline Topology build_bcube(int n, int k) {
  Topology fabric = bcube_fabric(n, k);
  return place_servers(std::move(fabric),
                       static_cast<int>(detail::ipow(n, k + 1)));
}

// ---------------------------------------------------------------------------
// path enumeration
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<int>> adjacency(const Topology& topo) {
  std::vector<std::vector<int>> adj(topo.nodes.size());
  for (const Link& l : topo.links) {
    adj[static_cast<std::size_t>(l.a)].push_back(l.b);
    adj[static_cast<std::size_t>(l.b)].push_back(l.a);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

inline std::vector<Path> fat_tree_paths(const Topology& topo, int src,
                                        int dst) {
  const auto& params = std::get<FatTreeParams>(topo.params);
  const int k = params.k;
  const int half = k / 2;
  const int src_edge = topo.server_slot.at(src);
  const int dst_edge = topo.server_slot.at(dst);
  std::vector<Path> out;

  if (src_edge == dst_edge) {
    out.push_back({{src, src_edge, dst}});
    return out;
  }
  const int src_pod = topo.nodes[static_cast<std::size_t>(src_edge)].level;
  const int dst_pod = topo.nodes[static_cast<std::size_t>(dst_edge)].level;
  if (src_pod == dst_pod) {
    for (int a = 0; a < half; ++a)
      out.push_back(
          {{src, src_edge, fat_tree_agg_id(k, src_pod, a), dst_edge, dst}});
    return out;
  }
  // Core j talks only to aggregation index j / (k/2), so both pods must use
  // the same aggregation index.
  for (int a = 0; a < half; ++a)
    for (int j = a * half; j < (a + 1) * half; ++j)
      out.push_back({{src, src_edge, fat_tree_agg_id(k, src_pod, a), j,
                      fat_tree_agg_id(k, dst_pod, a), dst_edge, dst}});
  return out;
}

inline std::vector<Path> vl2_paths(const Topology& topo, int src, int dst) {
  const auto& params = std::get<Vl2Params>(topo.params);
  const int src_tor = topo.server_slot.at(src);
  const int dst_tor = topo.server_slot.at(dst);
  std::vector<Path> out;

  if (src_tor == dst_tor) {
    out.push_back({{src, src_tor, dst}});
    return out;
  }
  const auto aggs_of = [&params](int tor_node) {
    const int t = tor_node - params.d_a / 2 - params.d_i;
    std::vector<int> aggs = {vl2_agg_id(params, (2 * t) % params.d_i),
                             vl2_agg_id(params, (2 * t + 1) % params.d_i)};
    std::sort(aggs.begin(), aggs.end());
    return aggs;
  };
  const std::vector<int> src_aggs = aggs_of(src_tor);
  const std::vector<int> dst_aggs = aggs_of(dst_tor);

  // ToRs wired to a common aggregation switch reach each other under it
  // without crossing the intermediate tier.
  for (int g : src_aggs)
    if (std::find(dst_aggs.begin(), dst_aggs.end(), g) != dst_aggs.end())
      out.push_back({{src, src_tor, g, dst_tor, dst}});
  for (int up : src_aggs)
    for (int down : dst_aggs) {
      if (up == down) continue;
      for (int m = 0; m < params.d_a / 2; ++m)
        out.push_back({{src, src_tor, up, m, down, dst_tor, dst}});
    }
  return out;
}

inline std::vector<Path> bcube_paths(const Topology& topo, int src, int dst,
                                     const std::vector<std::vector<int>>& adj) {
  const auto& params = std::get<BcubeParams>(topo.params);
  const int n = params.n;
  const int k = params.k;

  std::map<int, int> server_by_addr;
  for (const auto& [server, addr] : topo.server_slot)
    server_by_addr[addr] = server;
  const auto digit = [n](long long addr, int pos) {
    return static_cast<int>(addr / ipow(n, pos) % n);
  };
  const auto with_digit = [n, &digit](long long addr, int pos, int value) {
    return addr + static_cast<long long>(value - digit(addr, pos)) *
                      ipow(n, pos);
  };
  const auto level_switch = [&](int server, int level) {
    for (int neighbor : adj[static_cast<std::size_t>(server)])
      if (topo.nodes[static_cast<std::size_t>(neighbor)].kind ==
              NodeKind::kBcubeSwitch &&
          topo.nodes[static_cast<std::size_t>(neighbor)].level == level)
        return neighbor;
    throw DataError("server is missing its level-" + std::to_string(level) +
                    " uplink");
  };

  const long long src_addr = topo.server_slot.at(src);
  const long long dst_addr = topo.server_slot.at(dst);
  std::set<std::vector<int>> seen;
  std::vector<Path> out;

  // One route per rotation of the digit-correction order (k, k-1, ..., 0);
  // rotation r fixes digit r first. Routes through unplaced servers are
  // dropped.
  for (int r = 0; r <= k; ++r) {
    std::vector<int> order;
    for (int d = r; d >= 0; --d) order.push_back(d);
    for (int d = k; d > r; --d) order.push_back(d);

    std::vector<int> hops = {src};
    long long cur_addr = src_addr;
    int cur = src;
    bool blocked = false;
    for (int pos : order) {
      if (digit(cur_addr, pos) == digit(dst_addr, pos)) continue;
      const long long next_addr =
          with_digit(cur_addr, pos, digit(dst_addr, pos));
      const auto it = server_by_addr.find(static_cast<int>(next_addr));
      if (it == server_by_addr.end()) {
        blocked = true;
        break;
      }
      hops.push_back(level_switch(cur, pos));
      hops.push_back(it->second);
      cur = it->second;
      cur_addr = next_addr;
    }
    if (!blocked && seen.insert(hops).second) out.push_back({hops});
  }

  if (!out.empty()) return out;

  // All rotation routes ran through unplaced addresses; fall back to one
  // breadth-first shortest path, which exists because placement keeps the
  // graph connected.
  std::vector<int> parent(topo.nodes.size(), -1);
  std::queue<int> frontier;
  frontier.push(src);
  parent[static_cast<std::size_t>(src)] = src;
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop();
    if (cur == dst) break;
    for (int next : adj[static_cast<std::size_t>(cur)])
      if (parent[static_cast<std::size_t>(next)] == -1) {
        parent[static_cast<std::size_t>(next)] = cur;
        frontier.push(next);
      }
  }
  if (parent[static_cast<std::size_t>(dst)] == -1)
    throw DataError("no path between the requested servers");
  std::vector<int> hops;
  for (int cur = dst; cur != src; cur = parent[static_cast<std::size_t>(cur)])
    hops.push_back(cur);
  hops.push_back(src);
  std::reverse(hops.begin(), hops.end());
  return {{hops}};
}

inline std::vector<Path> enumerate_paths_impl(
    const Topology& topo, int src, int dst, int max_paths,
    const std::vector<std::vector<int>>& adj) {
  std::vector<Path> out;
  switch (topo.arch) {
    case Arch::kFatTree: out = fat_tree_paths(topo, src, dst); break;
    case Arch::kVl2: out = vl2_paths(topo, src, dst); break;
    case Arch::kBcube: out = bcube_paths(topo, src, dst, adj); break;
  }
  std::sort(out.begin(), out.end());
  if (static_cast<int>(out.size()) > max_paths)
    out.resize(static_cast<std::size_t>(max_paths));
  return out;
}

}  // namespace detail

/// Lists server-to-server paths, truncated to max_paths in lexicographic
/// hop-sequence order.
inline std::vector<Path> enumerate_paths(const Topology& topo, int src,
                                         int dst, int max_paths) {
  if (max_paths < 1) throw ConfigError("max_paths must be positive");
  if (src == dst) throw DataError("src and dst must differ");
  const auto is_server = [&topo](int id) {
    return id >= 0 && id < static_cast<int>(topo.nodes.size()) &&
           topo.nodes[static_cast<std::size_t>(id)].kind == NodeKind::kServer;
  };
  if (!is_server(src) || !is_server(dst))
    throw DataError("path endpoints must be servers");
  return detail::enumerate_paths_impl(topo, src, dst, max_paths,
                                      detail::adjacency(topo));
}

// ---------------------------------------------------------------------------
// one-call build
// ---------------------------------------------------------------------------

struct TopologyRequest {
  Arch arch = Arch::kFatTree;
  int requested_servers = 0;
  int max_paths = 8;
  std::optional<int> k;    // fat tree override; fitted when unset
  std::optional<int> d_a;  // VL2 overrides; must come as a pair
  std::optional<int> d_i;
  int servers_per_tor = 20;
  std::optional<int> bcube_n;  // BCube branching factor, default 2
};

/// fit -> fabric -> placement -> per-pair path enumeration.
inline Topology build_full(const TopologyRequest& req) {
  if (req.max_paths < 1) throw ConfigError("max_paths must be positive");
  if (req.requested_servers < 1)
    throw ConfigError("requested_servers must be positive");

  Topology fabric;
  switch (req.arch) {
    case Arch::kFatTree: {
      const int k = req.k ? *req.k : fit_fat_tree(req.requested_servers).k;
      fabric = fat_tree_fabric(k);
      break;
    }
    case Arch::kVl2: {
      if (req.d_a.has_value() != req.d_i.has_value())
        throw ConfigError("d_a and d_i must be given together");
      const Vl2Params params =
          req.d_a ? Vl2Params{*req.d_a, *req.d_i, req.servers_per_tor}
                  : fit_vl2(req.requested_servers, req.servers_per_tor);
      fabric = vl2_fabric(params.d_a, params.d_i, params.servers_per_tor);
      break;
    }
    case Arch::kBcube: {
      const int n = req.bcube_n.value_or(2);
      fabric = bcube_fabric(n, fit_bcube(req.requested_servers, n).k);
      break;
    }
  }

  Topology topo = place_servers(std::move(fabric), req.requested_servers);
  const auto adj = detail::adjacency(topo);
  const std::vector<int> servers = topo.server_ids();
  for (std::size_t i = 0; i < servers.size(); ++i)
    for (std::size_t j = i + 1; j < servers.size(); ++j)
      topo.paths[{servers[i], servers[j]}] = detail::enumerate_paths_impl(
          topo, servers[i], servers[j], req.max_paths, adj);
  return topo;
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

struct ValidationReport {
  std::vector<std::string> findings;

  bool ok() const { return findings.empty(); }
};

inline ValidationReport validate(const Topology& topo) {
  ValidationReport report;
  const auto flag = [&report](const std::string& text) {
    report.findings.push_back(text);
  };
  const int n_nodes = static_cast<int>(topo.nodes.size());

  for (int i = 0; i < n_nodes; ++i)
    if (topo.nodes[static_cast<std::size_t>(i)].id != i) {
      flag("node ids are not dense 0..N-1");
      break;
    }

  std::set<std::pair<int, int>> link_set;
  for (const Link& l : topo.links) {
    if (l.a < 0 || l.b < 0 || l.a >= n_nodes || l.b >= n_nodes) {
      flag("link " + std::to_string(l.a) + "-" + std::to_string(l.b) +
           " has an endpoint outside the node range");
      continue;
    }
    if (l.a == l.b)
      flag("self-link at node " + std::to_string(l.a));
    if (l.a > l.b)
      flag("link " + std::to_string(l.a) + "-" + std::to_string(l.b) +
           " is not stored with a < b");
    if (!link_set.insert({std::min(l.a, l.b), std::max(l.a, l.b)}).second)
      flag("duplicate link " + std::to_string(l.a) + "-" +
           std::to_string(l.b));
  }

  if (n_nodes > 0) {
    const auto adj = detail::adjacency(topo);
    std::vector<bool> seen(static_cast<std::size_t>(n_nodes), false);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = true;
    int reached = 1;
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop();
      for (int next : adj[static_cast<std::size_t>(cur)])
        if (!seen[static_cast<std::size_t>(next)]) {
          seen[static_cast<std::size_t>(next)] = true;
          ++reached;
          frontier.push(next);
        }
    }
    if (reached != n_nodes)
      flag("graph is disconnected: " + std::to_string(n_nodes - reached) +
           " of " + std::to_string(n_nodes) + " nodes unreachable");

    const auto degree_of = [&adj](int id) {
      return static_cast<int>(adj[static_cast<std::size_t>(id)].size());
    };
    const auto kind_degree = [&](int id, NodeKind kind) {
      int count = 0;
      for (int neighbor : adj[static_cast<std::size_t>(id)])
        if (topo.nodes[static_cast<std::size_t>(neighbor)].kind == kind)
          ++count;
      return count;
    };
    const auto expect = [&](bool good, const Node& node,
                            const std::string& what) {
      if (!good) flag(node.label + ": " + what);
    };

    for (const Node& node : topo.nodes) {
      switch (topo.arch) {
        case Arch::kFatTree: {
          const int k = std::get<FatTreeParams>(topo.params).k;
          if (node.kind == NodeKind::kCore)
            expect(degree_of(node.id) == k, node,
                   "core degree != " + std::to_string(k));
          else if (node.kind == NodeKind::kAggregation)
            expect(degree_of(node.id) == k, node,
                   "aggregation degree != " + std::to_string(k));
          else if (node.kind == NodeKind::kEdgeTor) {
            expect(kind_degree(node.id, NodeKind::kAggregation) == k / 2,
                   node, "edge uplink count != k/2");
            expect(kind_degree(node.id, NodeKind::kServer) <= k / 2, node,
                   "edge carries more than k/2 servers");
          } else if (node.kind == NodeKind::kServer)
            expect(degree_of(node.id) == 1, node, "server degree != 1");
          break;
        }
        case Arch::kVl2: {
          const auto& p = std::get<Vl2Params>(topo.params);
          if (node.kind == NodeKind::kIntermediate)
            expect(degree_of(node.id) == p.d_i, node,
                   "intermediate degree != d_i");
          else if (node.kind == NodeKind::kAggregation)
            expect(kind_degree(node.id, NodeKind::kIntermediate) ==
                       p.d_a / 2,
                   node, "aggregation not wired to all intermediates");
          else if (node.kind == NodeKind::kEdgeTor) {
            expect(kind_degree(node.id, NodeKind::kAggregation) == 2, node,
                   "ToR uplink count != 2");
            expect(kind_degree(node.id, NodeKind::kServer) <=
                       p.servers_per_tor,
                   node, "ToR carries more servers than servers_per_tor");
          } else if (node.kind == NodeKind::kServer)
            expect(degree_of(node.id) == 1, node, "server degree != 1");
          break;
        }
        case Arch::kBcube: {
          const auto& p = std::get<BcubeParams>(topo.params);
          if (node.kind == NodeKind::kServer)
            expect(degree_of(node.id) == p.k + 1, node,
                   "server degree != k+1");
          else if (node.kind == NodeKind::kBcubeSwitch)
            expect(degree_of(node.id) >= 1 && degree_of(node.id) <= p.n,
                   node, "switch degree outside [1, n]");
          break;
        }
      }
    }
  }

  for (const auto& [key, list] : topo.paths) {
    const auto [src, dst] = key;
    const std::string pair_name =
        "pair s" + std::to_string(src) + "-s" + std::to_string(dst);
    const auto is_server = [&](int id) {
      return id >= 0 && id < n_nodes &&
             topo.nodes[static_cast<std::size_t>(id)].kind ==
                 NodeKind::kServer;
    };
    if (!is_server(src) || !is_server(dst) || src >= dst) {
      flag(pair_name + ": malformed path key");
      continue;
    }
    if (list.empty()) flag(pair_name + ": empty path list");
    for (const Path& path : list) {
      if (path.hops.size() < 2 || path.hops.front() != src ||
          path.hops.back() != dst) {
        flag(pair_name + ": path endpoints do not match the key");
        continue;
      }
      std::set<int> visited;
      bool broken = false;
      for (std::size_t i = 0; i < path.hops.size(); ++i) {
        if (!visited.insert(path.hops[i]).second) {
          flag(pair_name + ": path revisits node " +
               std::to_string(path.hops[i]));
          broken = true;
          break;
        }
        if (i + 1 < path.hops.size()) {
          const int a = std::min(path.hops[i], path.hops[i + 1]);
          const int b = std::max(path.hops[i], path.hops[i + 1]);
          if (link_set.count({a, b}) == 0) {
            flag(pair_name + ": hop " + std::to_string(path.hops[i]) + "->" +
                 std::to_string(path.hops[i + 1]) + " is not a link");
            broken = true;
            break;
          }
        }
      }
      if (broken) continue;
    }
  }
  return report;
}

}  // namespace nfvforge
