#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "nfvforge/errors.hpp"
#include "nfvforge/scaling.hpp"
#include "nfvforge/topology.hpp"
#include "nfvforge/traffic.hpp"
#include "nfvforge/workload.hpp"

namespace nfvforge {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// policies.json
// ---------------------------------------------------------------------------

inline json to_json(const Workload& workload) {
  json enterprises = json::array();
  for (const auto& enterprise : workload.enterprises) {
    json policies = json::array();
    for (const auto& policy : enterprise.policies) {
      json chain = json::array();
      for (const auto& nf : policy.chain)
        chain.push_back({{"type", nf.type}, {"instance_id", nf.instance_id}});
      policies.push_back(
          {{"policy_id", policy.policy_id}, {"chain", std::move(chain)}});
    }
    enterprises.push_back({{"id", enterprise.profile.enterprise_id},
                           {"nf_budget", enterprise.profile.nf_budget},
                           {"policies", std::move(policies)}});
  }
  return {{"seed", workload.seed}, {"enterprises", std::move(enterprises)}};
}

/// Rebuilds a Workload from policies.json. The catalog is not part of the
/// file, so the profiles come back with an empty one; the downstream stages
/// only need the policy chains.
inline Workload workload_from_json(const json& doc) {
  Workload workload;
  workload.seed = doc.at("seed").get<std::uint64_t>();
  for (const json& ent : doc.at("enterprises")) {
    EnterpriseWorkload enterprise;
    enterprise.profile.enterprise_id = ent.at("id").get<int>();
    enterprise.profile.nf_budget = ent.at("nf_budget").get<int>();
    for (const json& pol : ent.at("policies")) {
      Policy policy;
      policy.enterprise_id = enterprise.profile.enterprise_id;
      policy.policy_id = pol.at("policy_id").get<int>();
      for (const json& nf : pol.at("chain"))
        policy.chain.push_back({nf.at("type").get<std::string>(),
                                nf.at("instance_id").get<int>()});
      enterprise.policies.push_back(std::move(policy));
    }
    workload.enterprises.push_back(std::move(enterprise));
  }
  return workload;
}

// ---------------------------------------------------------------------------
// flows.json
// ---------------------------------------------------------------------------

inline json to_json(const std::vector<FlowAssignment>& flows) {
  json out = json::array();
  for (const auto& flow : flows) {
    json rates = json::object();
    for (const auto& [policy_id, rate] : flow.per_policy_rate)
      rates[std::to_string(policy_id)] = rate;
    out.push_back({{"enterprise_id", flow.enterprise_id},
                   {"per_policy_rate", std::move(rates)}});
  }
  return out;
}

inline std::vector<FlowAssignment> flows_from_json(const json& doc) {
  std::vector<FlowAssignment> flows;
  for (const json& item : doc) {
    FlowAssignment flow;
    flow.enterprise_id = item.at("enterprise_id").get<int>();
    for (const auto& [key, value] : item.at("per_policy_rate").items())
      flow.per_policy_rate[std::stoi(key)] = value.get<double>();
    flows.push_back(std::move(flow));
  }
  return flows;
}

// ---------------------------------------------------------------------------
// events.json
// ---------------------------------------------------------------------------

inline ScalingAction action_from_string(const std::string& name) {
  if (name == "ADD") return ScalingAction::kAdd;
  if (name == "REMOVE") return ScalingAction::kRemove;
  if (name == "PATH_CHANGE") return ScalingAction::kPathChange;
  throw DataError("unknown scaling action '" + name + "'");
}

inline json to_json(const std::vector<ScalingEvent>& events) {
  json out = json::array();
  for (const auto& event : events)
    out.push_back({{"t", event.time_minute},
                   {"enterprise", event.enterprise_id},
                   {"policy", event.policy_id},
                   {"nf_index", event.nf_index},
                   {"action", to_string(event.action)}});
  return out;
}

inline std::vector<ScalingEvent> events_from_json(const json& doc) {
  std::vector<ScalingEvent> events;
  for (const json& item : doc)
    events.push_back({item.at("t").get<int>(),
                      item.at("enterprise").get<int>(),
                      item.at("policy").get<int>(),
                      item.at("nf_index").get<int>(),
                      action_from_string(item.at("action").get<std::string>())});
  return events;
}

// ---------------------------------------------------------------------------
// topology.json
// ---------------------------------------------------------------------------

inline json to_json(const Topology& topo) {
  json params;
  if (const auto* ft = std::get_if<FatTreeParams>(&topo.params)) {
    params = {{"k", ft->k}};
  } else if (const auto* vl2 = std::get_if<Vl2Params>(&topo.params)) {
    params = {{"d_a", vl2->d_a},
              {"d_i", vl2->d_i},
              {"servers_per_tor", vl2->servers_per_tor}};
  } else {
    const auto& bc = std::get<BcubeParams>(topo.params);
    params = {{"n", bc.n}, {"k", bc.k}};
  }

  json nodes = json::array();
  for (const Node& node : topo.nodes)
    nodes.push_back({{"id", node.id},
                     {"kind", to_string(node.kind)},
                     {"level", node.level},
                     {"label", node.label}});
  json links = json::array();
  for (const Link& link : topo.links) links.push_back({link.a, link.b});
  json paths = json::object();
  for (const auto& [key, list] : topo.paths) {
    json entry = json::array();
    for (const Path& path : list) entry.push_back(path.hops);
    paths["s" + std::to_string(key.first) + "-s" +
          std::to_string(key.second)] = std::move(entry);
  }
  return {{"arch", to_string(topo.arch)},
          {"params", std::move(params)},
          {"nodes", std::move(nodes)},
          {"links", std::move(links)},
          {"paths", std::move(paths)}};
}

namespace detail {

// Server placement slots are not serialized; they are recomputed from the
// wiring. Fat-tree and VL2 servers hang off their single switch neighbor.
// A BCube server's address comes from its level-0 switch (all digits but the
// lowest, via the label index) plus its rank among that switch's servers,
// which placement assigns in ascending id order.
inline void restore_server_slots(Topology& topo) {
  const auto adj = adjacency(topo);
  if (topo.arch != Arch::kBcube) {
    for (const Node& node : topo.nodes) {
      if (node.kind != NodeKind::kServer) continue;
      if (adj[static_cast<std::size_t>(node.id)].size() != 1)
        throw DataError("server " + node.label +
                        " does not have exactly one uplink");
      topo.server_slot[node.id] = adj[static_cast<std::size_t>(node.id)][0];
    }
    return;
  }
  const int n = std::get<BcubeParams>(topo.params).n;
  std::map<long long, std::vector<int>> by_level0;
  for (const Node& node : topo.nodes) {
    if (node.kind != NodeKind::kServer) continue;
    long long level0_index = -1;
    for (int neighbor : adj[static_cast<std::size_t>(node.id)]) {
      const Node& sw = topo.nodes[static_cast<std::size_t>(neighbor)];
      if (sw.kind == NodeKind::kBcubeSwitch && sw.level == 0) {
        const auto pos = sw.label.rfind("-S");
        level0_index = std::stoll(sw.label.substr(pos + 2));
        break;
      }
    }
    if (level0_index < 0)
      throw DataError("server " + node.label + " has no level-0 uplink");
    by_level0[level0_index].push_back(node.id);
  }
  for (auto& [index, servers] : by_level0) {
    std::sort(servers.begin(), servers.end());
    for (std::size_t j = 0; j < servers.size(); ++j)
      topo.server_slot[servers[j]] =
          static_cast<int>(index * n + static_cast<long long>(j));
  }
}

}  // namespace detail

inline Topology topology_from_json(const json& doc) {
  Topology topo;
  topo.arch = arch_from_string(doc.at("arch").get<std::string>());
  const json& params = doc.at("params");
  switch (topo.arch) {
    case Arch::kFatTree:
      topo.params = FatTreeParams{params.at("k").get<int>()};
      break;
    case Arch::kVl2:
      topo.params = Vl2Params{params.at("d_a").get<int>(),
                              params.at("d_i").get<int>(),
                              params.at("servers_per_tor").get<int>()};
      break;
    case Arch::kBcube:
      topo.params =
          BcubeParams{params.at("n").get<int>(), params.at("k").get<int>()};
      break;
  }
  for (const json& node : doc.at("nodes"))
    topo.nodes.push_back(
        {node.at("id").get<int>(),
         node_kind_from_string(node.at("kind").get<std::string>()),
         node.at("level").get<int>(), node.at("label").get<std::string>()});
  for (const json& link : doc.at("links"))
    topo.links.push_back({link.at(0).get<int>(), link.at(1).get<int>(),
                          std::nullopt});
  for (const auto& [key, list] : doc.at("paths").items()) {
    const auto dash = key.find("-s");
    if (key.empty() || key[0] != 's' || dash == std::string::npos)
      throw DataError("malformed path key '" + key + "'");
    const int src = std::stoi(key.substr(1, dash - 1));
    const int dst = std::stoi(key.substr(dash + 2));
    std::vector<Path> paths;
    for (const json& hops : list)
      paths.push_back({hops.get<std::vector<int>>()});
    topo.paths[{src, dst}] = std::move(paths);
  }
  detail::restore_server_slots(topo);
  return topo;
}

// ---------------------------------------------------------------------------
// files and digests
// ---------------------------------------------------------------------------

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &length) != 1) {
    EVP_MD_CTX_free(ctx);
    throw DataError("sha256 computation failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

inline std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file '" + path.string() + "'");
  out << content;
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

inline json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw DataError("cannot parse '" + path.string() + "': " + err.what());
  }
}

}  // namespace nfvforge
