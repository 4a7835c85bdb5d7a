#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nfvforge/errors.hpp"
#include "nfvforge/scaling.hpp"
#include "nfvforge/serialize.hpp"
#include "nfvforge/topology.hpp"
#include "nfvforge/traffic.hpp"
#include "nfvforge/workload.hpp"

namespace nfvforge {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a full run needs. Stage subcommands fill only their slice;
/// zero / empty optional means "not set".
struct RunConfig {
  std::uint64_t seed = 0;
  int num_enterprises = 0;
  int nf_budget = 100;
  std::string catalog_file;
  std::optional<double> threshold_L;
  int policies_per_change = 5;
  int window_minutes = 120;
  std::map<std::string, double> threshold_per_type;
  std::string arch = "fat-tree";
  int requested_servers = 0;
  std::optional<int> k;
  std::optional<int> d_a;
  std::optional<int> d_i;
  std::optional<int> bcube_n;
  int servers_per_tor = 20;
  int max_paths = 8;
  std::string out_dir = ".";
  std::string timeline_file;
};

namespace detail {

inline std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

inline long long parse_integer(const std::string& key,
                               const std::string& value) {
  long long out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("config key '" + key + "' expects an integer, got '" +
                      value + "'");
  return out;
}

inline std::uint64_t parse_unsigned(const std::string& key,
                                    const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("config key '" + key +
                      "' expects an unsigned integer, got '" + value + "'");
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("config key '" + key + "' expects a number, got '" +
                      value + "'");
  return out;
}

inline int parse_int_min(const std::string& key, const std::string& value,
                         int minimum) {
  const long long v = parse_integer(key, value);
  if (v < minimum || v > 1'000'000'000)
    throw ConfigError("config key '" + key + "' out of range: must be >= " +
                      std::to_string(minimum));
  return static_cast<int>(v);
}

inline int parse_even_min2(const std::string& key, const std::string& value) {
  const int v = parse_int_min(key, value, 2);
  if (v % 2 != 0)
    throw ConfigError("config key '" + key + "' out of range: must be even");
  return v;
}

}  // namespace detail

/// Applies one key/value pair with full validation. Both the config-file
/// parser and CLI flag overrides funnel through here, so precedence is just
/// call order.
inline void set_config_key(RunConfig& config, const std::string& key,
                           const std::string& value) {
  if (key == "seed") {
    config.seed = detail::parse_unsigned(key, value);
  } else if (key == "enterprises") {
    config.num_enterprises = detail::parse_int_min(key, value, 1);
  } else if (key == "nf_budget") {
    config.nf_budget = detail::parse_int_min(key, value, 2);
  } else if (key == "catalog") {
    config.catalog_file = value;
  } else if (key == "threshold_L") {
    const double v = detail::parse_double(key, value);
    if (v <= 0.0)
      throw ConfigError("config key 'threshold_L' out of range: must be > 0");
    config.threshold_L = v;
  } else if (key.rfind("threshold_L.", 0) == 0) {
    const std::string type = key.substr(std::string("threshold_L.").size());
    if (type.empty())
      throw ConfigError("config key '" + key + "' names no NF type");
    const double v = detail::parse_double(key, value);
    if (v <= 0.0)
      throw ConfigError("config key '" + key + "' out of range: must be > 0");
    config.threshold_per_type[type] = v;
  } else if (key == "policies_per_change") {
    config.policies_per_change = detail::parse_int_min(key, value, 1);
  } else if (key == "window_minutes") {
    const int v = detail::parse_int_min(key, value, 1);
    if (kSampleSpacingMinutes % v != 0)
      throw ConfigError(
          "config key 'window_minutes' out of range: must divide 120");
    config.window_minutes = v;
  } else if (key == "arch") {
    arch_from_string(value);  // rejects unknown names
    config.arch = value;
  } else if (key == "servers") {
    config.requested_servers = detail::parse_int_min(key, value, 1);
  } else if (key == "k") {
    config.k = detail::parse_even_min2(key, value);
  } else if (key == "d_a") {
    config.d_a = detail::parse_even_min2(key, value);
  } else if (key == "d_i") {
    config.d_i = detail::parse_even_min2(key, value);
  } else if (key == "n") {
    config.bcube_n = detail::parse_int_min(key, value, 2);
  } else if (key == "servers_per_tor") {
    config.servers_per_tor = detail::parse_int_min(key, value, 1);
  } else if (key == "max_paths") {
    config.max_paths = detail::parse_int_min(key, value, 1);
  } else if (key == "out") {
    config.out_dir = value;
  } else if (key == "timeline") {
    config.timeline_file = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

/// `key = value` lines; blank lines and lines starting with '#' are skipped.
inline RunConfig parse_config(std::istream& in) {
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = detail::trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    set_config_key(config, key, value);
  }
  return config;
}

inline RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

inline json config_echo(const RunConfig& config) {
  json echo = {
      {"seed", config.seed},
      {"enterprises", config.num_enterprises},
      {"nf_budget", config.nf_budget},
      {"catalog", config.catalog_file},
      {"threshold_L",
       config.threshold_L ? json(*config.threshold_L) : json(nullptr)},
      {"threshold_per_type", json::object()},
      {"policies_per_change", config.policies_per_change},
      {"window_minutes", config.window_minutes},
      {"arch", config.arch},
      {"servers", config.requested_servers},
      {"k", config.k ? json(*config.k) : json(nullptr)},
      {"d_a", config.d_a ? json(*config.d_a) : json(nullptr)},
      {"d_i", config.d_i ? json(*config.d_i) : json(nullptr)},
      {"n", config.bcube_n ? json(*config.bcube_n) : json(nullptr)},
      {"servers_per_tor", config.servers_per_tor},
      {"max_paths", config.max_paths},
      {"out", config.out_dir},
      {"timeline", config.timeline_file},
  };
  for (const auto& [type, value] : config.threshold_per_type)
    echo["threshold_per_type"][type] = value;
  return echo;
}

struct RunManifest {
  std::string version = kToolVersion;
  json config;
  std::map<std::string, std::string> files;  // name -> sha256
};

inline json to_json(const RunManifest& manifest) {
  json files = json::object();
  for (const auto& [name, digest] : manifest.files) files[name] = digest;
  return {{"version", manifest.version},
          {"config", manifest.config},
          {"files", std::move(files)}};
}

// ---------------------------------------------------------------------------
// stage plumbing
// ---------------------------------------------------------------------------

inline NfTypeCatalog catalog_for(const RunConfig& config) {
  if (config.catalog_file.empty()) return default_catalog();
  std::ifstream in(config.catalog_file);
  if (!in)
    throw ConfigError("cannot open catalog file '" + config.catalog_file +
                      "'");
  return load_catalog(in);
}

inline std::vector<TrafficTimeline> load_timelines_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open timeline file '" + path.string() + "'");
  return load_timelines(in);
}

inline Workload load_policies_file(const std::filesystem::path& path) {
  try {
    return workload_from_json(read_json_file(path));
  } catch (const json::exception& err) {
    throw DataError("malformed policies file '" + path.string() +
                    "': " + err.what());
  }
}

inline ScalingConfig scaling_config_of(const RunConfig& config) {
  if (!config.threshold_L)
    throw ConfigError("config key 'threshold_L' is required for the scaling stage");
  ScalingConfig out;
  out.threshold_L = *config.threshold_L;
  out.policies_per_change = config.policies_per_change;
  out.window_minutes = config.window_minutes;
  out.threshold_per_type = config.threshold_per_type;
  out.validate();
  return out;
}

inline TopologyRequest topology_request_of(const RunConfig& config) {
  if (config.requested_servers < 1)
    throw ConfigError("config key 'servers' is required for the topology stage");
  TopologyRequest request;
  request.arch = arch_from_string(config.arch);
  request.requested_servers = config.requested_servers;
  request.max_paths = config.max_paths;
  request.k = config.k;
  request.d_a = config.d_a;
  request.d_i = config.d_i;
  request.servers_per_tor = config.servers_per_tor;
  request.bcube_n = config.bcube_n;
  return request;
}

/// Initial equal-split flows for every timeline, against the workload's
/// policy sets.
inline std::vector<FlowAssignment> make_flows(
    const Workload& workload, const std::vector<TrafficTimeline>& timelines) {
  std::vector<FlowAssignment> flows;
  for (const auto& timeline : timelines) {
    const EnterpriseWorkload* enterprise =
        workload.find(timeline.enterprise_id);
    if (enterprise == nullptr)
      throw DataError("timeline references unknown enterprise " +
                      std::to_string(timeline.enterprise_id));
    flows.push_back(initial_distribution(timeline, enterprise->policies));
  }
  return flows;
}

/// Two-column plot text: one "<minute> <rate>" row per minute of the day,
/// 1441 rows for a full timeline, piecewise-linear between samples.
inline std::string render_plot(const TrafficTimeline& timeline) {
  timeline.validate();
  std::string out;
  char buffer[64];
  for (int minute = 0; minute <= kDayMinutes; ++minute) {
    const double rate = interpolate(timeline, static_cast<double>(minute));
    out += std::to_string(minute);
    out.push_back(' ');
    const auto [ptr, ec] =
        std::to_chars(buffer, buffer + sizeof(buffer), rate);
    if (ec != std::errc()) throw DataError("rate formatting failed");
    out.append(buffer, ptr);
    out.push_back('\n');
  }
  return out;
}

/// Writes the given files plus manifest.json into the output directory and
/// returns the manifest (version, config echo, per-file sha256 digests).
inline RunManifest write_outputs(
    const RunConfig& config,
    const std::vector<std::pair<std::string, std::string>>& files) {
  const std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + dir.string() +
                      "': " + ec.message());

  RunManifest manifest;
  manifest.config = config_echo(config);
  for (const auto& [name, content] : files) {
    write_text_file(dir / name, content);
    manifest.files[name] = sha256_hex(content);
  }
  write_text_file(dir / "manifest.json", dump_json(to_json(manifest)));
  return manifest;
}

/// Full pipeline: policies -> flows -> scaling schedule -> topology, all
/// from one seed, then the manifest. Every stage input must be configured.
inline RunManifest run_pipeline(const RunConfig& config) {
  if (config.num_enterprises < 1)
    throw ConfigError(
        "config key 'enterprises' is required for the policies stage");
  if (config.timeline_file.empty())
    throw ConfigError(
        "config key 'timeline' is required for the traffic stage");
  const ScalingConfig scaling_config = scaling_config_of(config);
  const TopologyRequest topology_request = topology_request_of(config);

  const Workload workload =
      generate_workload(config.num_enterprises, config.seed, config.nf_budget,
                        catalog_for(config));
  const std::vector<TrafficTimeline> timelines =
      load_timelines_file(config.timeline_file);
  const std::vector<FlowAssignment> flows = make_flows(workload, timelines);
  const std::vector<ScalingEvent> events =
      build_schedule(timelines, workload, scaling_config, config.seed);
  const Topology topology = build_full(topology_request);

  return write_outputs(config,
                       {{"policies.json", dump_json(to_json(workload))},
                        {"flows.json", dump_json(to_json(flows))},
                        {"events.json", dump_json(to_json(events))},
                        {"topology.json", dump_json(to_json(topology))}});
}

}  // namespace nfvforge
