// nfv-forge: deterministic dataset generator for VNF resource-allocation
// experiments. Subcommands emit the individual artifacts; `all` runs the
// whole pipeline from a config file.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "nfvforge/pipeline.hpp"

namespace {

using nfvforge::RunConfig;

struct CliOptions {
  RunConfig config;
  // raw flag values, applied over the config file for `all`
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> enterprises;
  std::optional<int> nf_budget;
  std::optional<std::string> catalog;
  std::optional<double> threshold;
  std::optional<std::string> policies_file;
  std::optional<std::string> timeline_file;
  std::optional<std::string> arch;
  std::optional<int> servers;
  std::optional<int> k;
  std::optional<int> d_a;
  std::optional<int> d_i;
  std::optional<int> servers_per_tor;
  std::optional<int> bcube_n;
  std::optional<int> max_paths;
};

template <typename T>
void apply(RunConfig& config, const char* key, const std::optional<T>& flag) {
  if (!flag) return;
  if constexpr (std::is_same_v<T, std::string>) {
    nfvforge::set_config_key(config, key, *flag);
  } else {
    nfvforge::set_config_key(config, key, std::to_string(*flag));
  }
}

// Flags go through the same validation as config-file keys and win over
// file values.
void apply_flags(CliOptions& opts) {
  RunConfig& config = opts.config;
  apply(config, "seed", opts.seed);
  apply(config, "out", opts.out_dir);
  apply(config, "enterprises", opts.enterprises);
  apply(config, "nf_budget", opts.nf_budget);
  apply(config, "catalog", opts.catalog);
  apply(config, "threshold_L", opts.threshold);
  apply(config, "timeline", opts.timeline_file);
  apply(config, "arch", opts.arch);
  apply(config, "servers", opts.servers);
  apply(config, "k", opts.k);
  apply(config, "d_a", opts.d_a);
  apply(config, "d_i", opts.d_i);
  apply(config, "servers_per_tor", opts.servers_per_tor);
  apply(config, "n", opts.bcube_n);
  apply(config, "max_paths", opts.max_paths);
}

void run_policies(CliOptions& opts) {
  apply_flags(opts);
  const RunConfig& config = opts.config;
  const nfvforge::Workload workload = nfvforge::generate_workload(
      config.num_enterprises, config.seed, config.nf_budget,
      nfvforge::catalog_for(config));
  nfvforge::write_outputs(
      config,
      {{"policies.json", nfvforge::dump_json(nfvforge::to_json(workload))}});
}

void run_traffic(CliOptions& opts) {
  apply_flags(opts);
  const nfvforge::Workload workload =
      nfvforge::load_policies_file(*opts.policies_file);
  const auto timelines =
      nfvforge::load_timelines_file(opts.config.timeline_file);
  const auto flows = nfvforge::make_flows(workload, timelines);
  nfvforge::write_outputs(
      opts.config,
      {{"flows.json", nfvforge::dump_json(nfvforge::to_json(flows))}});
}

void run_scaling(CliOptions& opts) {
  apply_flags(opts);
  const RunConfig& config = opts.config;
  const nfvforge::Workload workload =
      nfvforge::load_policies_file(*opts.policies_file);
  const auto timelines = nfvforge::load_timelines_file(config.timeline_file);
  const auto events = nfvforge::build_schedule(
      timelines, workload, nfvforge::scaling_config_of(config), config.seed);
  nfvforge::write_outputs(
      config, {{"events.json", nfvforge::dump_json(nfvforge::to_json(events))}});
}

void run_topology(CliOptions& opts) {
  apply_flags(opts);
  const nfvforge::Topology topology =
      nfvforge::build_full(nfvforge::topology_request_of(opts.config));
  nfvforge::write_outputs(
      opts.config,
      {{"topology.json", nfvforge::dump_json(nfvforge::to_json(topology))}});
}

void run_plot(CliOptions& opts) {
  apply_flags(opts);
  const auto timelines =
      nfvforge::load_timelines_file(opts.config.timeline_file);
  if (timelines.empty()) throw nfvforge::DataError("timeline file is empty");
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& timeline : timelines)
    files.emplace_back(
        "plot_e" + std::to_string(timeline.enterprise_id) + ".txt",
        nfvforge::render_plot(timeline));
  nfvforge::write_outputs(opts.config, files);
}

void run_all(CliOptions& opts) {
  opts.config = nfvforge::parse_config_file(opts.config_file);
  apply_flags(opts);
  nfvforge::run_pipeline(opts.config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nfv-forge: deterministic workload, traffic, scaling-schedule and "
      "topology generator for VNF resource-allocation experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --seed/--out appear after the subcommand too

  CliOptions opts;
  app.add_option("--seed", opts.seed, "master seed (64-bit unsigned)");
  app.add_option("--out", opts.out_dir, "output directory (default: .)");

  CLI::App* policies =
      app.add_subcommand("policies", "generate enterprise service chains");
  policies->add_option("--enterprises", opts.enterprises, "enterprise count")
      ->required();
  policies->add_option("--nf-budget", opts.nf_budget,
                       "NF instances per enterprise (default 100)");
  policies->add_option("--catalog", opts.catalog,
                       "NF type catalog file (name,weight per line)");

  CLI::App* traffic = app.add_subcommand(
      "traffic", "split initial timeline rates over the policies");
  traffic->add_option("--policies", opts.policies_file, "policies.json path")
      ->required();
  traffic->add_option("--timeline", opts.timeline_file, "timeline CSV path")
      ->required();

  CLI::App* scaling =
      app.add_subcommand("scaling", "derive the scaling event schedule");
  scaling->add_option("--policies", opts.policies_file, "policies.json path")
      ->required();
  scaling->add_option("--timeline", opts.timeline_file, "timeline CSV path")
      ->required();
  scaling
      ->add_option("--threshold", opts.threshold,
                   "per-instance traffic threshold L (10 MBps units)")
      ->required();

  CLI::App* topology =
      app.add_subcommand("topology", "build a data-center topology");
  topology->add_option("--arch", opts.arch, "fat-tree | vl2 | bcube")
      ->required();
  topology->add_option("--servers", opts.servers, "requested server count")
      ->required();
  topology->add_option("--k", opts.k, "fat-tree k (fitted when omitted)");
  topology->add_option("--da", opts.d_a, "VL2 aggregation port count");
  topology->add_option("--di", opts.d_i, "VL2 intermediate port count");
  topology->add_option("--servers-per-tor", opts.servers_per_tor,
                       "VL2 servers per ToR (default 20)");
  topology->add_option("--n", opts.bcube_n, "BCube port count (default 2)");
  topology->add_option("--max-paths", opts.max_paths,
                       "per-pair path cap (default 8)");

  CLI::App* plot =
      app.add_subcommand("plot", "export per-minute plot data per enterprise");
  plot->add_option("--timeline", opts.timeline_file, "timeline CSV path")
      ->required();

  CLI::App* all = app.add_subcommand("all", "run the full pipeline");
  all->add_option("--config", opts.config_file, "key = value config file")
      ->required();
  all->add_option("--enterprises", opts.enterprises, "override: enterprises");
  all->add_option("--nf-budget", opts.nf_budget, "override: nf_budget");
  all->add_option("--catalog", opts.catalog, "override: catalog");
  all->add_option("--threshold", opts.threshold, "override: threshold_L");
  all->add_option("--timeline", opts.timeline_file, "override: timeline");
  all->add_option("--arch", opts.arch, "override: arch");
  all->add_option("--servers", opts.servers, "override: servers");
  all->add_option("--max-paths", opts.max_paths, "override: max_paths");

  try {
    app.parse(argc, argv);
    if (policies->parsed()) run_policies(opts);
    if (traffic->parsed()) run_traffic(opts);
    if (scaling->parsed()) run_scaling(opts);
    if (topology->parsed()) run_topology(opts);
    if (plot->parsed()) run_plot(opts);
    if (all->parsed()) run_all(opts);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);
    app.exit(err);
    return 2;
  } catch (const nfvforge::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const nfvforge::DataError& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return 3;
  }
  return 0;
}
