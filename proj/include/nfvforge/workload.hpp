#pragma once

#include <algorithm>
#include <array>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "nfvforge/errors.hpp"
#include "nfvforge/prng.hpp"

namespace nfvforge {

// ─────────────────────────────────────────────
// NF type catalog
// ─────────────────────────────────────────────

struct NfType {
  std::string name;
  int weight = 0;  // relative selection weight (instance count per enterprise)
};

/// Weighted table of middlebox types deployed by one enterprise class.
struct NfTypeCatalog {
  std::vector<NfType> entries;

  int total_weight() const {
    int sum = 0;
    for (const auto& e : entries) sum += e.weight;
    return sum;
  }

  int positive_count() const {
    int n = 0;
    for (const auto& e : entries) n += e.weight > 0 ? 1 : 0;
    return n;
  }

  void validate() const {
    if (positive_count() < 2)
      throw ConfigError("catalog needs at least two positive-weight NF types");
    for (const auto& e : entries) {
      if (e.weight < 0)
        throw ConfigError("catalog weight for '" + e.name +
                          "' must be non-negative");
      if (e.name.empty()) throw ConfigError("catalog entry with empty name");
    }
    for (std::size_t i = 0; i < entries.size(); ++i)
      for (std::size_t j = i + 1; j < entries.size(); ++j)
        if (entries[i].name == entries[j].name)
          throw ConfigError("duplicate catalog type '" + entries[i].name + "'");
  }
};

/// Middlebox deployment counts of a large (10k-100k host) enterprise network.
inline NfTypeCatalog default_catalog() {
  return NfTypeCatalog{{
      {"ip_firewall", 46},
      {"app_firewall", 9},
      {"wan_optimizer", 0},
      {"proxy", 6},
      {"gateway", 3},
      {"vpn", 6},
      {"load_balancer", 7},
      {"ids_ips", 23},
  }};
}

/// Parses a catalog override file: one `name,weight` pair per line.
/// Blank lines and lines starting with '#' are skipped.
inline NfTypeCatalog load_catalog(std::istream& in) {
  NfTypeCatalog catalog;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError("catalog line " + std::to_string(line_no) +
                        ": expected 'name,weight'");
    NfType entry;
    entry.name = line.substr(first, comma - first);
    while (!entry.name.empty() && (entry.name.back() == ' ' || entry.name.back() == '\t'))
      entry.name.pop_back();
    try {
      entry.weight = std::stoi(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw ConfigError("catalog line " + std::to_string(line_no) +
                        ": weight is not an integer");
    }
    catalog.entries.push_back(std::move(entry));
  }
  catalog.validate();
  return catalog;
}

// ─────────────────────────────────────────────
// Enterprise profile and policies
// ─────────────────────────────────────────────

struct EnterpriseProfile {
  int enterprise_id = 0;
  int nf_budget = 100;  // total NF instances per enterprise
  NfTypeCatalog catalog = default_catalog();
};

struct NfInstance {
  std::string type;
  int instance_id = 0;  // unique within the owning enterprise

  bool operator==(const NfInstance&) const = default;
};

/// A service chain: the ordered NF sequence a flow must traverse.
struct Policy {
  int enterprise_id = 0;
  int policy_id = 0;
  std::vector<NfInstance> chain;

  bool operator==(const Policy&) const = default;
};

// ─────────────────────────────────────────────
// Chain length distribution
// ─────────────────────────────────────────────

/// Discrete truncated power law over chain lengths {2..7}, mass(n) ∝ n^-2.
struct ChainLengthPmf {
  static constexpr int kMinLength = 2;
  static constexpr int kMaxLength = 7;

  std::array<double, kMaxLength - kMinLength + 1> mass{};

  double at(int n) const { return mass[static_cast<std::size_t>(n - kMinLength)]; }
};

inline ChainLengthPmf chain_length_pmf() {
  ChainLengthPmf pmf;
  double z = 0.0;
  for (int n = ChainLengthPmf::kMinLength; n <= ChainLengthPmf::kMaxLength; ++n)
    z += 1.0 / (static_cast<double>(n) * n);
  for (int n = ChainLengthPmf::kMinLength; n <= ChainLengthPmf::kMaxLength; ++n)
    pmf.mass[static_cast<std::size_t>(n - ChainLengthPmf::kMinLength)] =
        (1.0 / (static_cast<double>(n) * n)) / z;
  return pmf;
}

/// Inverse CDF of the pmf: smallest length whose cumulative mass exceeds u.
inline int length_for_quantile(const ChainLengthPmf& pmf, double u) {
  double cum = 0.0;
  for (int n = ChainLengthPmf::kMinLength; n < ChainLengthPmf::kMaxLength; ++n) {
    cum += pmf.at(n);
    if (u < cum) return n;
  }
  return ChainLengthPmf::kMaxLength;
}

inline int sample_chain_length(SplitMix64& rng) {
  static const ChainLengthPmf pmf = chain_length_pmf();
  return length_for_quantile(pmf, rng.next_unit());
}

// ─────────────────────────────────────────────
// Chain sampling
// ─────────────────────────────────────────────

namespace detail {

/// Inverse-CDF pick over integer weights: smallest index i such that
/// u * total < sum(weights[0..i]). Entries with zero weight are never picked.
inline std::size_t weighted_index_for_quantile(const std::vector<int>& weights,
                                               double u) {
  double total = 0.0;
  for (int w : weights) total += w;
  const double target = u * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    cum += weights[i];
    last_positive = i;
    if (target < cum) return i;
  }
  return last_positive;  // u rounded up against the total; take the last entry
}

}  // namespace detail

/// Draws an ordered chain of `length` distinct NF types, each step picking a
/// not-yet-chosen type with probability proportional to its catalog weight.
inline std::vector<std::string> sample_chain(SplitMix64& rng,
                                             const NfTypeCatalog& catalog,
                                             int length) {
  if (length < 2)
    throw ConfigError("chain length must be at least 2");
  if (length > catalog.positive_count())
    throw ConfigError("insufficient distinct NF types: chain length " +
                      std::to_string(length) + " exceeds the " +
                      std::to_string(catalog.positive_count()) +
                      " positive-weight catalog entries");

  std::vector<std::string> names;
  std::vector<int> weights;
  names.reserve(catalog.entries.size());
  weights.reserve(catalog.entries.size());
  for (const auto& e : catalog.entries) {
    names.push_back(e.name);
    weights.push_back(e.weight);
  }

  std::vector<std::string> chain;
  chain.reserve(static_cast<std::size_t>(length));
  for (int step = 0; step < length; ++step) {
    const std::size_t pick =
        detail::weighted_index_for_quantile(weights, rng.next_unit());
    chain.push_back(names[pick]);
    weights[pick] = 0;  // without replacement
  }
  return chain;
}

// ─────────────────────────────────────────────
// Policy set generation
// ─────────────────────────────────────────────

namespace detail {

/// Adjusts a drawn chain length so the enterprise budget is met exactly and
/// every chain stays within [2,7]. A remainder of 1 can never be left: it is
/// folded into the current chain (n+1) or released (n-1 when n is already 7).
inline int clamp_length_to_budget(int n, int remaining) {
  if (remaining < ChainLengthPmf::kMaxLength + 1) n = std::min(n, remaining);
  if (remaining - n == 1) n = n < ChainLengthPmf::kMaxLength ? n + 1 : n - 1;
  return n;
}

}  // namespace detail

/// Generates the policy set of one enterprise. Chain lengths follow the
/// truncated power law; the sum of chain lengths equals nf_budget exactly.
/// Policy ids count up from 0 in generation order; instance ids are unique
/// across the whole enterprise.
inline std::vector<Policy> generate_enterprise_policies(
    const EnterpriseProfile& profile, SplitMix64& rng) {
  profile.catalog.validate();
  if (profile.nf_budget < 2)
    throw ConfigError("nf_budget must be at least 2");
  const int longest_chain =
      std::min(ChainLengthPmf::kMaxLength, profile.nf_budget);
  if (profile.catalog.positive_count() < longest_chain)
    throw ConfigError(
        "catalog has only " + std::to_string(profile.catalog.positive_count()) +
        " positive-weight types; chains up to length " +
        std::to_string(longest_chain) + " are not samplable");

  std::vector<Policy> policies;
  int remaining = profile.nf_budget;
  int next_instance_id = 0;
  while (remaining > 0) {
    const int n =
        detail::clamp_length_to_budget(sample_chain_length(rng), remaining);
    Policy policy;
    policy.enterprise_id = profile.enterprise_id;
    policy.policy_id = static_cast<int>(policies.size());
    for (auto& type : sample_chain(rng, profile.catalog, n))
      policy.chain.push_back({std::move(type), next_instance_id++});
    policies.push_back(std::move(policy));
    remaining -= n;
  }
  return policies;
}

struct EnterpriseWorkload {
  EnterpriseProfile profile;
  std::vector<Policy> policies;
};

/// The full policy-request dataset of one run.
struct Workload {
  std::uint64_t seed = 0;
  std::vector<EnterpriseWorkload> enterprises;

  const EnterpriseWorkload* find(int enterprise_id) const {
    for (const auto& e : enterprises)
      if (e.profile.enterprise_id == enterprise_id) return &e;
    return nullptr;
  }
};

/// Generates one policy set per enterprise. Each enterprise draws from its
/// own sub-stream of the master seed, so raising num_enterprises leaves the
/// earlier enterprises' output untouched.
inline Workload generate_workload(int num_enterprises, std::uint64_t seed,
                                  int nf_budget = 100,
                                  const NfTypeCatalog& catalog = default_catalog()) {
  if (num_enterprises < 1) throw ConfigError("empty workload");
  Workload workload;
  workload.seed = seed;
  workload.enterprises.reserve(static_cast<std::size_t>(num_enterprises));
  for (int e = 0; e < num_enterprises; ++e) {
    EnterpriseProfile profile{e, nf_budget, catalog};
    SplitMix64 rng(substream_seed(seed, StreamDomain::kWorkload,
                                  static_cast<std::uint64_t>(e)));
    auto policies = generate_enterprise_policies(profile, rng);
    workload.enterprises.push_back({std::move(profile), std::move(policies)});
  }
  return workload;
}

}  // namespace nfvforge
