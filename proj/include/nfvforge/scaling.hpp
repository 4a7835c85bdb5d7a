#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nfvforge/errors.hpp"
#include "nfvforge/prng.hpp"
#include "nfvforge/traffic.hpp"
#include "nfvforge/workload.hpp"

namespace nfvforge {

enum class ScalingAction { kAdd, kRemove, kPathChange };

inline const char* to_string(ScalingAction action) {
  switch (action) {
    case ScalingAction::kAdd: return "ADD";
    case ScalingAction::kRemove: return "REMOVE";
    case ScalingAction::kPathChange: return "PATH_CHANGE";
  }
  return "?";
}

struct ScalingConfig {
  /// Maximum traffic one NF instance can handle, units of 10 MBps.
  double threshold_L = 0.0;
  /// Policies drawn as "affected" per traffic-changing window.
  int policies_per_change = 5;
  /// Span over which a window's instance changes are spread.
  int window_minutes = 120;
  /// Optional per-type thresholds. Carried through to the run manifest for
  /// downstream consumers; the schedule itself applies the uniform
  /// threshold_L, matching the assumption that traffic through an instance
  /// is proportional to its capacity for every NF type.
  std::map<std::string, double> threshold_per_type;

  void validate() const {
    if (threshold_L <= 0.0) throw ConfigError("threshold_L must be positive");
    if (policies_per_change < 1)
      throw ConfigError("policies_per_change must be at least 1");
    if (window_minutes < 1 || kSampleSpacingMinutes % window_minutes != 0)
      throw ConfigError("window_minutes must divide the 120-minute sample spacing");
    for (const auto& [type, value] : threshold_per_type)
      if (value <= 0.0)
        throw ConfigError("threshold for type '" + type + "' must be positive");
  }
};

/// One scheduled change: scale the policy's nf_index-th NF (ADD/REMOVE) or
/// reroute the whole policy (PATH_CHANGE, nf_index fixed to 0).
struct ScalingEvent {
  int time_minute = 0;
  int enterprise_id = 0;
  int policy_id = 0;
  int nf_index = 0;
  ScalingAction action = ScalingAction::kAdd;

  bool operator==(const ScalingEvent&) const = default;
};

/// Signed traffic change of one enterprise over one sample interval.
struct WindowDelta {
  int enterprise_id = 0;
  int window_start = 0;
  double traffic_change = 0.0;

  bool operator==(const WindowDelta&) const = default;
};

/// One delta per consecutive sample pair: rate(end) - rate(start), signed.
inline std::vector<WindowDelta> window_deltas(const TrafficTimeline& timeline,
                                              const ScalingConfig& config) {
  config.validate();
  timeline.validate();
  std::vector<WindowDelta> deltas;
  for (std::size_t i = 0; i + 1 < timeline.samples.size(); ++i)
    deltas.push_back({timeline.enterprise_id, timeline.samples[i].minute,
                      timeline.samples[i + 1].rate - timeline.samples[i].rate});
  return deltas;
}

/// Instances to add (positive) or remove (negative) for a traffic change:
/// sign(change) * floor(|change| / threshold). Fractional demand is dropped,
/// not carried into the next window.
inline int instances_required(double traffic_change, double threshold) {
  if (threshold <= 0.0) throw ConfigError("threshold_L must be positive");
  const double count = std::floor(std::abs(traffic_change) / threshold);
  if (count > 1e9)
    throw DataError("traffic change implies an unrealistic instance count");
  return traffic_change < 0.0 ? -static_cast<int>(count)
                              : static_cast<int>(count);
}

/// Spreads `count` single-instance events evenly over the window:
/// minute k = round(start + k * window / (count + 1)), k = 1..count, rounded
/// to the nearest whole minute with ties up. All times are strictly inside
/// (start, start + window) and strictly increasing.
inline std::vector<int> event_times(int window_start, int count,
                                    int window_minutes) {
  if (count < 1) throw ConfigError("event count must be at least 1");
  if (count > window_minutes - 1)
    throw DataError("cannot place " + std::to_string(count) +
                    " distinct event minutes inside a " +
                    std::to_string(window_minutes) + "-minute window");
  std::vector<int> times;
  times.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    const double t = window_start + k * static_cast<double>(window_minutes) /
                                        (count + 1);
    times.push_back(static_cast<int>(std::floor(t + 0.5)));
  }
  return times;
}

/// Draws min(policies_per_change, |policies|) distinct policy ids, uniformly
/// without replacement. The returned order is the selection order, which
/// later decides the round-robin assignment of events.
inline std::vector<int> select_affected_policies(
    const std::vector<Policy>& policies, const ScalingConfig& config,
    SplitMix64& rng) {
  if (policies.empty()) throw DataError("enterprise has no policies");
  std::vector<int> ids;
  ids.reserve(policies.size());
  for (const auto& p : policies) ids.push_back(p.policy_id);
  std::sort(ids.begin(), ids.end());

  const int take = std::min<int>(config.policies_per_change,
                                 static_cast<int>(ids.size()));
  for (int i = 0; i < take; ++i) {
    const int j =
        i + index_for_quantile(rng.next_unit(), static_cast<int>(ids.size()) - i);
    std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
  }
  ids.resize(static_cast<std::size_t>(take));
  return ids;
}

/// Uniform position of the single bottlenecked NF within the chain.
inline int select_bottleneck_nf(const Policy& policy, SplitMix64& rng) {
  if (policy.chain.empty()) throw DataError("policy has an empty chain");
  return index_for_quantile(rng.next_unit(),
                            static_cast<int>(policy.chain.size()));
}

/// Builds the full scaling schedule.
///
/// Per enterprise (ascending id, each on its own sub-stream of `seed`), per
/// window (chronological): windows with zero change draw nothing and emit
/// nothing. Otherwise the affected policies are drawn first (one draw per
/// selected id); when instances must change, one bottleneck NF is drawn per
/// selected policy in selection order, and the |I| single-instance events
/// are assigned round-robin over the selected (policy, NF) pairs at the
/// spread event times. When the change is too small for a whole instance,
/// each selected policy gets one PATH_CHANGE marker at the window start.
/// Result is sorted by (time, enterprise, policy).
inline std::vector<ScalingEvent> build_schedule(
    const std::vector<TrafficTimeline>& timelines, const Workload& workload,
    const ScalingConfig& config, std::uint64_t seed) {
  config.validate();

  std::vector<const TrafficTimeline*> ordered;
  ordered.reserve(timelines.size());
  for (const auto& tl : timelines) ordered.push_back(&tl);
  std::sort(ordered.begin(), ordered.end(),
            [](const TrafficTimeline* a, const TrafficTimeline* b) {
              return a->enterprise_id < b->enterprise_id;
            });
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i)
    if (ordered[i]->enterprise_id == ordered[i + 1]->enterprise_id)
      throw DataError("duplicate timeline for enterprise " +
                      std::to_string(ordered[i]->enterprise_id));

  std::vector<ScalingEvent> events;
  for (const TrafficTimeline* timeline : ordered) {
    const int enterprise_id = timeline->enterprise_id;
    const EnterpriseWorkload* enterprise = workload.find(enterprise_id);
    if (enterprise == nullptr)
      throw DataError("timeline references unknown enterprise " +
                      std::to_string(enterprise_id));

    std::map<int, const Policy*> by_id;
    for (const Policy& p : enterprise->policies) by_id[p.policy_id] = &p;

    SplitMix64 rng(substream_seed(seed, StreamDomain::kScaling,
                                  static_cast<std::uint64_t>(enterprise_id)));
    for (const WindowDelta& delta : window_deltas(*timeline, config)) {
      if (delta.traffic_change == 0.0) continue;
      const int required =
          instances_required(delta.traffic_change, config.threshold_L);
      const std::vector<int> affected =
          select_affected_policies(enterprise->policies, config, rng);

      if (required != 0) {
        std::vector<int> bottleneck;
        bottleneck.reserve(affected.size());
        for (int policy_id : affected)
          bottleneck.push_back(select_bottleneck_nf(*by_id.at(policy_id), rng));
        const int count = std::abs(required);
        const std::vector<int> times =
            event_times(delta.window_start, count, config.window_minutes);
        const ScalingAction action =
            required > 0 ? ScalingAction::kAdd : ScalingAction::kRemove;
        for (int j = 0; j < count; ++j) {
          const std::size_t slot =
              static_cast<std::size_t>(j) % affected.size();
          events.push_back({times[static_cast<std::size_t>(j)], enterprise_id,
                            affected[slot], bottleneck[slot], action});
        }
      } else {
        for (int policy_id : affected)
          events.push_back({delta.window_start, enterprise_id, policy_id, 0,
                            ScalingAction::kPathChange});
      }
    }
  }

  std::sort(events.begin(), events.end(),
            [](const ScalingEvent& a, const ScalingEvent& b) {
              if (a.time_minute != b.time_minute)
                return a.time_minute < b.time_minute;
              if (a.enterprise_id != b.enterprise_id)
                return a.enterprise_id < b.enterprise_id;
              return a.policy_id < b.policy_id;
            });
  return events;
}

}  // namespace nfvforge
