#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "nfvforge/errors.hpp"
#include "nfvforge/workload.hpp"

namespace nfvforge {

/// Spacing of the traffic report grid, minutes.
constexpr int kSampleSpacingMinutes = 120;
/// Minutes in the reported day; a full timeline spans [0, 1440] inclusive.
constexpr int kDayMinutes = 1440;

struct TrafficSample {
  int minute = 0;
  double rate = 0.0;  // units of 10 MBps

  bool operator==(const TrafficSample&) const = default;
};

/// Per-enterprise traffic rate samples on the 120-minute grid, linearly
/// interpolable between samples.
struct TrafficTimeline {
  int enterprise_id = 0;
  std::vector<TrafficSample> samples;

  bool operator==(const TrafficTimeline&) const = default;

  /// Grid shape: first sample at minute 0, then one every 120 minutes,
  /// all rates non-negative.
  void validate() const {
    if (samples.empty())
      throw DataError("timeline for enterprise " +
                      std::to_string(enterprise_id) + " has no samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].minute != static_cast<int>(i) * kSampleSpacingMinutes)
        throw DataError("timeline for enterprise " +
                        std::to_string(enterprise_id) +
                        " is off the 120-minute grid at sample " +
                        std::to_string(i));
      if (samples[i].rate < 0.0)
        throw DataError("timeline for enterprise " +
                        std::to_string(enterprise_id) +
                        " has a negative rate at minute " +
                        std::to_string(samples[i].minute));
    }
  }
};

// ─────────────────────────────────────────────
// Timeline ingestion
// ─────────────────────────────────────────────

/// Loads timelines from CSV with header `enterprise_id,minute,rate`.
/// Every enterprise must supply the full day grid: 13 samples at minutes
/// 0, 120, ..., 1440. Returns one timeline per enterprise, sorted by id.
inline std::vector<TrafficTimeline> load_timelines(std::istream& in) {
  std::string line;
  int row = 0;
  if (!std::getline(in, line)) return {};
  ++row;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "enterprise_id,minute,rate")
    throw DataError("row 1: expected header 'enterprise_id,minute,rate'");

  std::map<int, std::map<int, double>> by_enterprise;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw DataError("row " + std::to_string(row) +
                      ": expected 'enterprise_id,minute,rate'");
    int enterprise_id = 0;
    int minute = 0;
    double rate = 0.0;
    try {
      enterprise_id = std::stoi(line.substr(0, c1));
      minute = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
      rate = std::stod(line.substr(c2 + 1));
    } catch (const std::exception&) {
      throw DataError("row " + std::to_string(row) +
                      ": expected 'enterprise_id,minute,rate'");
    }
    if (enterprise_id < 0)
      throw DataError("row " + std::to_string(row) + ": negative enterprise_id");
    if (minute < 0 || minute > kDayMinutes || minute % kSampleSpacingMinutes != 0)
      throw DataError("off-grid sample at row " + std::to_string(row));
    if (rate < 0.0)
      throw DataError("negative rate at row " + std::to_string(row));
    auto [it, inserted] = by_enterprise[enterprise_id].emplace(minute, rate);
    if (!inserted)
      throw DataError("duplicate minute " + std::to_string(minute) +
                      " for enterprise " + std::to_string(enterprise_id) +
                      " at row " + std::to_string(row));
  }

  std::vector<TrafficTimeline> timelines;
  timelines.reserve(by_enterprise.size());
  for (const auto& [enterprise_id, samples] : by_enterprise) {
    for (int m = 0; m <= kDayMinutes; m += kSampleSpacingMinutes)
      if (!samples.contains(m))
        throw DataError("missing sample at minute " + std::to_string(m) +
                        " for enterprise " + std::to_string(enterprise_id));
    TrafficTimeline tl;
    tl.enterprise_id = enterprise_id;
    for (const auto& [minute, rate] : samples) tl.samples.push_back({minute, rate});
    timelines.push_back(std::move(tl));
  }
  return timelines;
}

// ─────────────────────────────────────────────
// Initial distribution
// ─────────────────────────────────────────────

/// Splits a total rate evenly; n * equal_split(x, n) reconstructs x to 1e-9
/// relative.
inline double equal_split(double total_rate, int num_policies) {
  if (num_policies < 1) throw DataError("no policies to carry traffic");
  if (total_rate < 0.0) throw DataError("total rate must be non-negative");
  return total_rate / num_policies;
}

/// Equal share of the enterprise's initial total rate, per policy.
struct FlowAssignment {
  int enterprise_id = 0;
  std::map<int, double> per_policy_rate;

  bool operator==(const FlowAssignment&) const = default;
};

/// Distributes the first sample of the timeline equally over the
/// enterprise's policies.
inline FlowAssignment initial_distribution(const TrafficTimeline& timeline,
                                           const std::vector<Policy>& policies) {
  timeline.validate();
  if (policies.empty()) throw DataError("no policies to carry traffic");
  for (const auto& p : policies)
    if (p.enterprise_id != timeline.enterprise_id)
      throw DataError("policy " + std::to_string(p.policy_id) +
                      " belongs to enterprise " +
                      std::to_string(p.enterprise_id) + ", timeline is for " +
                      std::to_string(timeline.enterprise_id));

  const double share =
      equal_split(timeline.samples.front().rate, static_cast<int>(policies.size()));
  FlowAssignment assignment;
  assignment.enterprise_id = timeline.enterprise_id;
  for (const auto& p : policies) assignment.per_policy_rate[p.policy_id] = share;
  return assignment;
}

// ─────────────────────────────────────────────
// Interpolation
// ─────────────────────────────────────────────

/// Piecewise-linear rate at minute t. Exact at sample minutes; between them
/// the convex form r0*(1-θ) + r1*θ keeps midpoints equal to segment means.
inline double interpolate(const TrafficTimeline& timeline, double t) {
  const auto& s = timeline.samples;
  if (s.empty() || t < s.front().minute || t > s.back().minute)
    throw DataError("time out of range");

  auto upper = std::upper_bound(
      s.begin(), s.end(), t,
      [](double value, const TrafficSample& sample) { return value < sample.minute; });
  if (upper == s.end()) return s.back().rate;  // t == last sample minute
  const auto& hi = *upper;
  const auto& lo = *(upper - 1);
  if (t == lo.minute) return lo.rate;
  const double theta = (t - lo.minute) / (hi.minute - lo.minute);
  return lo.rate * (1.0 - theta) + hi.rate * theta;
}

}  // namespace nfvforge
