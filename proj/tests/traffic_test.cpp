#include "nfvforge/traffic.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nfvforge/errors.hpp"
#include "nfvforge/prng.hpp"
#include "nfvforge/workload.hpp"

namespace nfvforge {
namespace {

std::string full_day_csv(int enterprise_id,
                         const std::vector<double>& rates13) {
  std::string csv = "enterprise_id,minute,rate\n";
  for (std::size_t i = 0; i < rates13.size(); ++i)
    csv += std::to_string(enterprise_id) + "," + std::to_string(i * 120) +
           "," + std::to_string(rates13[i]) + "\n";
  return csv;
}

TrafficTimeline grid_timeline(int enterprise_id,
                              const std::vector<double>& rates) {
  TrafficTimeline tl;
  tl.enterprise_id = enterprise_id;
  for (std::size_t i = 0; i < rates.size(); ++i)
    tl.samples.push_back({static_cast<int>(i) * 120, rates[i]});
  return tl;
}

const std::vector<double> kDayShape = {8,  5,  4,  5,  10, 16, 20,
                                       22, 25, 30, 34, 22, 12};

TEST(LoadTimelines, ParsesAFullDay) {
  std::istringstream in(full_day_csv(3, kDayShape));
  const auto timelines = load_timelines(in);
  ASSERT_EQ(timelines.size(), 1u);
  EXPECT_EQ(timelines[0].enterprise_id, 3);
  ASSERT_EQ(timelines[0].samples.size(), 13u);
  EXPECT_EQ(timelines[0].samples[0].minute, 0);
  EXPECT_EQ(timelines[0].samples[12].minute, 1440);
  EXPECT_DOUBLE_EQ(timelines[0].samples[4].rate, 10.0);
  EXPECT_NO_THROW(timelines[0].validate());
}

TEST(LoadTimelines, SortsEnterprisesAndAcceptsInterleavedRows) {
  std::string csv = "enterprise_id,minute,rate\n";
  for (int m = 0; m <= 1440; m += 120) {
    csv += "5," + std::to_string(m) + ",1\n";
    csv += "2," + std::to_string(m) + ",2\n";
  }
  std::istringstream in(csv);
  const auto timelines = load_timelines(in);
  ASSERT_EQ(timelines.size(), 2u);
  EXPECT_EQ(timelines[0].enterprise_id, 2);
  EXPECT_EQ(timelines[1].enterprise_id, 5);
}

TEST(LoadTimelines, EmptyInputYieldsNoTimelines) {
  std::istringstream in("");
  EXPECT_TRUE(load_timelines(in).empty());
}

TEST(LoadTimelines, ToleratesCrLf) {
  std::string csv = "enterprise_id,minute,rate\r\n";
  for (int m = 0; m <= 1440; m += 120) csv += "0," + std::to_string(m) + ",1\r\n";
  std::istringstream in(csv);
  EXPECT_EQ(load_timelines(in).size(), 1u);
}

TEST(LoadTimelines, ErrorsNameTheOffendingRow) {
  const auto expect_message = [](const std::string& csv,
                                 const std::string& needle) {
    std::istringstream in(csv);
    try {
      load_timelines(in);
      FAIL() << "expected DataError containing '" << needle << "'";
    } catch (const DataError& err) {
      EXPECT_NE(std::string(err.what()).find(needle), std::string::npos)
          << err.what();
    }
  };

  expect_message("id,minute,rate\n", "row 1");
  expect_message("enterprise_id,minute,rate\n0,0\n", "row 2");
  expect_message("enterprise_id,minute,rate\n0,0,1\n0,sixty,1\n", "row 3");
  expect_message("enterprise_id,minute,rate\n-1,0,1\n", "negative enterprise_id");
  expect_message("enterprise_id,minute,rate\n0,60,1\n", "off-grid sample at row 2");
  expect_message("enterprise_id,minute,rate\n0,1560,1\n", "off-grid sample at row 2");
  expect_message("enterprise_id,minute,rate\n0,0,-1\n", "negative rate at row 2");
  expect_message("enterprise_id,minute,rate\n0,0,1\n0,0,2\n", "duplicate minute 0");
  expect_message(full_day_csv(0, {1, 2, 3}), "missing sample at minute 360");
}

TEST(TimelineValidate, RejectsOffGridAndNegativeShapes) {
  TrafficTimeline empty{7, {}};
  EXPECT_THROW(empty.validate(), DataError);

  TrafficTimeline off_grid{0, {{0, 1.0}, {60, 2.0}}};
  EXPECT_THROW(off_grid.validate(), DataError);

  TrafficTimeline starts_late{0, {{120, 1.0}}};
  EXPECT_THROW(starts_late.validate(), DataError);

  TrafficTimeline negative{0, {{0, 1.0}, {120, -2.0}}};
  EXPECT_THROW(negative.validate(), DataError);

  EXPECT_NO_THROW(grid_timeline(0, kDayShape).validate());
}

TEST(EqualSplit, DividesEvenlyAndValidates) {
  EXPECT_DOUBLE_EQ(equal_split(30.0, 3), 10.0);
  EXPECT_DOUBLE_EQ(equal_split(0.0, 5), 0.0);
  EXPECT_THROW(equal_split(10.0, 0), DataError);
  EXPECT_THROW(equal_split(-1.0, 3), DataError);
}

TEST(EqualSplit, SharesReconstructTheTotal) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double total = rng.next_unit() * 1e6;
    const int n = 1 + index_for_quantile(rng.next_unit(), 10000);
    const double share = equal_split(total, n);
    EXPECT_NEAR(share * n, total, 1e-9 * std::max(1.0, total));
  }
}

TEST(InitialDistribution, SplitsTheFirstSampleEqually) {
  const TrafficTimeline tl = grid_timeline(1, kDayShape);  // first sample 8
  std::vector<Policy> policies;
  for (int p = 0; p < 4; ++p) policies.push_back({1, p, {}});

  const FlowAssignment flows = initial_distribution(tl, policies);
  EXPECT_EQ(flows.enterprise_id, 1);
  ASSERT_EQ(flows.per_policy_rate.size(), 4u);
  for (const auto& [policy_id, rate] : flows.per_policy_rate) {
    EXPECT_GE(policy_id, 0);
    EXPECT_LT(policy_id, 4);
    EXPECT_DOUBLE_EQ(rate, 2.0);
  }
}

TEST(InitialDistribution, RejectsForeignPoliciesAndEmptySets) {
  const TrafficTimeline tl = grid_timeline(1, kDayShape);
  EXPECT_THROW(initial_distribution(tl, {}), DataError);

  std::vector<Policy> foreign = {{2, 0, {}}};
  EXPECT_THROW(initial_distribution(tl, foreign), DataError);
}

TEST(Interpolate, ExactAtSamplesLinearBetween) {
  const TrafficTimeline tl = grid_timeline(0, {10, 30});
  EXPECT_DOUBLE_EQ(interpolate(tl, 0), 10.0);
  EXPECT_DOUBLE_EQ(interpolate(tl, 120), 30.0);
  EXPECT_DOUBLE_EQ(interpolate(tl, 60), 20.0);
  EXPECT_DOUBLE_EQ(interpolate(tl, 30), 15.0);
  EXPECT_DOUBLE_EQ(interpolate(tl, 90), 25.0);
}

TEST(Interpolate, ThrowsOutsideTheSampledRange) {
  const TrafficTimeline tl = grid_timeline(0, {10, 30});
  EXPECT_THROW(interpolate(tl, -1), DataError);
  EXPECT_THROW(interpolate(tl, 121), DataError);
}

TEST(Interpolate, SampleMinutesExactAndMidpointsEqualSegmentMeans) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> rates;
    for (int i = 0; i < 13; ++i) rates.push_back(rng.next_unit() * 40.0);
    const TrafficTimeline tl = grid_timeline(0, rates);

    for (std::size_t i = 0; i < rates.size(); ++i)
      ASSERT_EQ(interpolate(tl, static_cast<double>(i) * 120), rates[i]);
    for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
      const double mid = static_cast<double>(i) * 120 + 60;
      ASSERT_NEAR(interpolate(tl, mid), (rates[i] + rates[i + 1]) / 2.0,
                  1e-12);
    }
  }
}

TEST(Interpolate, StaysWithinSegmentBounds) {
  SplitMix64 rng(23);
  const TrafficTimeline tl = grid_timeline(0, kDayShape);
  for (int trial = 0; trial < 2000; ++trial) {
    const double t = rng.next_unit() * 1440.0;
    const std::size_t seg = static_cast<std::size_t>(t / 120.0);
    const double lo = std::min(kDayShape[seg], kDayShape[seg + 1]);
    const double hi = std::max(kDayShape[seg], kDayShape[seg + 1]);
    const double v = interpolate(tl, t);
    ASSERT_GE(v, lo - 1e-12);
    ASSERT_LE(v, hi + 1e-12);
  }
}

}  // namespace
}  // namespace nfvforge
