#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "lanesim/metrics.hpp"

using namespace lanesim;

namespace {

LaneChangeEvent ev(VehicleId vehicle, double odometer,
                   LaneChangeReason reason = LaneChangeReason::Discretionary) {
  LaneChangeEvent e;
  e.vehicle = vehicle;
  e.odometer = odometer;
  e.reason = reason;
  return e;
}

TrialSummary trial(std::array<int, 4> counts, int collisions) {
  TrialSummary s;
  s.checkpoints.counts = counts;
  s.collision_count = collisions;
  return s;
}

}  // namespace

TEST_CASE("checkpoint binning by odometer") {
  IterationLog log;
  CHECK(aggregate_checkpoints(log, {1}).counts == std::array<int, 4>{0, 0, 0, 0});

  // One vehicle, events at 4.2 / 9.9 / 14.1 / 19.8 km -> (1,2,3,4).
  log.lane_changes = {ev(1, 4200.0), ev(1, 9900.0), ev(1, 14100.0),
                      ev(1, 19800.0)};
  CHECK(aggregate_checkpoints(log, {1}).counts ==
        std::array<int, 4>{1, 2, 3, 4});

  // Three vehicles, (4.2), (7.0, 12.0), (18.0) km -> summed (1,2,3,4).
  log.lane_changes = {ev(1, 4200.0), ev(2, 7000.0), ev(2, 12000.0),
                      ev(3, 18000.0)};
  CHECK(aggregate_checkpoints(log, {1, 2, 3}).counts ==
        std::array<int, 4>{1, 2, 3, 4});

  // Checkpoint boundary is inclusive.
  log.lane_changes = {ev(1, 5000.0)};
  CHECK(aggregate_checkpoints(log, {1}).counts ==
        std::array<int, 4>{1, 1, 1, 1});
}

TEST_CASE("non-tracked and positioning events are excluded") {
  IterationLog log;
  log.lane_changes = {ev(1, 4200.0), ev(99, 4300.0),
                      ev(1, 4400.0, LaneChangeReason::Positioning)};
  CHECK(aggregate_checkpoints(log, {1}).counts ==
        std::array<int, 4>{1, 1, 1, 1});
}

TEST_CASE("checkpoint tables are monotone for random logs") {
  std::mt19937_64 gen(55);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  };
  for (int trial_i = 0; trial_i < 200; ++trial_i) {
    IterationLog log;
    const int n = static_cast<int>(uni(0.0, 40.0));
    for (int i = 0; i < n; ++i)
      log.lane_changes.push_back(
          ev(static_cast<VehicleId>(uni(0.0, 4.0)), uni(0.0, 25000.0)));
    const auto table = aggregate_checkpoints(log, {0, 1, 2});

    // Monotone and equal to a brute-force filter-and-count.
    for (int c = 1; c < 4; ++c) REQUIRE(table.counts[c] >= table.counts[c - 1]);
    for (int c = 0; c < 4; ++c) {
      int expect = 0;
      for (const auto& e : log.lane_changes)
        if (e.vehicle <= 2 && e.odometer <= kCheckpointsM[c]) ++expect;
      REQUIRE(table.counts[c] == expect);
    }
  }
}

TEST_CASE("average_trials means and presentation rounding") {
  // Identical summaries average to themselves.
  auto avg = average_trials({trial({1, 2, 3, 4}, 1), trial({1, 2, 3, 4}, 1)});
  CHECK(avg.mean_checkpoints == std::array<double, 4>{1, 2, 3, 4});
  CHECK(avg.presentation == std::array<int, 4>{1, 2, 3, 4});

  // 4 and 5 average to 4.5; half-up rounding presents 5.
  avg = average_trials({trial({4, 4, 4, 4}, 0), trial({5, 5, 5, 5}, 0)});
  CHECK(avg.mean_checkpoints[0] == doctest::Approx(4.5));
  CHECK(avg.presentation == std::array<int, 4>{5, 5, 5, 5});

  // Collisions are presented as totals per 100 trials: a 1/3 per-trial mean
  // shows as 33, not as a rounded-down 0.
  avg = average_trials(
      {trial({0, 0, 0, 0}, 0), trial({0, 0, 0, 0}, 0), trial({0, 0, 0, 0}, 1)});
  CHECK(avg.mean_collisions == doctest::Approx(1.0 / 3.0));
  CHECK(avg.presentation_collisions == 33);

  // With the usual 100-trial experiment the presentation equals the total.
  std::vector<TrialSummary> hundred(100, trial({0, 0, 0, 0}, 0));
  hundred[3].collision_count = 1;
  hundred[57].collision_count = 2;
  avg = average_trials(hundred);
  CHECK(avg.presentation_collisions == 3);
}

TEST_CASE("average_trials is permutation invariant and rejects empty input") {
  std::vector<TrialSummary> ts{trial({1, 1, 2, 3}, 0), trial({0, 2, 4, 4}, 2),
                               trial({2, 3, 3, 5}, 1)};
  const auto a = average_trials(ts);
  std::reverse(ts.begin(), ts.end());
  const auto b = average_trials(ts);
  CHECK(a.mean_checkpoints == b.mean_checkpoints);
  CHECK(a.mean_collisions == b.mean_collisions);
  CHECK_THROWS_AS(average_trials({}), std::invalid_argument);
}

TEST_CASE("summarize copies identity and counts from the log") {
  IterationLog log;
  log.seed = 42;
  log.tracked_ids = {0};
  log.lane_changes = {ev(0, 4000.0), ev(0, 12000.0)};
  log.collisions.resize(2);
  const TrialSummary s = summarize(log, PolicyId::Mobil, 1);
  CHECK(s.policy == PolicyId::Mobil);
  CHECK(s.n_tracked == 1);
  CHECK(s.seed == 42);
  CHECK(s.checkpoints.counts == std::array<int, 4>{1, 1, 2, 2});
  CHECK(s.collision_count == 2);
}
