#ifndef LANESIM_METRICS_HPP
#define LANESIM_METRICS_HPP

#include <array>

#include "lanesim/engine.hpp"

namespace lanesim {

/// The paper's odometer checkpoints, meters.
inline constexpr std::array<double, 4> kCheckpointsM{5000.0, 10000.0, 15000.0,
                                                     20000.0};

/// Cumulative tracked lane-change counts at 5/10/15/20 km of AV travel.
struct CheckpointTable {
  std::array<int, 4> counts{};
};

struct TrialSummary {
  PolicyId policy = PolicyId::Mlca;
  int n_tracked = 1;
  uint64_t seed = 0;
  CheckpointTable checkpoints;
  int collision_count = 0;  // all vehicles, whole run
};

/// A lane change counts toward checkpoint c iff the vehicle's odometer at the
/// event was <= c; counts are summed over all tracked ids.
CheckpointTable aggregate_checkpoints(const IterationLog& log,
                                      const std::vector<VehicleId>& tracked);

struct TrialAverages {
  std::array<double, 4> mean_checkpoints{};
  double mean_collisions = 0.0;
  std::array<int, 4> presentation{};  // rounded half-up
  int presentation_collisions = 0;  // per 100 trials
};

/// Arithmetic means plus a presentation copy rounded half-up to integers.
/// Throws std::invalid_argument on an empty input.
TrialAverages average_trials(const std::vector<TrialSummary>& summaries);

TrialSummary summarize(const IterationLog& log, PolicyId policy,
                       int n_tracked);

}  // namespace lanesim

#endif  // LANESIM_METRICS_HPP
