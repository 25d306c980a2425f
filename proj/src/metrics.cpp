#include "lanesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanesim {

CheckpointTable aggregate_checkpoints(const IterationLog& log,
                                      const std::vector<VehicleId>& tracked) {
  CheckpointTable table;
  for (const LaneChangeEvent& e : log.lane_changes) {
    if (e.reason == LaneChangeReason::Positioning) continue;
    if (std::find(tracked.begin(), tracked.end(), e.vehicle) == tracked.end())
      continue;
    for (std::size_t c = 0; c < kCheckpointsM.size(); ++c)
      if (e.odometer <= kCheckpointsM[c]) ++table.counts[c];
  }
  return table;
}

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

}  // namespace

TrialAverages average_trials(const std::vector<TrialSummary>& summaries) {
  if (summaries.empty())
    throw std::invalid_argument("average_trials: no summaries");
  TrialAverages avg;
  for (const TrialSummary& s : summaries) {
    for (std::size_t c = 0; c < avg.mean_checkpoints.size(); ++c)
      avg.mean_checkpoints[c] += s.checkpoints.counts[c];
    avg.mean_collisions += s.collision_count;
  }
  const double n = static_cast<double>(summaries.size());
  for (std::size_t c = 0; c < avg.mean_checkpoints.size(); ++c) {
    avg.mean_checkpoints[c] /= n;
    avg.presentation[c] = round_half_up(avg.mean_checkpoints[c]);
  }
  avg.mean_collisions /= n;
  // Collision charts report totals normalized to 100 trials, so the
  // presentation figure is the per-trial mean scaled back up.
  avg.presentation_collisions = round_half_up(100.0 * avg.mean_collisions);
  return avg;
}

TrialSummary summarize(const IterationLog& log, PolicyId policy,
                       int n_tracked) {
  TrialSummary s;
  s.policy = policy;
  s.n_tracked = n_tracked;
  s.seed = log.seed;
  s.checkpoints = aggregate_checkpoints(log, log.tracked_ids);
  s.collision_count = static_cast<int>(log.collisions.size());
  return s;
}

}  // namespace lanesim
