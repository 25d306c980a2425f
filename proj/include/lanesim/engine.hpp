#ifndef LANESIM_ENGINE_HPP
#define LANESIM_ENGINE_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lanesim/config.hpp"
#include "lanesim/mlca.hpp"

namespace lanesim {

enum class LaneChangeReason { Discretionary, Positioning };

struct LaneChangeEvent {
  double time = 0.0;
  VehicleId vehicle = 0;
  int from_lane = 0;
  int to_lane = 0;
  double pos = 0.0;
  double odometer = 0.0;
  LaneChangeReason reason = LaneChangeReason::Discretionary;
};

/// Ramp -> lane 0 merges are tracked separately from lane changes.
struct MergeEvent {
  double time = 0.0;
  VehicleId vehicle = 0;
  double pos = 0.0;
};

enum class CollisionKind { RearEnd, SideSwipe };

struct CollisionEvent {
  double time = 0.0;
  VehicleId rear = 0;
  VehicleId front = 0;
  int lane = 0;
  CollisionKind kind = CollisionKind::RearEnd;
  double pos = 0.0;
};

struct IterationLog {
  uint64_t seed = 0;
  std::vector<VehicleId> tracked_ids;
  std::vector<LaneChangeEvent> lane_changes;
  std::vector<MergeEvent> merges;
  std::vector<CollisionEvent> collisions;
  std::vector<int> vehicle_counts;  // on-road count per step
  std::string termination;          // "horizon" | "tracked_arrived"
  int inserted = 0;
  int arrived = 0;
  int removed_by_collision = 0;
  int deferred_insertions = 0;  // deferral events (retries included)
  std::vector<MlcaTraceRecord> mlca_violations;

  /// Line-oriented record form, one event per line; byte-stable per seed.
  std::string serialize() const;
};

/// A lane entry committed this step (discrete change, merge, or a Continuous
/// boundary crossing); input to side-swipe detection.
struct LaneEntry {
  VehicleId vehicle = 0;
  int lane = 0;
};

/// Post-integration collision scan. REAR_END: same-lane net gap <= threshold.
/// SIDE_SWIPE: a committed lane entry overlapping another vehicle's span.
std::vector<CollisionEvent> detect_collisions(
    const World& world, std::span<const LaneEntry> entries = {},
    double gap_threshold = 0.0);

/// Called after every completed step with the post-step world and the
/// log-so-far; used by property tests to check per-step invariants.
using StepObserver = std::function<void(const World&, const IterationLog&)>;

/// One deterministic simulation iteration. `policy` overrides the scenario's
/// tracked policy, `seed` its seed. Throws ConfigError on bad config and
/// MlcaViolation in validation mode.
IterationLog run_iteration(const SimConfig& cfg, PolicyId policy,
                           uint64_t seed, const StepObserver& observer = {});

}  // namespace lanesim

#endif  // LANESIM_ENGINE_HPP
