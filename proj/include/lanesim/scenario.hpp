#ifndef LANESIM_SCENARIO_HPP
#define LANESIM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lanesim/core.hpp"
#include "lanesim/rng.hpp"

namespace lanesim {

enum class DepartEdge { Mainline, Ramp };

/// SUMO-style insertion attributes. Optional departLane/departPos encode the
/// "free" / "base" symbolic values.
struct InsertionSpec {
  VehicleId id = 0;
  std::optional<int> departLane;    // nullopt = "free" (least occupied)
  std::optional<double> departPos;  // nullopt = "base" (edge origin)
  DepartEdge departEdge = DepartEdge::Mainline;
  std::optional<int> arrivalLane;
  std::optional<double> arrivalPos;
  // arrivalEdge is always the mainline end in this network.
  double departPosLat = 0.0;
  double departTime = 0.0;
  VehicleKind kind = VehicleKind::Background;
  PolicyId policy = PolicyId::None;
  double desired_speed = 0.0;  // m/s
  double length = 5.0;
  std::optional<int> target_lane;  // initial positioning target (tracked AVs)
};

struct ScenarioConfig {
  int n_background = 240;
  int n_tracked = 1;  // 1 or 3
  PolicyId tracked_policy = PolicyId::Mlca;
  double ramp_share = 0.15;
  uint64_t seed = 1;
  double sim_horizon = 1800.0;  // s
  RoadNetwork network;

  // Demand calibration knobs.
  double bg_speed_min = 55.0 / 3.6;  // m/s
  double bg_speed_max = 95.0 / 3.6;  // m/s
  double demand_window = 0.6;   // fraction of the horizon receiving insertions
  double seed_fraction = 0.5;   // share of background pre-seeded along the road
  double truck_share = 0.05;    // share of background that is slow heavy traffic
  double truck_speed_min = 40.0 / 3.6;  // m/s
  double truck_speed_max = 55.0 / 3.6;  // m/s
  double truck_length = 12.0;   // m
  double av_depart_time = 60.0;  // s, first tracked AV
  double av_spacing = 15.0;      // s between tracked AVs
};

/// Builds and validates the road network from the config (throws ConfigError).
RoadNetwork build_network(const ScenarioConfig& cfg);

/// Deterministic demand: background vehicles with exponential inter-arrival
/// times plus the tracked AVs entering via the ramp. Sorted by departTime,
/// ties by id.
std::vector<InsertionSpec> spawn_schedule(const ScenarioConfig& cfg, Rng& rng);

std::string serialize_schedule(const std::vector<InsertionSpec>& schedule);

enum class InsertResult { Inserted, Deferred };

/// Places the vehicle iff the insertion gap is safe on both sides
/// (>= s0 + v·T); otherwise reports Deferred so the engine retries next step.
/// Throws ConfigError for malformed specs. The world must be indexed; the
/// world is reindexed after a successful insertion.
InsertResult insert_vehicle(World& world, const InsertionSpec& spec);

}  // namespace lanesim

#endif  // LANESIM_SCENARIO_HPP
