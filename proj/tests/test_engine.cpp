#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "lanesim/engine.hpp"

using namespace lanesim;

namespace {

SimConfig small_config(uint64_t seed = 7) {
  SimConfig cfg;
  cfg.scenario.seed = seed;
  cfg.scenario.n_background = 60;
  cfg.scenario.sim_horizon = 600.0;
  return cfg;
}

VehicleState placed(VehicleId id, int lane, double pos, double speed,
                    double length = 5.0) {
  VehicleState v;
  v.id = id;
  v.lane = lane;
  v.pos = pos;
  v.speed = speed;
  v.desired_speed = speed;
  v.length = length;
  return v;
}

}  // namespace

TEST_CASE("identical configuration and seed give bit-identical logs") {
  const SimConfig cfg = small_config();
  const IterationLog a = run_iteration(cfg, PolicyId::Mlca, 7);
  const IterationLog b = run_iteration(cfg, PolicyId::Mlca, 7);
  CHECK(a.serialize() == b.serialize());
  const IterationLog c = run_iteration(cfg, PolicyId::Mlca, 8);
  CHECK(a.serialize() != c.serialize());
}

TEST_CASE("empty road: the tracked vehicle merges and never changes lanes") {
  SimConfig cfg = small_config();
  cfg.scenario.n_background = 0;
  cfg.scenario.sim_horizon = 1800.0;

  for (PolicyId policy : {PolicyId::None, PolicyId::Mlca}) {
    const IterationLog log = run_iteration(cfg, policy, 3);
    CHECK(log.collisions.empty());
    CHECK(log.merges.size() == 1);
    CHECK(log.termination == "tracked_arrived");
    int discretionary = 0;
    for (const auto& e : log.lane_changes)
      if (e.reason == LaneChangeReason::Discretionary) ++discretionary;
    CHECK(discretionary == 0);
  }
}

TEST_CASE("rear-end detection: net gap at or below the threshold") {
  World w;
  w.net = RoadNetwork{};
  w.vehicles = {placed(1, 0, 100.0, 20.0), placed(2, 0, 104.9, 20.0)};
  w.reindex();

  // Net gap = 104.9 - 5 - 100 = -0.1.
  auto events = detect_collisions(w);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == CollisionKind::RearEnd);
  CHECK(events[0].rear == 1);
  CHECK(events[0].front == 2);
  CHECK(events[0].lane == 0);

  // Exactly zero gap still counts.
  w.vehicles[1].pos = 105.0;
  w.reindex();
  CHECK(detect_collisions(w).size() == 1);

  // A positive gap below the near-contact threshold counts only when the
  // threshold says so.
  w.vehicles[1].pos = 105.5;
  w.reindex();
  CHECK(detect_collisions(w).empty());
  CHECK(detect_collisions(w, {}, 0.95).size() == 1);

  // Different lanes never collide longitudinally.
  w.vehicles[1].lane = 1;
  w.vehicles[1].pos = 104.0;
  w.reindex();
  CHECK(detect_collisions(w, {}, 0.95).empty());
}

TEST_CASE("side-swipe detection on committed lane entries") {
  World w;
  w.net = RoadNetwork{};
  // Vehicle 1 just entered lane 0 on top of vehicle 2's span.
  w.vehicles = {placed(1, 0, 100.0, 20.0), placed(2, 0, 98.0, 20.0)};
  w.reindex();
  const LaneEntry entry{1, 0};
  auto events = detect_collisions(w, {&entry, 1});
  REQUIRE(!events.empty());
  CHECK(events[0].kind == CollisionKind::SideSwipe);
  CHECK(events[0].rear == 2);
  CHECK(events[0].front == 1);

  // The same geometry without a committed entry is a plain rear-end.
  events = detect_collisions(w);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == CollisionKind::RearEnd);
}

TEST_CASE("per-step invariants hold across policies") {
  for (PolicyId policy : {PolicyId::Mlca, PolicyId::None, PolicyId::Mobil}) {
    std::map<VehicleId, double> last_pos;
    int steps = 0;
    const StepObserver observer = [&](const World& w, const IterationLog& log) {
      ++steps;
      // Conservation: nothing is dropped silently.
      REQUIRE(log.inserted ==
              log.arrived + log.removed_by_collision +
                  static_cast<int>(w.vehicles.size()));
      for (const VehicleState& v : w.vehicles) {
        REQUIRE(v.speed >= 0.0);
        REQUIRE(v.lane >= 0);
        REQUIRE(v.lane < w.net.n_lanes);
        auto it = last_pos.find(v.id);
        if (it != last_pos.end()) REQUIRE(v.pos >= it->second);
        last_pos[v.id] = v.pos;
      }
      REQUIRE(log.vehicle_counts.size() == static_cast<std::size_t>(steps));
      REQUIRE(log.vehicle_counts.back() ==
              static_cast<int>(w.vehicles.size()));
    };
    const IterationLog log = run_iteration(small_config(), policy, 11, observer);
    CHECK(steps > 0);
    // Events are time-ordered.
    for (std::size_t i = 1; i < log.lane_changes.size(); ++i)
      CHECK(log.lane_changes[i - 1].time <= log.lane_changes[i].time);
    for (std::size_t i = 1; i < log.collisions.size(); ++i)
      CHECK(log.collisions[i - 1].time <= log.collisions[i].time);
  }
}

TEST_CASE("validation mode runs the full iteration without violations") {
  SimConfig cfg = small_config();
  cfg.engine.validate = true;
  const IterationLog log = run_iteration(cfg, PolicyId::Mlca, 5);
  CHECK(log.mlca_violations.empty());
}

TEST_CASE("tracked ids are reported and the log serialization is stable") {
  SimConfig cfg = small_config();
  cfg.scenario.n_tracked = 3;
  const IterationLog log = run_iteration(cfg, PolicyId::None, 13);
  CHECK(log.tracked_ids.size() == 3);
  const std::string s = log.serialize();
  CHECK(!s.empty());
  CHECK(s == run_iteration(cfg, PolicyId::None, 13).serialize());
}

TEST_CASE("bad configuration is rejected up front") {
  SimConfig cfg = small_config();
  cfg.scenario.network.ramp_merge_start = 19900.0;
  CHECK_THROWS_AS(run_iteration(cfg, PolicyId::Mlca, 1), ConfigError);
}
