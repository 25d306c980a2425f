#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "lanesim/scenario.hpp"

using namespace lanesim;

namespace {

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

TEST_CASE("build_network defaults and overrides") {
  ScenarioConfig cfg;
  const RoadNetwork net = build_network(cfg);
  CHECK(net.n_lanes == 5);
  CHECK(net.mainline_length == 20000.0);
  CHECK(net.ramp_merge_start == 1000.0);
  CHECK(net.ramp_accel_len == 300.0);

  cfg.network.n_lanes = 3;
  CHECK(build_network(cfg).n_lanes == 3);

  cfg.network = RoadNetwork{};
  cfg.network.ramp_merge_start = 19900.0;  // 19900 + 300 > 20000
  CHECK_THROWS_AS(build_network(cfg), ConfigError);
}

TEST_CASE("spawn_schedule shapes the demand as configured") {
  ScenarioConfig cfg;
  cfg.seed = 9;
  Rng rng(cfg.seed, "demand");
  const auto schedule = spawn_schedule(cfg, rng);

  int tracked = 0, background = 0, ramp_bg = 0, seeded = 0;
  for (const auto& spec : schedule) {
    if (spec.kind == VehicleKind::TrackedAv) {
      ++tracked;
      CHECK(spec.departEdge == DepartEdge::Ramp);
      CHECK(spec.policy == cfg.tracked_policy);
      CHECK(spec.target_lane == 2);  // middle of five lanes
      CHECK(spec.departTime == doctest::Approx(60.0));
    } else {
      ++background;
      CHECK(spec.policy == PolicyId::None);
      if (spec.departEdge == DepartEdge::Ramp) ++ramp_bg;
      if (spec.departTime == 0.0) {
        ++seeded;
        REQUIRE(spec.departPos.has_value());
        CHECK(*spec.departPos >= 0.0);
        CHECK(*spec.departPos <= 0.95 * 20000.0);
      }
    }
  }
  CHECK(tracked == 1);
  CHECK(background == cfg.n_background);
  CHECK(seeded == static_cast<int>(cfg.n_background * cfg.seed_fraction));
  CHECK(ramp_bg > 0);
  CHECK(std::is_sorted(schedule.begin(), schedule.end(),
                       [](const InsertionSpec& a, const InsertionSpec& b) {
                         return a.departTime < b.departTime;
                       }));
}

TEST_CASE("three tracked vehicles are staggered 15 seconds apart") {
  ScenarioConfig cfg;
  cfg.n_tracked = 3;
  Rng rng(1, "demand");
  const auto schedule = spawn_schedule(cfg, rng);
  std::vector<double> times;
  for (const auto& spec : schedule)
    if (spec.kind == VehicleKind::TrackedAv) times.push_back(spec.departTime);
  REQUIRE(times.size() == 3);
  CHECK(times[0] == doctest::Approx(60.0));
  CHECK(times[1] == doctest::Approx(75.0));
  CHECK(times[2] == doctest::Approx(90.0));
}

TEST_CASE("schedules are deterministic per seed") {
  ScenarioConfig cfg;
  cfg.seed = 31;
  Rng a(cfg.seed, "demand");
  Rng b(cfg.seed, "demand");
  CHECK(serialize_schedule(spawn_schedule(cfg, a)) ==
        serialize_schedule(spawn_schedule(cfg, b)));
  Rng c(cfg.seed + 1, "demand");
  CHECK(serialize_schedule(spawn_schedule(cfg, a)) !=
        serialize_schedule(spawn_schedule(cfg, c)));
}

TEST_CASE("zero background leaves only tracked vehicles") {
  ScenarioConfig cfg;
  cfg.n_background = 0;
  Rng rng(1, "demand");
  const auto schedule = spawn_schedule(cfg, rng);
  REQUIRE(schedule.size() == 1);
  CHECK(schedule[0].kind == VehicleKind::TrackedAv);
}

TEST_CASE("spawn_schedule validates its inputs") {
  ScenarioConfig cfg;
  Rng rng(1, "demand");
  cfg.n_background = -1;
  CHECK_THROWS_AS(spawn_schedule(cfg, rng), ConfigError);
  cfg = ScenarioConfig{};
  cfg.n_tracked = 2;
  CHECK_THROWS_AS(spawn_schedule(cfg, rng), ConfigError);
  cfg = ScenarioConfig{};
  cfg.ramp_share = 1.5;
  CHECK_THROWS_AS(spawn_schedule(cfg, rng), ConfigError);
}

TEST_CASE("insert_vehicle places into an empty network at departPos") {
  World w;
  w.reindex();
  InsertionSpec spec;
  spec.id = 1;
  spec.departLane = 3;
  spec.departPos = 1234.5;
  spec.desired_speed = 20.0;
  CHECK(insert_vehicle(w, spec) == InsertResult::Inserted);
  REQUIRE(w.vehicles.size() == 1);
  CHECK(w.get(1).lane == 3);
  CHECK(w.get(1).pos == doctest::Approx(1234.5));
}

TEST_CASE("insert_vehicle defers into an occupied gap and retries later") {
  World w;
  w.vehicles = {placed(1, 0, 10.0, 20.0)};
  w.reindex();
  InsertionSpec spec;
  spec.id = 2;
  spec.departLane = 0;
  spec.departPos = 0.0;
  spec.desired_speed = 20.0;
  CHECK(insert_vehicle(w, spec) == InsertResult::Deferred);
  CHECK(w.vehicles.size() == 1);

  // Once the occupant moves on, the same spec succeeds.
  w.vehicles[0].pos = 400.0;
  w.reindex();
  CHECK(insert_vehicle(w, spec) == InsertResult::Inserted);
  CHECK(w.vehicles.size() == 2);
}

TEST_CASE("insert_vehicle rejects a coincident occupant") {
  // A vehicle whose front bumper sits exactly at the insertion point must be
  // detected even though it is neither a strict leader nor follower there.
  World w;
  w.vehicles = {placed(1, 0, 700.0, 20.0)};
  w.reindex();
  InsertionSpec spec;
  spec.id = 2;
  spec.departLane = 0;
  spec.departPos = 700.0;
  spec.desired_speed = 20.0;
  CHECK(insert_vehicle(w, spec) == InsertResult::Deferred);
}

TEST_CASE("free departLane picks the least-occupied lane") {
  World w;
  w.vehicles = {placed(1, 0, 5000.0, 20.0), placed(2, 0, 6000.0, 20.0),
                placed(3, 1, 5000.0, 20.0), placed(4, 2, 5000.0, 20.0),
                placed(5, 2, 6000.0, 20.0), placed(6, 3, 5000.0, 20.0),
                placed(7, 4, 5000.0, 20.0), placed(8, 4, 6000.0, 20.0)};
  w.reindex();  // lane occupancy: 2,1,2,1,2 -> lane 1 wins (ties toward 0)
  InsertionSpec spec;
  spec.id = 9;
  spec.departPos = 100.0;
  spec.desired_speed = 20.0;
  REQUIRE(insert_vehicle(w, spec) == InsertResult::Inserted);
  CHECK(w.get(9).lane == 1);
}

TEST_CASE("ramp insertions start on the ramp edge at its origin") {
  World w;
  w.reindex();
  InsertionSpec spec;
  spec.id = 1;
  spec.departEdge = DepartEdge::Ramp;
  spec.desired_speed = 20.0;
  REQUIRE(insert_vehicle(w, spec) == InsertResult::Inserted);
  CHECK(w.get(1).on_ramp);
  CHECK(w.get(1).pos == doctest::Approx(700.0));  // merge start 1000 - 300
  // Entry speed is capped at the ramp speed limit.
  CHECK(w.get(1).speed == doctest::Approx(45.0 / 3.6));
}

TEST_CASE("insertion speed is capped by the leader's safe-speed envelope") {
  // A stopped queue just ahead: the newcomer cannot enter at full speed.
  World w;
  w.vehicles = {placed(1, 0, 80.0, 0.0)};
  w.reindex();
  InsertionSpec spec;
  spec.id = 2;
  spec.departLane = 0;
  spec.departPos = 0.0;
  spec.desired_speed = 22.0;
  REQUIRE(insert_vehicle(w, spec) == InsertResult::Inserted);
  CHECK(w.get(2).speed < 22.0);
}

TEST_CASE("insert_vehicle rejects malformed specs") {
  World w;
  w.reindex();
  InsertionSpec spec;
  spec.id = 1;
  spec.desired_speed = 20.0;
  spec.departLane = 7;
  CHECK_THROWS_AS(insert_vehicle(w, spec), ConfigError);
  spec.departLane = 0;
  spec.departPos = 30000.0;
  CHECK_THROWS_AS(insert_vehicle(w, spec), ConfigError);
}

TEST_CASE("no two vehicles overlap right after scheduled insertions") {
  ScenarioConfig cfg;
  cfg.seed = 5;
  Rng rng(cfg.seed, "demand");
  const auto schedule = spawn_schedule(cfg, rng);

  World w;
  w.net = build_network(cfg);
  w.reindex();
  for (const auto& spec : schedule) insert_vehicle(w, spec);  // defers allowed

  for (const VehicleState& a : w.vehicles) {
    const int lane = a.on_ramp ? kRampLane : a.lane;
    if (auto lead = w.leader_of(a.id, lane)) REQUIRE(lead->net_gap >= 0.0);
  }
}
