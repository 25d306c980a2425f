#include "lanesim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <functional>
#include <set>

#include "lanesim/scenario.hpp"

namespace lanesim {

namespace {

char reason_code(LaneChangeReason r) {
  return r == LaneChangeReason::Positioning ? 'P' : 'D';
}

}  // namespace

std::string IterationLog::serialize() const {
  std::string s;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "seed %llu\n",
                static_cast<unsigned long long>(seed));
  s += buf;
  s += "tracked";
  for (VehicleId id : tracked_ids) s += " " + std::to_string(id);
  s += "\n";
  for (const auto& e : lane_changes) {
    std::snprintf(buf, sizeof(buf), "LC %.3f %d %d %d %.3f %.3f %c\n", e.time,
                  e.vehicle, e.from_lane, e.to_lane, e.pos, e.odometer,
                  reason_code(e.reason));
    s += buf;
  }
  for (const auto& e : merges) {
    std::snprintf(buf, sizeof(buf), "MG %.3f %d %.3f\n", e.time, e.vehicle,
                  e.pos);
    s += buf;
  }
  for (const auto& e : collisions) {
    std::snprintf(buf, sizeof(buf), "CO %.3f %d %d %d %.3f %s\n", e.time,
                  e.rear, e.front, e.lane, e.pos,
                  e.kind == CollisionKind::RearEnd ? "REAR_END" : "SIDE_SWIPE");
    s += buf;
  }
  for (const auto& v : mlca_violations) {
    std::snprintf(buf, sizeof(buf), "VIOL %.3f %d %s %d%d%d%d %s\n", v.time,
                  v.vehicle, to_string(v.state).c_str(), v.signals.need,
                  v.signals.wait, v.signals.left, v.signals.right,
                  v.violated.c_str());
    s += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "END %s inserted=%d arrived=%d removed=%d deferred=%d steps=%zu\n",
                termination.c_str(), inserted, arrived, removed_by_collision,
                deferred_insertions, vehicle_counts.size());
  s += buf;
  return s;
}

std::vector<CollisionEvent> detect_collisions(const World& world,
                                              std::span<const LaneEntry> entries,
                                              double gap_threshold) {
  std::vector<CollisionEvent> out;
  std::set<std::pair<VehicleId, VehicleId>> flagged;

  for (const LaneEntry& entry : entries) {
    const VehicleState* v = world.find(entry.vehicle);
    if (!v || v->on_ramp || v->lane != entry.lane) continue;
    if (auto lead = world.leader_at(v->pos, entry.lane, v->id);
        lead && lead->net_gap <= 0.0 &&
        flagged.insert({v->id, lead->id}).second) {
      out.push_back({world.time, v->id, lead->id, entry.lane,
                     CollisionKind::SideSwipe, v->pos});
    }
    if (auto lag = world.follower_at(v->pos, v->length, entry.lane, v->id);
        lag && lag->net_gap <= 0.0 && flagged.insert({lag->id, v->id}).second) {
      out.push_back({world.time, lag->id, v->id, entry.lane,
                     CollisionKind::SideSwipe, v->pos});
    }
  }

  // Rear-end scan: adjacent pairs per lane (ramp included).
  std::map<int, std::vector<const VehicleState*>> lanes;
  for (const VehicleState& v : world.vehicles)
    lanes[v.on_ramp ? kRampLane : v.lane].push_back(&v);
  for (auto& [lane, vs] : lanes) {
    std::sort(vs.begin(), vs.end(),
              [](const VehicleState* a, const VehicleState* b) {
                return a->pos < b->pos || (a->pos == b->pos && a->id < b->id);
              });
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      const VehicleState* trail = vs[i];
      const VehicleState* lead = vs[i + 1];
      const double gap = lead->rear() - trail->pos;
      if (gap <= gap_threshold && !flagged.count({trail->id, lead->id})) {
        out.push_back({world.time, trail->id, lead->id, lane,
                       CollisionKind::RearEnd, lead->pos});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const CollisionEvent& a,
                                       const CollisionEvent& b) {
    return std::tie(a.rear, a.front) < std::tie(b.rear, b.front);
  });
  return out;
}

namespace {

struct PolicyMemory {
  MlcaMemory mlca;
  Lc2017Memory lc2017;
  IdmLcMemory idmlc;
  ContinuousMemory cont;
  double next_positioning = 0.0;
  bool positioning_done = false;
  int target_lane = -1;
};

double clamped_idm(const IdmParams& p, double v, double gap, double v_lead,
                   bool has_leader, double floor) {
  const double a =
      idm_accel(p, v, has_leader ? std::max(gap, 0.01) : 0.0, v_lead, has_leader);
  return std::max(a, floor);
}

/// Longitudinal acceleration for one vehicle from the step snapshot.
/// Consumes one dawdle draw per background vehicle.
double longitudinal_accel(const World& world, const VehicleState& v,
                          const SimConfig& cfg, Rng& dawdle) {
  const RoadNetwork& net = world.net;
  const int lane = v.on_ramp ? kRampLane : v.lane;
  const auto lead = world.leader_of(v.id, lane);
  const double dt = cfg.engine.dt;

  if (v.kind == VehicleKind::TrackedAv) {
    IdmParams p = cfg.idm_av;
    p.v0 = std::max(
        0.1, v.on_ramp ? std::min(v.desired_speed, net.ramp_speed_limit)
                       : v.desired_speed);
    double a = clamped_idm(p, v.speed, lead ? lead->net_gap : 0.0,
                           lead ? lead->speed : 0.0, lead.has_value(),
                           cfg.engine.idm_decel_floor);
    if (v.on_ramp) {
      // Virtual stopped wall at the end of the acceleration lane.
      const double wall_gap = net.merge_end() - v.pos;
      a = std::min(a, clamped_idm(p, v.speed, wall_gap, 0.0, true,
                                  cfg.engine.idm_decel_floor));
    }
    return a;
  }

  // Background: Krauß safe speed with bounded acceleration/deceleration and
  // stochastic dawdling.
  const KraussParams& kp = cfg.krauss_bg;
  const double v_des =
      v.on_ramp ? std::min(v.desired_speed, net.ramp_speed_limit)
                : v.desired_speed;
  double target = std::min(v.speed + cfg.engine.bg_accel * dt, v_des);
  // Drivers hold a standstill buffer in front of them; the safe-speed gap is
  // measured from that buffer, so jammed queues settle at bg_min_gap rather
  // than creeping into contact (which would read as a collision under the
  // near-contact criterion).
  if (lead)
    target = std::min(
        target,
        krauss_safe_speed(kp, v.speed, lead->speed,
                          std::max(0.0, lead->net_gap -
                                            cfg.engine.bg_min_gap)));
  const double u = dawdle.uniform01();
  target -= kp.sigma * cfg.engine.bg_accel * dt * u;
  // Deceleration bounded by b: reaction-limited braking is what lets unsafe
  // cut-ins in front of a background follower end in a rear-end collision.
  double v_next = std::max(target, v.speed - kp.b * dt);
  if (v.on_ramp) {
    const double wall_gap =
        std::max(0.0, net.merge_end() - v.pos - cfg.engine.bg_min_gap);
    v_next = std::min(v_next, krauss_safe_speed(kp, v.speed, 0.0, wall_gap));
  }
  v_next = std::max(0.0, v_next);
  return (v_next - v.speed) / dt;
}

struct Planned {
  VehicleId id = 0;
  LaneChangeDecision decision;
  LaneChangeReason reason = LaneChangeReason::Discretionary;
  double accel = 0.0;
};

LaneChangeDecision engine_merge_decision(const World& world,
                                         const VehicleState& v,
                                         const SimConfig& cfg) {
  if (v.pos < world.net.ramp_merge_start) return LaneChangeDecision::stay();
  if (gap_acceptance(world, v.id, 0, cfg.engine.merge_g_lead,
                     cfg.engine.merge_g_lag, cfg.engine.merge_b_safe,
                     cfg.idm_av))
    return LaneChangeDecision::left();
  return LaneChangeDecision::stay();
}

LaneChangeDecision decide_lateral(const World& world, const VehicleState& v,
                                  const SimConfig& cfg, PolicyMemory& mem,
                                  IterationLog& log, Planned& plan) {
  if (v.kind == VehicleKind::Background)
    return v.on_ramp ? engine_merge_decision(world, v, cfg)
                     : LaneChangeDecision::stay();

  if (v.policy == PolicyId::Mlca) {
    MlcaDecideOptions opts;
    opts.validate = cfg.engine.validate;
    opts.trace = &log.mlca_violations;
    if (!v.on_ramp && !mem.positioning_done) {
      // Positioning toward the target lane happens below; MLCA takes over
      // once the vehicle is centered there.
    } else {
      return mlca_decide(world, v.id, mem.mlca, cfg.mlca, opts);
    }
  } else if (v.on_ramp) {
    return engine_merge_decision(world, v, cfg);
  }

  // Engine-side positioning toward the scheduled target lane applies to the
  // MLCA vehicle only: its state machine has no discretionary pull toward
  // faster lanes, so the engine walks it to the middle lane first. The other
  // policies have their own lane preferences (e.g. MOBIL's keep-right bias)
  // and govern themselves from the merge onward.
  if (v.policy != PolicyId::Mlca) mem.positioning_done = true;
  if (!mem.positioning_done) {
    if (mem.target_lane < 0 || v.lane == mem.target_lane) {
      mem.positioning_done = true;
    } else {
      plan.reason = LaneChangeReason::Positioning;
      if (world.time < mem.next_positioning) return LaneChangeDecision::stay();
      const int dir = mem.target_lane > v.lane ? 1 : -1;
      if (gap_acceptance(world, v.id, v.lane + dir, cfg.engine.merge_g_lead,
                         cfg.engine.merge_g_lag, cfg.engine.merge_b_safe,
                         cfg.idm_av))
        return dir > 0 ? LaneChangeDecision::left()
                       : LaneChangeDecision::right();
      return LaneChangeDecision::stay();
    }
  }

  plan.reason = LaneChangeReason::Discretionary;
  switch (v.policy) {
    case PolicyId::Mlca: {
      MlcaDecideOptions opts;
      opts.validate = cfg.engine.validate;
      opts.trace = &log.mlca_violations;
      return mlca_decide(world, v.id, mem.mlca, cfg.mlca, opts);
    }
    case PolicyId::Mobil:
      return mobil_decide(world, v.id, cfg.mobil);
    case PolicyId::Lc2017:
      return lc2017_decide(world, v.id, cfg.lc2017, mem.lc2017);
    case PolicyId::IdmLc:
      return idmlc_decide(world, v.id, cfg.idmlc, mem.idmlc);
    case PolicyId::Continuous:
      return continuous_decide(world, v.id, cfg.continuous, mem.cont);
    case PolicyId::None:
      return noalg_decide(world, v.id);
  }
  return LaneChangeDecision::stay();
}

}  // namespace

IterationLog run_iteration(const SimConfig& base_cfg, PolicyId policy,
                           uint64_t seed, const StepObserver& observer) {
  SimConfig cfg = base_cfg;
  cfg.scenario.seed = seed;
  cfg.scenario.tracked_policy = policy;
  const RoadNetwork net = build_network(cfg.scenario);
  if (cfg.engine.dt <= 0.0) throw ConfigError("dt must be > 0");

  Rng demand_rng(seed, "demand");
  Rng dawdle_rng(seed, "dawdle");
  const std::vector<InsertionSpec> schedule =
      spawn_schedule(cfg.scenario, demand_rng);

  IterationLog log;
  log.seed = seed;
  for (const auto& spec : schedule)
    if (spec.kind == VehicleKind::TrackedAv) log.tracked_ids.push_back(spec.id);
  std::sort(log.tracked_ids.begin(), log.tracked_ids.end());

  World world;
  world.net = net;
  world.reindex();

  std::map<VehicleId, PolicyMemory> memory;
  std::size_t next_spec = 0;
  std::vector<InsertionSpec> deferred;
  std::set<VehicleId> tracked_done;

  const double dt = cfg.engine.dt;
  const int max_steps =
      static_cast<int>(std::ceil(cfg.scenario.sim_horizon / dt));
  log.termination = "horizon";

  std::vector<Planned> plans;
  std::vector<LaneEntry> entries;

  for (int step = 0; step < max_steps; ++step) {
    const double time = step * dt;
    world.time = time;

    // (1) insert due vehicles; earlier deferrals retry first.
    std::vector<InsertionSpec> attempts = std::move(deferred);
    deferred.clear();
    while (next_spec < schedule.size() &&
           schedule[next_spec].departTime <= time)
      attempts.push_back(schedule[next_spec++]);
    for (const auto& spec : attempts) {
      if (insert_vehicle(world, spec) == InsertResult::Inserted) {
        ++log.inserted;
        PolicyMemory& mem = memory[spec.id];
        mem.target_lane = spec.target_lane.value_or(-1);
        if (spec.departEdge == DepartEdge::Mainline) mem.positioning_done = true;
      } else {
        ++log.deferred_insertions;
        deferred.push_back(spec);
      }
    }

    // (2) frozen snapshot for this step.
    world.reindex();

    // (3) lateral decisions and (5) longitudinal accelerations, both against
    // the snapshot, in ascending VehicleId order.
    plans.clear();
    for (const VehicleState& v : world.vehicles) plans.push_back({v.id});
    std::sort(plans.begin(), plans.end(),
              [](const Planned& a, const Planned& b) { return a.id < b.id; });
    for (Planned& plan : plans) {
      const VehicleState& v = world.get(plan.id);
      plan.decision = decide_lateral(world, v, cfg, memory[plan.id], log, plan);
      plan.accel = longitudinal_accel(world, v, cfg, dawdle_rng);
    }

    // (4) apply discrete lane changes and merges.
    entries.clear();
    for (const Planned& plan : plans) {
      if (plan.decision.kind != LaneChangeKind::ChangeLeft &&
          plan.decision.kind != LaneChangeKind::ChangeRight)
        continue;
      VehicleState* v = world.find(plan.id);
      PolicyMemory& mem = memory[plan.id];
      if (v->on_ramp) {
        v->on_ramp = false;
        v->lane = 0;
        v->lat_offset = 0.0;
        log.merges.push_back({time, v->id, v->pos});
        entries.push_back({v->id, 0});
        if (v->policy == PolicyId::Mlca && v->kind == VehicleKind::TrackedAv)
          mlca_notify_change_applied(mem.mlca, time, cfg.mlca);
        continue;
      }
      const int dir = plan.decision.kind == LaneChangeKind::ChangeLeft ? 1 : -1;
      const int to = v->lane + dir;
      if (to < 0 || to >= net.n_lanes) continue;
      log.lane_changes.push_back(
          {time, v->id, v->lane, to, v->pos, v->odometer, plan.reason});
      v->lane = to;
      v->lat_offset = 0.0;
      entries.push_back({v->id, to});
      if (v->policy == PolicyId::Mlca && v->kind == VehicleKind::TrackedAv)
        mlca_notify_change_applied(mem.mlca, time, cfg.mlca);
      if (plan.reason == LaneChangeReason::Positioning)
        mem.next_positioning = time + cfg.engine.positioning_spacing;
    }

    // (6) integrate longitudinally and laterally.
    for (const Planned& plan : plans) {
      VehicleState* v = world.find(plan.id);
      if (!v) continue;
      const Kinematics kin = integrate(v->speed, plan.accel, dt);
      v->accel = plan.accel;
      v->speed = kin.new_speed;
      v->pos += kin.delta_pos;
      v->odometer += kin.delta_pos;

      if (plan.decision.kind == LaneChangeKind::LateralStep &&
          plan.decision.lateral_speed != 0.0) {
        const double prev = v->lat_offset;
        v->lat_offset += plan.decision.lateral_speed * dt;
        const double half = net.lane_width / 2.0;
        if (std::abs(v->lat_offset) >= half) {
          const int dir = v->lat_offset > 0.0 ? 1 : -1;
          const int to = v->lane + dir;
          if (to >= 0 && to < net.n_lanes) {
            log.lane_changes.push_back({time, v->id, v->lane, to, v->pos,
                                        v->odometer,
                                        LaneChangeReason::Discretionary});
            v->lane = to;
            v->lat_offset -= dir * net.lane_width;
            entries.push_back({v->id, to});
          } else {
            v->lat_offset = dir * half;  // pinned at the road edge
          }
        } else if (prev != 0.0 && (prev > 0.0) != (v->lat_offset > 0.0)) {
          v->lat_offset = 0.0;  // return leg crossed the lane center
        }
      }
    }

    // (7) collision detection and removal.
    world.reindex();
    const auto collisions =
        detect_collisions(world, entries, cfg.engine.collision_gap_threshold);
    std::set<VehicleId> to_remove;
    for (const CollisionEvent& c : collisions) {
      log.collisions.push_back(c);
      if (c.kind == CollisionKind::RearEnd) {
        to_remove.insert(c.rear);
      } else {
        // Side swipe: the lane-changer is removed.
        for (const LaneEntry& e : entries)
          if (e.vehicle == c.rear || e.vehicle == c.front)
            to_remove.insert(e.vehicle);
      }
    }
    if (!to_remove.empty()) {
      log.removed_by_collision += static_cast<int>(to_remove.size());
      for (VehicleId id : to_remove)
        if (const VehicleState* v = world.find(id);
            v && v->kind == VehicleKind::TrackedAv)
          tracked_done.insert(id);
      std::erase_if(world.vehicles, [&](const VehicleState& v) {
        return to_remove.count(v.id) > 0;
      });
    }

    // (8) arrivals.
    for (const VehicleState& v : world.vehicles) {
      if (v.pos >= net.mainline_length) {
        ++log.arrived;
        if (v.kind == VehicleKind::TrackedAv) tracked_done.insert(v.id);
      }
    }
    std::erase_if(world.vehicles, [&](const VehicleState& v) {
      return v.pos >= net.mainline_length;
    });
    world.reindex();

    log.vehicle_counts.push_back(static_cast<int>(world.vehicles.size()));
    if (observer) observer(world, log);

    if (!log.tracked_ids.empty() &&
        tracked_done.size() == log.tracked_ids.size()) {
      log.termination = "tracked_arrived";
      break;
    }
  }
  return log;
}

}  // namespace lanesim
