#include "lanesim/scenario.hpp"

#include <algorithm>
#include <cstdio>

#include "lanesim/longitudinal.hpp"

namespace lanesim {

RoadNetwork build_network(const ScenarioConfig& cfg) {
  RoadNetwork net = cfg.network;
  net.validate();
  return net;
}

std::vector<InsertionSpec> spawn_schedule(const ScenarioConfig& cfg, Rng& rng) {
  if (cfg.n_background < 0) throw ConfigError("n_background must be >= 0");
  if (cfg.n_tracked != 1 && cfg.n_tracked != 3 && cfg.n_tracked != 0)
    throw ConfigError("n_tracked must be 0, 1, or 3");
  if (cfg.ramp_share < 0.0 || cfg.ramp_share > 1.0)
    throw ConfigError("ramp_share must be in [0, 1]");
  const RoadNetwork net = build_network(cfg);

  std::vector<InsertionSpec> out;
  out.reserve(cfg.n_tracked + cfg.n_background);

  for (int i = 0; i < cfg.n_tracked; ++i) {
    InsertionSpec spec;
    spec.id = i;
    spec.departEdge = DepartEdge::Ramp;
    spec.departTime = cfg.av_depart_time + i * cfg.av_spacing;
    spec.kind = VehicleKind::TrackedAv;
    spec.policy = cfg.tracked_policy;
    spec.desired_speed = net.highway_speed_limit;
    spec.target_lane = net.n_lanes / 2;  // middle lane
    out.push_back(spec);
  }

  // Background demand: an initial population seeded along the corridor so the
  // road is not empty when the tracked vehicles enter, plus a trickle over
  // the demand window that replaces vehicles as they exit downstream.
  const int n_seed = static_cast<int>(cfg.n_background * cfg.seed_fraction);
  const int n_trickle = cfg.n_background - n_seed;
  const double window = cfg.sim_horizon * cfg.demand_window;
  const double mean_gap = n_trickle > 0 ? window / n_trickle : window;
  double t = 0.0;
  for (int i = 0; i < cfg.n_background; ++i) {
    InsertionSpec spec;
    spec.id = cfg.n_tracked + i;
    spec.kind = VehicleKind::Background;
    spec.policy = PolicyId::None;
    if (rng.uniform01() < cfg.truck_share) {
      spec.desired_speed = rng.uniform(cfg.truck_speed_min, cfg.truck_speed_max);
      spec.length = cfg.truck_length;
    } else {
      spec.desired_speed = rng.uniform(cfg.bg_speed_min, cfg.bg_speed_max);
    }
    if (i < n_seed) {
      spec.departTime = 0.0;
      spec.departEdge = DepartEdge::Mainline;
      spec.departLane = std::nullopt;  // "free"
      spec.departPos = rng.uniform(0.0, 0.95 * net.mainline_length);
    } else {
      t += rng.exponential(mean_gap);
      spec.departTime = t;
      if (rng.uniform01() < cfg.ramp_share) {
        spec.departEdge = DepartEdge::Ramp;
      } else {
        spec.departEdge = DepartEdge::Mainline;
        spec.departLane = std::nullopt;  // "free"
        spec.departPos = rng.uniform(0.0, 0.95 * net.mainline_length);
      }
    }
    out.push_back(spec);
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const InsertionSpec& a, const InsertionSpec& b) {
                     if (a.departTime != b.departTime)
                       return a.departTime < b.departTime;
                     return a.id < b.id;
                   });
  return out;
}

std::string serialize_schedule(const std::vector<InsertionSpec>& schedule) {
  std::string s;
  char buf[256];
  for (const auto& spec : schedule) {
    std::snprintf(
        buf, sizeof(buf), "%d %s %.6f %s %.6f %.3f %s %s %d\n", spec.id,
        spec.departEdge == DepartEdge::Ramp ? "ramp" : "mainline",
        spec.departTime,
        spec.departLane ? std::to_string(*spec.departLane).c_str() : "free",
        spec.departPos.value_or(-1.0), spec.desired_speed,
        spec.kind == VehicleKind::TrackedAv ? "tracked" : "background",
        to_string(spec.policy).c_str(), spec.target_lane.value_or(-1));
    s += buf;
  }
  return s;
}

namespace {

bool insertion_gap_safe(const World& world, int lane, double pos, double length,
                        double speed) {
  const IdmParams idm;  // s0 + v·T rule uses the reference defaults
  // Probe ahead from the rear bumper so a vehicle already occupying the
  // insertion point (front bumper anywhere in our footprint) is seen and
  // rejected rather than slipping between the leader and follower queries.
  if (auto lead = world.leader_at(pos - length, lane))
    if (lead->net_gap - length < idm.s0 + speed * idm.T) return false;
  if (auto foll = world.follower_at(pos, length, lane))
    if (foll->net_gap < idm.s0 + foll->speed * idm.T) return false;
  return true;
}

}  // namespace

InsertResult insert_vehicle(World& world, const InsertionSpec& spec) {
  const RoadNetwork& net = world.net;
  const bool ramp = spec.departEdge == DepartEdge::Ramp;

  double pos;
  if (spec.departPos) {
    pos = *spec.departPos;
    const double edge_len = ramp ? net.merge_end() - net.ramp_origin()
                                 : net.mainline_length;
    if (pos < 0.0 || pos > edge_len)
      throw ConfigError("departPos outside the depart edge");
    if (ramp) pos += net.ramp_origin();
  } else {
    pos = ramp ? net.ramp_origin() : 0.0;  // "base"
  }

  const double limit = ramp ? net.ramp_speed_limit : net.highway_speed_limit;
  const double speed = std::min(spec.desired_speed, limit);
  // Entering faster than the Krauss safe speed for the actual gap would put
  // the newcomer on a collision course its bounded deceleration cannot
  // resolve (e.g. joining the ramp behind a stopped merge queue).
  const KraussParams krauss;
  auto capped_speed = [&](int lane) {
    if (auto lead = world.leader_at(pos, lane))
      return std::min(speed,
                      krauss_safe_speed(krauss, speed, lead->speed,
                                        lead->net_gap));
    return speed;
  };

  std::vector<int> candidate_lanes;
  if (ramp) {
    candidate_lanes.push_back(kRampLane);
  } else if (spec.departLane) {
    if (*spec.departLane < 0 || *spec.departLane >= net.n_lanes)
      throw ConfigError("departLane invalid for the mainline");
    candidate_lanes.push_back(*spec.departLane);
  } else {
    // "free": least-occupied lane first, ties toward lane 0.
    candidate_lanes.resize(net.n_lanes);
    for (int l = 0; l < net.n_lanes; ++l) candidate_lanes[l] = l;
    std::stable_sort(candidate_lanes.begin(), candidate_lanes.end(),
                     [&](int a, int b) {
                       return world.count_in_lane(a) < world.count_in_lane(b);
                     });
  }

  for (int lane : candidate_lanes) {
    const double lane_speed = capped_speed(lane);
    if (!insertion_gap_safe(world, lane, pos, spec.length, lane_speed))
      continue;
    VehicleState v;
    v.id = spec.id;
    v.on_ramp = ramp;
    v.lane = ramp ? 0 : lane;
    v.lat_offset = spec.departPosLat;
    v.pos = pos;
    v.speed = lane_speed;
    v.length = spec.length;
    v.desired_speed = spec.desired_speed;
    v.kind = spec.kind;
    v.policy = spec.policy;
    world.vehicles.push_back(v);
    world.reindex();
    return InsertResult::Inserted;
  }
  return InsertResult::Deferred;
}

}  // namespace lanesim
