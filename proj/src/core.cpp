#include "lanesim/core.hpp"

#include <limits>
#include <algorithm>

namespace lanesim {

std::string to_string(PolicyId p) {
  switch (p) {
    case PolicyId::Lc2017: return "LC2017";
    case PolicyId::Mobil: return "MOBIL";
    case PolicyId::IdmLc: return "IDM_LC";
    case PolicyId::Continuous: return "CONTINUOUS";
    case PolicyId::Mlca: return "MLCA";
    case PolicyId::None: return "NONE";
  }
  return "?";
}

std::optional<PolicyId> policy_from_string(const std::string& s) {
  if (s == "LC2017") return PolicyId::Lc2017;
  if (s == "MOBIL") return PolicyId::Mobil;
  if (s == "IDM_LC") return PolicyId::IdmLc;
  if (s == "CONTINUOUS") return PolicyId::Continuous;
  if (s == "MLCA") return PolicyId::Mlca;
  if (s == "NONE") return PolicyId::None;
  return std::nullopt;
}

void RoadNetwork::validate() const {
  if (mainline_length <= 0.0) throw ConfigError("mainline_length must be > 0");
  if (n_lanes < 1) throw ConfigError("n_lanes must be >= 1");
  if (lane_width <= 0.0) throw ConfigError("lane_width must be > 0");
  if (ramp_merge_start + ramp_accel_len >= mainline_length)
    throw ConfigError("ramp merge section exceeds mainline length");
  if (ramp_merge_start <= ramp_approach_len)
    throw ConfigError("ramp approach starts before the mainline origin");
  if (ramp_speed_limit >= highway_speed_limit)
    throw ConfigError("ramp_speed_limit must be below highway_speed_limit");
}

void World::reindex() {
  by_lane_.clear();
  index_of_.clear();
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const VehicleState& v = vehicles[i];
    const int lane = v.on_ramp ? kRampLane : v.lane;
    by_lane_[lane].push_back({v.pos, v.id});
    index_of_[v.id] = i;
  }
  for (auto& [lane, entries] : by_lane_) std::sort(entries.begin(), entries.end());
}

const VehicleState* World::find(VehicleId id) const {
  auto it = index_of_.find(id);
  return it == index_of_.end() ? nullptr : &vehicles[it->second];
}

VehicleState* World::find(VehicleId id) {
  auto it = index_of_.find(id);
  return it == index_of_.end() ? nullptr : &vehicles[it->second];
}

const VehicleState& World::get(VehicleId id) const {
  const VehicleState* v = find(id);
  if (!v) throw LookupError("unknown vehicle id " + std::to_string(id));
  return *v;
}

std::optional<Neighbor> World::leader_of(VehicleId vehicle, int lane,
                                         double horizon) const {
  const VehicleState& v = get(vehicle);
  return leader_at(v.pos, lane, vehicle, horizon);
}

std::optional<Neighbor> World::follower_of(VehicleId vehicle, int lane,
                                           double horizon) const {
  const VehicleState& v = get(vehicle);
  return follower_at(v.pos, v.length, lane, vehicle, horizon);
}

std::optional<Neighbor> World::leader_at(double front_pos, int lane,
                                         VehicleId exclude,
                                         double horizon) const {
  auto lit = by_lane_.find(lane);
  if (lit == by_lane_.end()) return std::nullopt;
  const auto& entries = lit->second;
  auto it = std::upper_bound(entries.begin(), entries.end(),
                             Entry{front_pos, std::numeric_limits<int>::max()});
  while (it != entries.end() && it->id == exclude) ++it;
  if (it == entries.end()) return std::nullopt;
  const VehicleState& lead = vehicles[index_of_.at(it->id)];
  const double gap = lead.rear() - front_pos;
  if (lead.pos - front_pos > horizon) return std::nullopt;
  return Neighbor{lead.id, gap, lead.speed};
}

std::optional<Neighbor> World::follower_at(double front_pos, double length,
                                           int lane, VehicleId exclude,
                                           double horizon) const {
  auto lit = by_lane_.find(lane);
  if (lit == by_lane_.end()) return std::nullopt;
  const auto& entries = lit->second;
  auto it = std::lower_bound(entries.begin(), entries.end(),
                             Entry{front_pos, std::numeric_limits<int>::min()});
  while (it != entries.begin()) {
    --it;
    if (it->id == exclude) continue;
    const VehicleState& foll = vehicles[index_of_.at(it->id)];
    if (front_pos - foll.pos > horizon) return std::nullopt;
    return Neighbor{foll.id, (front_pos - length) - foll.pos, foll.speed};
  }
  return std::nullopt;
}

NeighborView World::neighbors(VehicleId vehicle, int lane,
                              double horizon) const {
  return NeighborView{leader_of(vehicle, lane, horizon),
                      follower_of(vehicle, lane, horizon)};
}

int World::count_in_lane(int lane) const {
  auto it = by_lane_.find(lane);
  return it == by_lane_.end() ? 0 : static_cast<int>(it->second.size());
}

}  // namespace lanesim
