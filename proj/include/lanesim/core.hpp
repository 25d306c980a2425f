#ifndef LANESIM_CORE_HPP
#define LANESIM_CORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lanesim {

using VehicleId = int;

/// Pseudo-lane index for the on-ramp edge. The ramp is a distinct edge that
/// runs parallel to lane 0 along the merge section; mainline lane queries
/// never see ramp vehicles and vice versa.
inline constexpr int kRampLane = -1;

/// Leaders/followers beyond this distance are ignored.
inline constexpr double kNeighborHorizon = 300.0;

struct LookupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class VehicleKind { TrackedAv, Background };

enum class PolicyId { Lc2017, Mobil, IdmLc, Continuous, Mlca, None };

std::string to_string(PolicyId p);
std::optional<PolicyId> policy_from_string(const std::string& s);

struct RoadNetwork {
  double mainline_length = 20000.0;  // m
  int n_lanes = 5;                   // lane 0 = rightmost
  double lane_width = 3.2;           // m
  double ramp_merge_start = 1000.0;  // m, where the acceleration lane begins
  double ramp_accel_len = 300.0;     // m
  double ramp_approach_len = 300.0;  // m of ramp before the acceleration lane
  double highway_speed_limit = 80.0 / 3.6;  // m/s
  double ramp_speed_limit = 45.0 / 3.6;     // m/s

  double merge_end() const { return ramp_merge_start + ramp_accel_len; }
  double ramp_origin() const { return ramp_merge_start - ramp_approach_len; }

  /// Throws ConfigError when the geometry invariants are violated.
  void validate() const;
};

struct VehicleState {
  VehicleId id = 0;
  int lane = 0;             // kRampLane while on_ramp
  double lat_offset = 0.0;  // m relative to lane center
  double pos = 0.0;         // front-bumper position, mainline coordinates
  double speed = 0.0;       // m/s, never negative
  double accel = 0.0;       // m/s², last applied
  double length = 5.0;      // m
  double desired_speed = 0.0;  // m/s
  double odometer = 0.0;       // m traveled since insertion
  VehicleKind kind = VehicleKind::Background;
  PolicyId policy = PolicyId::None;
  bool on_ramp = false;

  double rear() const { return pos - length; }
};

struct Neighbor {
  VehicleId id = 0;
  double net_gap = 0.0;  // leading rear − trailing front; negative = overlap
  double speed = 0.0;
};

struct NeighborView {
  std::optional<Neighbor> leader;
  std::optional<Neighbor> follower;
};

/// Flat world snapshot with a per-lane position index. The engine mutates
/// `vehicles` and calls reindex(); all queries are const afterwards.
class World {
 public:
  RoadNetwork net;
  double time = 0.0;
  std::vector<VehicleState> vehicles;

  void reindex();

  const VehicleState* find(VehicleId id) const;
  VehicleState* find(VehicleId id);
  /// Throws LookupError when absent.
  const VehicleState& get(VehicleId id) const;

  /// Nearest vehicle ahead of `vehicle` in `lane` within `horizon`.
  std::optional<Neighbor> leader_of(VehicleId vehicle, int lane,
                                    double horizon = kNeighborHorizon) const;
  std::optional<Neighbor> follower_of(VehicleId vehicle, int lane,
                                      double horizon = kNeighborHorizon) const;

  /// Probe variants for hypothetical placements (insertions, merge checks).
  /// `exclude` is skipped; pass a negative id to exclude nobody.
  std::optional<Neighbor> leader_at(double front_pos, int lane,
                                    VehicleId exclude = -1,
                                    double horizon = kNeighborHorizon) const;
  std::optional<Neighbor> follower_at(double front_pos, double length,
                                      int lane, VehicleId exclude = -1,
                                      double horizon = kNeighborHorizon) const;

  NeighborView neighbors(VehicleId vehicle, int lane,
                         double horizon = kNeighborHorizon) const;

  int count_in_lane(int lane) const;

 private:
  struct Entry {
    double pos;
    VehicleId id;
    bool operator<(const Entry& o) const {
      return pos < o.pos || (pos == o.pos && id < o.id);
    }
  };
  std::map<int, std::vector<Entry>> by_lane_;
  std::map<VehicleId, std::size_t> index_of_;
};

}  // namespace lanesim

#endif  // LANESIM_CORE_HPP
