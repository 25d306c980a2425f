#include "lanesim/mlca.hpp"

#include <cmath>
#include <limits>

namespace lanesim {

std::string to_string(MlcaState s) {
  switch (s) {
    case MlcaState::Idle: return "IDLE";
    case MlcaState::Waiting: return "WAITING";
    case MlcaState::MovingLeft: return "MOVING_LEFT";
    case MlcaState::MovingRight: return "MOVING_RIGHT";
  }
  return "?";
}

MlcaState mlca_step(MlcaState state, MlcaSignals sig) {
  if (!sig.need) return MlcaState::Idle;
  switch (state) {
    case MlcaState::Idle:
      if (sig.wait) return MlcaState::Waiting;
      if (sig.left) return MlcaState::MovingLeft;
      if (sig.right) return MlcaState::MovingRight;
      return MlcaState::Idle;
    case MlcaState::Waiting:
      if (sig.left || sig.right) return MlcaState::Idle;
      return MlcaState::Waiting;
    case MlcaState::MovingLeft:
      if (!sig.left) return MlcaState::Idle;
      return MlcaState::MovingLeft;
    case MlcaState::MovingRight:
      if (!sig.right) return MlcaState::Idle;
      return MlcaState::MovingRight;
  }
  return MlcaState::Idle;
}

MlcaCheck check_invariants(MlcaState state_after, MlcaSignals sig) {
  switch (state_after) {
    case MlcaState::Idle:
    case MlcaState::Waiting:
    case MlcaState::MovingLeft:
    case MlcaState::MovingRight:
      break;
    default:
      return {false, "state in {IDLE, WAITING, MOVING_LEFT, MOVING_RIGHT}"};
  }
  if (!sig.need && state_after != MlcaState::Idle)
    return {false, "!N => IDLE"};
  if (state_after == MlcaState::MovingLeft && !(sig.need && sig.left))
    return {false, "MOVING_LEFT => N && L"};
  if (state_after == MlcaState::MovingRight && !(sig.need && sig.right))
    return {false, "MOVING_RIGHT => N && R"};
  return {};
}

MlcaSignals derive_signals(const World& world, VehicleId vehicle,
                           const MlcaConfig& cfg,
                           const IdmParams& follower_model) {
  const VehicleState& self = world.get(vehicle);
  MlcaSignals sig;

  const bool in_accel_lane = self.on_ramp && self.pos >= world.net.ramp_merge_start;
  const double remaining = world.net.merge_end() - self.pos;
  const bool mandatory = in_accel_lane && remaining < cfg.mandatory_remaining;

  const int own_lane = self.on_ramp ? kRampLane : self.lane;
  const auto lead = world.leader_of(vehicle, own_lane);
  const bool blocked = lead && lead->net_gap < cfg.g_block &&
                       lead->speed < self.desired_speed - cfg.v_deficit;
  sig.need = blocked || mandatory;
  if (!sig.need) return sig;

  // Time-to-collision against the speed the vehicle wants to hold: a leader
  // it would reach within ttc_wait at its desired speed makes waiting
  // unattractive. (Using the instantaneous speed instead deadlocks: the
  // car-following model equalizes speeds, pushing the actual TTC to
  // infinity while the vehicle is still stuck behind the slow leader.)
  double ttc = std::numeric_limits<double>::infinity();
  if (lead && self.desired_speed > lead->speed)
    ttc = lead->net_gap / (self.desired_speed - lead->speed);
  sig.wait = !mandatory && ttc > cfg.ttc_wait;

  if (self.on_ramp) {
    // The only exit from the ramp is a leftward merge onto lane 0.
    sig.left = in_accel_lane &&
               gap_acceptance(world, vehicle, 0, cfg.g_lead_min, cfg.g_lag_min,
                              cfg.b_safe, follower_model);
    sig.right = false;
    return sig;
  }

  sig.left = self.lane + 1 < world.net.n_lanes &&
             gap_acceptance(world, vehicle, self.lane + 1, cfg.g_lead_min,
                            cfg.g_lag_min, cfg.b_safe, follower_model);
  sig.right = self.lane - 1 >= 0 &&
              gap_acceptance(world, vehicle, self.lane - 1, cfg.g_lead_min,
                             cfg.g_lag_min, cfg.b_safe, follower_model);
  return sig;
}

LaneChangeDecision mlca_decide(const World& world, VehicleId vehicle,
                               MlcaMemory& mem, const MlcaConfig& cfg,
                               const MlcaDecideOptions& opts) {
  MlcaSignals sig;
  if (world.time >= mem.cooldown_until)
    sig = derive_signals(world, vehicle, cfg);
  // During cooldown N is masked to false; the machine falls back to Idle.

  const MlcaState next = mlca_step(mem.state, sig);
  if (opts.validate) {
    const MlcaCheck check = check_invariants(next, sig);
    if (!check.ok) {
      if (opts.trace)
        opts.trace->push_back({world.time, vehicle, next, sig, check.violated});
      throw MlcaViolation("MLCA assertion violated: " + check.violated);
    }
  }
  mem.state = next;
  if (next == MlcaState::MovingLeft) return LaneChangeDecision::left();
  if (next == MlcaState::MovingRight) return LaneChangeDecision::right();
  return LaneChangeDecision::stay();
}

void mlca_notify_change_applied(MlcaMemory& mem, double time,
                                const MlcaConfig& cfg) {
  mem.state = MlcaState::Idle;
  mem.cooldown_until = time + cfg.cooldown;
}

}  // namespace lanesim
