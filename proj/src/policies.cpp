#include "lanesim/policies.hpp"

#include <algorithm>
#include <cmath>

namespace lanesim {

namespace {

// IDM acceleration with the actor's own desired speed; tolerates tiny or
// degenerate gaps so hypothetical MOBIL probes never throw.
double accel_of(const IdmParams& base, const VehicleState& actor,
                const std::optional<Neighbor>& lead) {
  IdmParams p = base;
  p.v0 = std::max(0.1, actor.desired_speed);
  if (!lead) return idm_accel(p, actor.speed, 0.0, 0.0, false);
  return idm_accel(p, actor.speed, std::max(lead->net_gap, 0.01), lead->speed,
                   true);
}

bool adjacent(const VehicleState& v, int target_lane) {
  return std::abs(target_lane - v.lane) == 1;
}

}  // namespace

bool gap_acceptance(const World& world, VehicleId vehicle, int target_lane,
                    double g_lead_min, double g_lag_min, double b_safe,
                    const IdmParams& follower_model) {
  const VehicleState& self = world.get(vehicle);
  if (!self.on_ramp && !adjacent(self, target_lane))
    throw ConfigError("gap_acceptance: target lane not adjacent");
  if (target_lane < 0 || target_lane >= world.net.n_lanes) return false;

  auto lead = world.leader_at(self.pos, target_lane, self.id);
  if (lead && lead->net_gap < g_lead_min) return false;
  auto lag = world.follower_at(self.pos, self.length, target_lane, self.id);
  if (!lag) return true;
  if (lag->net_gap < g_lag_min) return false;
  const VehicleState& follower = world.get(lag->id);
  const double required = accel_of(
      follower_model, follower, Neighbor{self.id, lag->net_gap, self.speed});
  return required >= -b_safe;
}

namespace detail {

SideEval mobil_side(const World& world, const VehicleState& self,
                    int target_lane, const MobilParams& params) {
  SideEval ev;
  if (self.on_ramp || target_lane < 0 || target_lane >= world.net.n_lanes)
    return ev;

  const auto own_lead = world.leader_of(self.id, self.lane);
  const auto new_lead = world.leader_at(self.pos, target_lane, self.id);
  const auto new_lag =
      world.follower_at(self.pos, self.length, target_lane, self.id);

  // Physically open gaps are a precondition for any evaluation.
  if ((new_lead && new_lead->net_gap <= 0.0) ||
      (new_lag && new_lag->net_gap <= 0.0))
    return ev;

  ev.v_self = self.speed;
  ev.a_self_now = accel_of(params.idm, self, own_lead);
  ev.a_self_new = accel_of(params.idm, self, new_lead);

  if (new_lag) {
    const VehicleState& nf = world.get(new_lag->id);
    ev.has_new_follower = true;
    ev.v_nf = nf.speed;
    ev.a_nf_now = accel_of(params.idm, nf, world.leader_of(nf.id, target_lane));
    ev.a_nf_new = accel_of(params.idm, nf,
                           Neighbor{self.id, new_lag->net_gap, self.speed});
    if (ev.a_nf_new < -params.b_safe) return ev;  // safety veto
  }

  if (auto old_lag = world.follower_of(self.id, self.lane)) {
    const VehicleState& of = world.get(old_lag->id);
    ev.has_old_follower = true;
    ev.v_of = of.speed;
    ev.a_of_now =
        accel_of(params.idm, of, Neighbor{self.id, old_lag->net_gap, self.speed});
    // After we leave, the old follower inherits our current leader.
    std::optional<Neighbor> inherited;
    if (own_lead) {
      const VehicleState& lc = world.get(own_lead->id);
      inherited = Neighbor{lc.id, lc.rear() - of.pos, lc.speed};
    }
    ev.a_of_new = accel_of(params.idm, of, inherited);
  }

  ev.bias = (target_lane < self.lane) ? params.a_bias : -params.a_bias;
  ev.feasible = true;
  ev.incentive = (ev.a_self_new - ev.a_self_now) +
                 params.politeness *
                     ((ev.a_nf_new - ev.a_nf_now) + (ev.a_of_new - ev.a_of_now)) +
                 ev.bias;
  return ev;
}

}  // namespace detail

namespace {

LaneChangeDecision pick_side(const detail::SideEval& left,
                             const detail::SideEval& right, double threshold) {
  const bool l = left.feasible && left.incentive > threshold;
  const bool r = right.feasible && right.incentive > threshold;
  if (l && r)
    return right.incentive >= left.incentive ? LaneChangeDecision::right()
                                             : LaneChangeDecision::left();
  if (l) return LaneChangeDecision::left();
  if (r) return LaneChangeDecision::right();
  return LaneChangeDecision::stay();
}

}  // namespace

LaneChangeDecision mobil_decide(const World& world, VehicleId vehicle,
                                const MobilParams& params) {
  const VehicleState& self = world.get(vehicle);
  if (self.on_ramp) return LaneChangeDecision::stay();
  const auto left = detail::mobil_side(world, self, self.lane + 1, params);
  const auto right = detail::mobil_side(world, self, self.lane - 1, params);
  return pick_side(left, right, params.delta_a_th);
}

namespace {

// Anticipated incentive: speed gain over the horizon instead of instantaneous
// acceleration, with speeds clamped to [0, actor desired speed].
double anticipated_incentive(const detail::SideEval& ev,
                             const MobilParams& params, double horizon,
                             double self_v0) {
  auto gain = [horizon](double v, double a_now, double a_new, double v0) {
    const double now = std::clamp(v + a_now * horizon, 0.0, v0);
    const double anticipated = std::clamp(v + a_new * horizon, 0.0, v0);
    return (anticipated - now) / horizon;
  };
  double inc = gain(ev.v_self, ev.a_self_now, ev.a_self_new, self_v0);
  double others = 0.0;
  if (ev.has_new_follower)
    others += gain(ev.v_nf, ev.a_nf_now, ev.a_nf_new, ev.v_nf + 20.0);
  if (ev.has_old_follower)
    others += gain(ev.v_of, ev.a_of_now, ev.a_of_new, ev.v_of + 20.0);
  return inc + params.politeness * others + ev.bias;
}

}  // namespace

LaneChangeDecision lc2017_decide(const World& world, VehicleId vehicle,
                                 const Lc2017Params& params,
                                 Lc2017Memory& mem) {
  const VehicleState& self = world.get(vehicle);
  if (self.on_ramp) return LaneChangeDecision::stay();
  if (world.time < mem.cooldown_until) {
    mem.left_streak = mem.right_streak = 0;
    return LaneChangeDecision::stay();
  }
  const MobilParams& base = params.base;
  auto left = detail::mobil_side(world, self, self.lane + 1, base);
  auto right = detail::mobil_side(world, self, self.lane - 1, base);
  const double v0 = std::max(0.1, self.desired_speed);
  const double inc_l =
      left.feasible
          ? anticipated_incentive(left, base, params.anticipation_horizon, v0)
          : 0.0;
  const double inc_r =
      right.feasible
          ? anticipated_incentive(right, base, params.anticipation_horizon, v0)
          : 0.0;

  mem.left_streak =
      (left.feasible && inc_l > base.delta_a_th) ? mem.left_streak + 1 : 0;
  mem.right_streak =
      (right.feasible && inc_r > base.delta_a_th) ? mem.right_streak + 1 : 0;

  const bool commit_l = mem.left_streak >= params.commit_streak;
  const bool commit_r = mem.right_streak >= params.commit_streak;
  if (!commit_l && !commit_r) return LaneChangeDecision::stay();
  mem.left_streak = mem.right_streak = 0;
  mem.cooldown_until = world.time + params.cooldown;
  if (commit_l && commit_r)
    return inc_r >= inc_l ? LaneChangeDecision::right()
                          : LaneChangeDecision::left();
  return commit_l ? LaneChangeDecision::left() : LaneChangeDecision::right();
}

LaneChangeDecision idmlc_decide(const World& world, VehicleId vehicle,
                                const IdmLcParams& params, IdmLcMemory& mem) {
  const VehicleState& self = world.get(vehicle);
  if (self.on_ramp) return LaneChangeDecision::stay();
  if (world.time < mem.cooldown_until) return LaneChangeDecision::stay();

  auto headway_ok = [&](int target_lane) {
    auto lead = world.leader_at(self.pos, target_lane, self.id);
    if (!lead) return true;
    if (self.speed <= 0.1) return lead->net_gap > 0.0;
    return lead->net_gap / self.speed > params.base.idm.T;
  };

  auto left = detail::mobil_side(world, self, self.lane + 1, params.base);
  auto right = detail::mobil_side(world, self, self.lane - 1, params.base);
  if (left.feasible && !headway_ok(self.lane + 1)) left.feasible = false;
  if (right.feasible && !headway_ok(self.lane - 1)) right.feasible = false;

  auto decision = pick_side(left, right, params.base.delta_a_th);
  if (decision.kind != LaneChangeKind::Stay)
    mem.cooldown_until = world.time + params.cooldown;
  return decision;
}

LaneChangeDecision continuous_decide(const World& world, VehicleId vehicle,
                                     const ContinuousParams& params,
                                     ContinuousMemory& mem) {
  const VehicleState& self = world.get(vehicle);
  if (self.on_ramp) return LaneChangeDecision::stay();

  if (mem.direction == 0) {
    const auto left = detail::mobil_side(world, self, self.lane + 1, params.base);
    const auto right =
        detail::mobil_side(world, self, self.lane - 1, params.base);
    const auto decision = pick_side(left, right, params.base.delta_a_th);
    if (decision.kind == LaneChangeKind::Stay)
      return LaneChangeDecision::lateral(0.0);
    mem.direction = decision.kind == LaneChangeKind::ChangeLeft ? 1 : -1;
    return LaneChangeDecision::lateral(mem.direction * params.lateral_speed);
  }

  const int d = mem.direction;
  if (self.lat_offset == 0.0) {
    // Centered again: return leg finished or the post-crossing leg closed out.
    mem.direction = 0;
    return LaneChangeDecision::lateral(0.0);
  }
  const bool returning = self.lat_offset * d < 0.0;
  if (!returning) {
    // Outbound leg in the original lane: abort if the desire collapsed.
    const auto side = detail::mobil_side(world, self, self.lane + d, params.base);
    if (!side.feasible || side.incentive <= params.base.delta_a_th) {
      mem.direction = -d;
      return LaneChangeDecision::lateral(-d * params.lateral_speed);
    }
  }
  return LaneChangeDecision::lateral(d * params.lateral_speed);
}

LaneChangeDecision noalg_decide(const World& world, VehicleId vehicle,
                                double horizon) {
  const VehicleState& self = world.get(vehicle);
  if (self.on_ramp) return LaneChangeDecision::stay();

  auto lead_gap = [&](int lane) {
    auto lead = world.leader_at(self.pos, lane, self.id, horizon);
    return lead ? std::min(lead->net_gap, horizon) : horizon;
  };
  auto open = [&](int lane) {
    if (lane < 0 || lane >= world.net.n_lanes) return false;
    auto lead = world.leader_at(self.pos, lane, self.id);
    if (lead && lead->net_gap <= 0.0) return false;
    auto lag = world.follower_at(self.pos, self.length, lane, self.id);
    return !(lag && lag->net_gap <= 0.0);
  };

  const double own = lead_gap(self.lane);
  const bool l_open = open(self.lane + 1);
  const bool r_open = open(self.lane - 1);
  const double l_gap = l_open ? lead_gap(self.lane + 1) : -1.0;
  const double r_gap = r_open ? lead_gap(self.lane - 1) : -1.0;

  const bool l_better = l_open && l_gap > own;
  const bool r_better = r_open && r_gap > own;
  if (l_better && r_better) {
    if (l_gap == r_gap) return LaneChangeDecision::stay();
    return l_gap > r_gap ? LaneChangeDecision::left()
                         : LaneChangeDecision::right();
  }
  if (l_better) return LaneChangeDecision::left();
  if (r_better) return LaneChangeDecision::right();
  return LaneChangeDecision::stay();
}

}  // namespace lanesim
