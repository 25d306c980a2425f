#ifndef LANESIM_POLICIES_HPP
#define LANESIM_POLICIES_HPP

#include <optional>

#include "lanesim/core.hpp"
#include "lanesim/longitudinal.hpp"

namespace lanesim {

enum class LaneChangeKind { Stay, ChangeLeft, ChangeRight, LateralStep };

/// Lateral decision for one vehicle at one tick. lateral_speed is nonzero
/// only for LateralStep (Continuous policy); signed, +left.
struct LaneChangeDecision {
  LaneChangeKind kind = LaneChangeKind::Stay;
  double lateral_speed = 0.0;

  static LaneChangeDecision stay() { return {}; }
  static LaneChangeDecision left() { return {LaneChangeKind::ChangeLeft, 0.0}; }
  static LaneChangeDecision right() {
    return {LaneChangeKind::ChangeRight, 0.0};
  }
  static LaneChangeDecision lateral(double v) {
    return {LaneChangeKind::LateralStep, v};
  }
};

struct MobilParams {
  double politeness = 0.5;   // p
  double delta_a_th = 0.1;   // m/s², incentive threshold
  double b_safe = 4.0;       // m/s², new-follower deceleration bound
  double a_bias = 0.2;       // m/s², keep-right bias
  IdmParams idm;             // acceleration model used for all actors
};

struct Lc2017Params {
  MobilParams base;
  double anticipation_horizon = 5.0;  // s
  int commit_streak = 3;              // consecutive above-threshold ticks
  double cooldown = 5.0;              // s
};

struct IdmLcParams {
  MobilParams base{.politeness = 0.1};
  double cooldown = 5.0;  // s
};

struct ContinuousParams {
  MobilParams base;
  double lateral_speed = 0.8;  // m/s during a maneuver
};

/// True iff both physical gaps toward `target_lane` suffice and the
/// prospective new follower could accommodate the merge with IDM
/// deceleration >= -b_safe. Throws ConfigError for a non-adjacent lane.
bool gap_acceptance(const World& world, VehicleId vehicle, int target_lane,
                    double g_lead_min, double g_lag_min, double b_safe,
                    const IdmParams& follower_model = {});

LaneChangeDecision mobil_decide(const World& world, VehicleId vehicle,
                                const MobilParams& params);

struct Lc2017Memory {
  int left_streak = 0;
  int right_streak = 0;
  double cooldown_until = -1.0;
};

LaneChangeDecision lc2017_decide(const World& world, VehicleId vehicle,
                                 const Lc2017Params& params,
                                 Lc2017Memory& mem);

struct IdmLcMemory {
  double cooldown_until = -1.0;
};

LaneChangeDecision idmlc_decide(const World& world, VehicleId vehicle,
                                const IdmLcParams& params, IdmLcMemory& mem);

struct ContinuousMemory {
  int direction = 0;  // +1 moving left, -1 moving right, 0 centered
};

LaneChangeDecision continuous_decide(const World& world, VehicleId vehicle,
                                     const ContinuousParams& params,
                                     ContinuousMemory& mem);

/// Leader gaps saturate at `horizon`: lanes whose next vehicle is farther
/// than this all look equally open, so the tie rule keeps the vehicle in
/// place on an open road instead of chasing kilometre-scale differences.
LaneChangeDecision noalg_decide(const World& world, VehicleId vehicle,
                                double horizon = 600.0);

namespace detail {

/// Per-side MOBIL evaluation shared by mobil/lc2017/idmlc/continuous.
struct SideEval {
  bool feasible = false;   // physical gaps open and safety bound met
  double incentive = 0.0;  // m/s², bias already applied
  // Raw ingredients, exposed so policy variants (anticipation, headway
  // clauses) can build their own incentive terms.
  double v_self = 0.0;
  double a_self_now = 0.0;
  double a_self_new = 0.0;
  bool has_new_follower = false;
  double v_nf = 0.0;
  double a_nf_now = 0.0;
  double a_nf_new = 0.0;
  bool has_old_follower = false;
  double v_of = 0.0;
  double a_of_now = 0.0;
  double a_of_new = 0.0;
  double bias = 0.0;
};

SideEval mobil_side(const World& world, const VehicleState& self,
                    int target_lane, const MobilParams& params);

}  // namespace detail

}  // namespace lanesim

#endif  // LANESIM_POLICIES_HPP
