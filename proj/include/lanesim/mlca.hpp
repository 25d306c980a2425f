#ifndef LANESIM_MLCA_HPP
#define LANESIM_MLCA_HPP

#include <string>

#include "lanesim/policies.hpp"

namespace lanesim {

enum class MlcaState { Idle, Waiting, MovingLeft, MovingRight };

std::string to_string(MlcaState s);

/// The four Boolean guards: need to move, can wait, left side empty,
/// right side empty.
struct MlcaSignals {
  bool need = false;
  bool wait = false;
  bool left = false;
  bool right = false;
};

struct MlcaConfig {
  double g_block = 50.0;        // m, leader gap below which the lane blocks
  double v_deficit = 3.0 / 3.6; // m/s, leader speed shortfall triggering need
  double ttc_wait = 6.0;        // s, TTC above which waiting is acceptable
  double g_lead_min = 10.0;     // m
  double g_lag_min = 8.0;       // m
  double b_safe = 3.0;          // m/s², max imposed follower deceleration
  double cooldown = 10.0;       // s between completed lane changes
  double mandatory_remaining = 200.0;  // m of acceleration lane forcing a merge
};

/// One transition of the four-state machine. Priority is fixed: a cleared
/// need signal resets to Idle from any state; from Idle, waiting is preferred
/// over moving left, which is preferred over moving right.
MlcaState mlca_step(MlcaState state, MlcaSignals sig);

struct MlcaCheck {
  bool ok = true;
  std::string violated;  // label of the first failed assertion
};

/// Checks the four runtime assertions against the post-transition state.
MlcaCheck check_invariants(MlcaState state_after, MlcaSignals sig);

/// Traffic-state derivation of the N/W/L/R guards for a tracked AV.
/// For a ramp vehicle inside the acceleration lane, "left" means lane 0.
/// Throws LookupError for an unknown vehicle.
MlcaSignals derive_signals(const World& world, VehicleId vehicle,
                           const MlcaConfig& cfg,
                           const IdmParams& follower_model = {});

struct MlcaMemory {
  MlcaState state = MlcaState::Idle;
  double cooldown_until = -1.0;
};

/// Machine-readable record of an assertion violation (validation mode).
struct MlcaTraceRecord {
  double time = 0.0;
  VehicleId vehicle = 0;
  MlcaState state = MlcaState::Idle;
  MlcaSignals signals;
  std::string violated;
};

struct MlcaViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MlcaDecideOptions {
  bool validate = false;
  std::vector<MlcaTraceRecord>* trace = nullptr;  // violation sink
};

/// Runs derive_signals, mlca_step, and check_invariants, updating the
/// persistent state. In validation mode an assertion failure is recorded in
/// the trace sink and thrown as MlcaViolation.
LaneChangeDecision mlca_decide(const World& world, VehicleId vehicle,
                               MlcaMemory& mem, const MlcaConfig& cfg,
                               const MlcaDecideOptions& opts = {});

/// The engine calls this once a decided lane change has been applied; the
/// stored state snaps back to Idle and the cooldown starts.
void mlca_notify_change_applied(MlcaMemory& mem, double time,
                                const MlcaConfig& cfg);

}  // namespace lanesim

#endif  // LANESIM_MLCA_HPP
