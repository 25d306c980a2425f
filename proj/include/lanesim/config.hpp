#ifndef LANESIM_CONFIG_HPP
#define LANESIM_CONFIG_HPP

#include <filesystem>
#include <map>
#include <string>

#include "lanesim/mlca.hpp"
#include "lanesim/policies.hpp"
#include "lanesim/scenario.hpp"

namespace lanesim {

struct EngineConfig {
  double dt = 0.25;                       // s
  double collision_gap_threshold = 0.95;   // m, net gap at/below which = crash
  double bg_min_gap = 2.0;                 // m, standstill buffer kept by background drivers
  double bg_accel = 2.6;                  // m/s², background max acceleration
  double idm_decel_floor = -9.0;          // m/s², physical braking limit
  bool validate = false;                  // MLCA assertion checking
  double positioning_spacing = 5.0;       // s between positioning moves
  double merge_g_lead = 10.0;             // engine-side ramp merge acceptance
  double merge_g_lag = 8.0;
  double merge_b_safe = 3.0;
};

/// Everything one iteration needs: demand, network, and per-policy parameter
/// blocks (loaded from the harness config file).
struct SimConfig {
  ScenarioConfig scenario;
  EngineConfig engine;
  IdmParams idm_av;        // tracked-AV car following
  KraussParams krauss_bg;  // background car following
  MobilParams mobil;
  Lc2017Params lc2017;
  IdmLcParams idmlc;
  ContinuousParams continuous;
  MlcaConfig mlca;
};

using IniSections = std::map<std::string, std::map<std::string, std::string>>;

/// key = value per line, [section] headers, '#' comments.
IniSections parse_ini(const std::filesystem::path& path);

/// Defaults overridden by the file's sections. Throws ConfigError on unknown
/// keys or unparsable values.
SimConfig load_config(const std::filesystem::path& path);

/// Applies parsed sections onto an existing config (exposed for tests).
void apply_sections(SimConfig& cfg, const IniSections& sections);

}  // namespace lanesim

#endif  // LANESIM_CONFIG_HPP
