#include "lanesim/config.hpp"

#include <fstream>
#include <functional>

namespace lanesim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

IniSections parse_ini(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  IniSections sections;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(lineno));
    sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return sections;
}

namespace {

struct Binder {
  std::map<std::string, std::function<void(const std::string&)>> setters;

  void number(const std::string& key, double* target) {
    setters[key] = [target, key](const std::string& v) {
      try {
        *target = std::stod(v);
      } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": " + v);
      }
    };
  }
  void integer(const std::string& key, int* target) {
    setters[key] = [target, key](const std::string& v) {
      try {
        *target = std::stoi(v);
      } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": " + v);
      }
    };
  }
  void seed(const std::string& key, uint64_t* target) {
    setters[key] = [target, key](const std::string& v) {
      try {
        *target = std::stoull(v);
      } catch (const std::exception&) {
        throw ConfigError("bad seed value for " + key + ": " + v);
      }
    };
  }
  void policy(const std::string& key, PolicyId* target) {
    setters[key] = [target, key](const std::string& v) {
      auto p = policy_from_string(v);
      if (!p) throw ConfigError("unknown policy for " + key + ": " + v);
      *target = *p;
    };
  }
};

void bind_mobil(Binder& b, MobilParams* m) {
  b.number("politeness", &m->politeness);
  b.number("delta_a_th", &m->delta_a_th);
  b.number("b_safe", &m->b_safe);
  b.number("a_bias", &m->a_bias);
  b.number("idm_a_max", &m->idm.a_max);
  b.number("idm_b_comf", &m->idm.b_comf);
  b.number("idm_T", &m->idm.T);
  b.number("idm_s0", &m->idm.s0);
  b.number("idm_delta", &m->idm.delta);
}

}  // namespace

void apply_sections(SimConfig& cfg, const IniSections& sections) {
  std::map<std::string, Binder> binders;

  {
    Binder& b = binders["scenario"];
    b.integer("n_background", &cfg.scenario.n_background);
    b.integer("n_tracked", &cfg.scenario.n_tracked);
    b.policy("tracked_policy", &cfg.scenario.tracked_policy);
    b.number("ramp_share", &cfg.scenario.ramp_share);
    b.seed("seed", &cfg.scenario.seed);
    b.number("sim_horizon", &cfg.scenario.sim_horizon);
    b.number("bg_speed_min", &cfg.scenario.bg_speed_min);
    b.number("bg_speed_max", &cfg.scenario.bg_speed_max);
    b.number("demand_window", &cfg.scenario.demand_window);
    b.number("seed_fraction", &cfg.scenario.seed_fraction);
    b.number("truck_share", &cfg.scenario.truck_share);
    b.number("truck_speed_min", &cfg.scenario.truck_speed_min);
    b.number("truck_speed_max", &cfg.scenario.truck_speed_max);
    b.number("truck_length", &cfg.scenario.truck_length);
    b.number("av_depart_time", &cfg.scenario.av_depart_time);
    b.number("av_spacing", &cfg.scenario.av_spacing);
  }
  {
    Binder& b = binders["network"];
    RoadNetwork* n = &cfg.scenario.network;
    b.number("mainline_length", &n->mainline_length);
    b.integer("n_lanes", &n->n_lanes);
    b.number("lane_width", &n->lane_width);
    b.number("ramp_merge_start", &n->ramp_merge_start);
    b.number("ramp_accel_len", &n->ramp_accel_len);
    b.number("ramp_approach_len", &n->ramp_approach_len);
    b.number("highway_speed_limit", &n->highway_speed_limit);
    b.number("ramp_speed_limit", &n->ramp_speed_limit);
  }
  {
    Binder& b = binders["engine"];
    b.number("dt", &cfg.engine.dt);
    b.number("collision_gap_threshold", &cfg.engine.collision_gap_threshold);
    b.number("bg_accel", &cfg.engine.bg_accel);
    b.number("bg_min_gap", &cfg.engine.bg_min_gap);
    b.number("idm_decel_floor", &cfg.engine.idm_decel_floor);
    b.number("positioning_spacing", &cfg.engine.positioning_spacing);
    b.number("merge_g_lead", &cfg.engine.merge_g_lead);
    b.number("merge_g_lag", &cfg.engine.merge_g_lag);
    b.number("merge_b_safe", &cfg.engine.merge_b_safe);
  }
  {
    Binder& b = binders["idm_av"];
    b.number("a_max", &cfg.idm_av.a_max);
    b.number("b_comf", &cfg.idm_av.b_comf);
    b.number("v0", &cfg.idm_av.v0);
    b.number("T", &cfg.idm_av.T);
    b.number("s0", &cfg.idm_av.s0);
    b.number("delta", &cfg.idm_av.delta);
  }
  {
    Binder& b = binders["krauss"];
    b.number("b", &cfg.krauss_bg.b);
    b.number("tau", &cfg.krauss_bg.tau);
    b.number("sigma", &cfg.krauss_bg.sigma);
  }
  bind_mobil(binders["mobil"], &cfg.mobil);
  {
    Binder& b = binders["lc2017"];
    bind_mobil(b, &cfg.lc2017.base);
    b.number("anticipation_horizon", &cfg.lc2017.anticipation_horizon);
    b.integer("commit_streak", &cfg.lc2017.commit_streak);
    b.number("cooldown", &cfg.lc2017.cooldown);
  }
  {
    Binder& b = binders["idm_lc"];
    bind_mobil(b, &cfg.idmlc.base);
    b.number("cooldown", &cfg.idmlc.cooldown);
  }
  {
    Binder& b = binders["continuous"];
    bind_mobil(b, &cfg.continuous.base);
    b.number("lateral_speed", &cfg.continuous.lateral_speed);
  }
  {
    Binder& b = binders["mlca"];
    b.number("g_block", &cfg.mlca.g_block);
    b.number("v_deficit", &cfg.mlca.v_deficit);
    b.number("ttc_wait", &cfg.mlca.ttc_wait);
    b.number("g_lead_min", &cfg.mlca.g_lead_min);
    b.number("g_lag_min", &cfg.mlca.g_lag_min);
    b.number("b_safe", &cfg.mlca.b_safe);
    b.number("cooldown", &cfg.mlca.cooldown);
    b.number("mandatory_remaining", &cfg.mlca.mandatory_remaining);
  }

  for (const auto& [section, kv] : sections) {
    auto bit = binders.find(section);
    if (bit == binders.end())
      throw ConfigError("unknown config section: [" + section + "]");
    for (const auto& [key, value] : kv) {
      auto sit = bit->second.setters.find(key);
      if (sit == bit->second.setters.end())
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      sit->second(value);
    }
  }
}

SimConfig load_config(const std::filesystem::path& path) {
  SimConfig cfg;
  apply_sections(cfg, parse_ini(path));
  return cfg;
}

}  // namespace lanesim
