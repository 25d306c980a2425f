#include "lanesim/longitudinal.hpp"

#include <algorithm>
#include <cmath>

#include "lanesim/core.hpp"

namespace lanesim {

double idm_desired_gap(const IdmParams& p, double v, double dv) {
  const double dynamic = v * dv / (2.0 * std::sqrt(p.a_max * p.b_comf));
  return p.s0 + v * p.T + dynamic;
}

double idm_accel(const IdmParams& p, double v, double gap, double v_lead,
                 bool has_leader) {
  const double free_term = std::pow(v / p.v0, p.delta);
  double interaction = 0.0;
  if (has_leader) {
    if (gap <= 0.0) throw DomainError("idm_accel: non-positive gap with leader");
    const double s_star = idm_desired_gap(p, v, v - v_lead);
    interaction = (s_star / gap) * (s_star / gap);
  }
  return p.a_max * (1.0 - free_term - interaction);
}

double krauss_safe_speed(const KraussParams& p, double v, double v_lead,
                         double gap) {
  const double v_safe =
      v_lead + (gap - v_lead * p.tau) / ((v + v_lead) / (2.0 * p.b) + p.tau);
  return std::max(0.0, v_safe);
}

Kinematics integrate(double v, double a, double dt) {
  const double new_v = std::max(0.0, v + a * dt);
  return {new_v, 0.5 * (v + new_v) * dt};
}

}  // namespace lanesim
