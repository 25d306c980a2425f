#ifndef LANESIM_LONGITUDINAL_HPP
#define LANESIM_LONGITUDINAL_HPP

namespace lanesim {

struct IdmParams {
  double a_max = 1.5;   // m/s², maximum acceleration
  double b_comf = 2.0;  // m/s², comfortable deceleration
  double v0 = 30.0;     // m/s, desired speed
  double T = 1.5;       // s, desired time headway
  double s0 = 2.0;      // m, minimum gap
  double delta = 4.0;   // free-flow exponent
};

struct KraussParams {
  double b = 4.5;      // m/s², maximum deceleration
  double tau = 1.0;    // s, reaction time
  double sigma = 0.2;  // driver imperfection in [0, 1]
};

/// IDM dynamic desired gap s* = s0 + v·T + v·Δv / (2·sqrt(a_max·b_comf)).
double idm_desired_gap(const IdmParams& p, double v, double dv);

/// Intelligent Driver Model acceleration. Throws DomainError when has_leader
/// and gap <= 0 (the caller must have detected the collision already).
double idm_accel(const IdmParams& p, double v, double gap, double v_lead,
                 bool has_leader);

/// Krauß collision-free safe speed for a follower at speed v behind a leader
/// at v_lead with net gap `gap`; clamped at >= 0.
double krauss_safe_speed(const KraussParams& p, double v, double v_lead,
                         double gap);

struct Kinematics {
  double new_speed;
  double delta_pos;
};

/// Ballistic update: speed clamps at 0, position advances by the trapezoid.
Kinematics integrate(double v, double a, double dt);

}  // namespace lanesim

#endif  // LANESIM_LONGITUDINAL_HPP
