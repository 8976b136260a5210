#include "wristex/transmission.hpp"

#include <cmath>

#include "wristex/errors.hpp"

namespace wristex::transmission {

void SpringSpec::validate() const {
  if (!std::isfinite(stiffness_k) || stiffness_k <= 0.0) throw ConfigError("spring stiffness must be > 0");
  if (!std::isfinite(pretension_theta0) || pretension_theta0 < 0.0) throw ConfigError("spring pretension must be >= 0");
  if (pre_wind_angle && !std::isfinite(*pre_wind_angle)) throw ConfigError("pre-wind angle must be finite");
}

void CableRoute::validate() const {
  if (!std::isfinite(friction_mu) || friction_mu < 0.0) throw ConfigError("friction coefficient must be >= 0");
  if (!std::isfinite(wrap_angle) || wrap_angle < 0.0) throw ConfigError("wrap angle must be >= 0");
  if (!std::isfinite(lever_radius) || lever_radius <= 0.0) throw ConfigError("lever radius must be > 0");
}

void Gearing::validate() const {
  if (!std::isfinite(ratio) || ratio < 1.0) throw ConfigError("gear ratio must be >= 1");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ConfigError("efficiency must be in (0,1]");
  if (!std::isfinite(torque_constant) || torque_constant <= 0.0) throw ConfigError("torque constant must be > 0");
}

double spring_torque(const SpringSpec& spec, double wrist_angle) {
  spec.validate();
  if (!std::isfinite(wrist_angle)) throw DomainError("wrist angle is not finite");
  return spec.stiffness_k * (spec.pretension_theta0 - wrist_angle);
}

double pretension_torque(const SpringSpec& spec) {
  spec.validate();
  if (!spec.pre_wind_angle) throw ConfigError("spring has no pre-wind angle");
  return spec.stiffness_k * *spec.pre_wind_angle;
}

double capstan_factor(const CableRoute& route, FrictionDirection direction) {
  route.validate();
  const double exponent = route.friction_mu * route.wrap_angle;
  return std::exp(direction == FrictionDirection::Opposing ? exponent : -exponent);
}

double capstan_transmit(double force_in, const CableRoute& route, FrictionDirection direction) {
  if (!std::isfinite(force_in) || force_in < 0.0) throw DomainError("cable force must be >= 0");
  return force_in * capstan_factor(route, direction);
}

double joint_torque_from_tension(double force, const CableRoute& route) {
  if (!std::isfinite(force) || force < 0.0) throw DomainError("cable force must be >= 0");
  route.validate();
  return route.lever_radius * force;
}

MotorDemand motor_current_for_joint_torque(double joint_torque, const SpringSpec& spring, double wrist_angle,
                                           const CableRoute& route, const Gearing& gear) {
  if (!std::isfinite(joint_torque)) throw DomainError("joint torque is not finite");
  route.validate();
  gear.validate();

  MotorDemand out;
  const double cable_torque = joint_torque - spring_torque(spring, wrist_angle);
  if (cable_torque <= 0.0) {
    out.spring_driven = true;
    return out;
  }
  out.joint_tension = cable_torque / route.lever_radius;
  out.motor_tension = capstan_transmit(out.joint_tension, route, FrictionDirection::Opposing);
  out.motor_torque = out.motor_tension * route.lever_radius / (gear.ratio * gear.efficiency);
  out.current = out.motor_torque / gear.torque_constant;
  return out;
}

}  // namespace wristex::transmission
