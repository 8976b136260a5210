#pragma once

// Torque path between the wrist joint and the motor: clock spring, tangential
// lever arm, Bowden cable friction and the geared motor.

#include <optional>

#include "wristex/units.hpp"

namespace wristex::transmission {

struct SpringSpec {
  double stiffness_k = 0.0;                 // N*m/rad
  double pretension_theta0 = 0.0;           // rad, zero-torque wrist angle
  std::optional<double> pre_wind_angle;     // rad, wind-up installed at assembly

  void validate() const;
};

struct CableRoute {
  double friction_mu = 0.04;
  double wrap_angle = units::kPi;  // rad, total bend of the sheath
  double lever_radius = 0.025;     // m

  void validate() const;
};

struct Gearing {
  double ratio = 128.0;  // motor turns per joint turn
  double efficiency = 0.78;
  double torque_constant = 0.0105;  // N*m/A

  void validate() const;
};

// Spring torque at an abduction-positive wrist angle; zero at theta0 and
// decreasing with abduction.
double spring_torque(const SpringSpec& spec, double wrist_angle);

// Baseline torque from the assembly wind-up. Throws ConfigError if the spring
// carries no pre-wind angle.
double pretension_torque(const SpringSpec& spec);

enum class FrictionDirection {
  Opposing,  // friction works against the transfer: result is F * exp(mu * wrap)
  Aiding,    // friction works with it: result is F * exp(-mu * wrap)
};

double capstan_factor(const CableRoute& route, FrictionDirection direction);

// Cable tension on the far side of the sheath for a tension `force_in` on the
// near side.
double capstan_transmit(double force_in, const CableRoute& route, FrictionDirection direction);

// Cable is routed tangentially, so the lever is perpendicular to the tension.
double joint_torque_from_tension(double force, const CableRoute& route);

struct MotorDemand {
  double current = 0.0;        // A
  double joint_tension = 0.0;  // N, cable tension at the joint
  double motor_tension = 0.0;  // N, after sheath friction
  double motor_torque = 0.0;   // N*m at the motor shaft
  bool spring_driven = false;  // spring alone meets the demand; cable slack
};

// Motor current needed for the joint to deliver `joint_torque` (abduction
// positive) while the spring pulls back with spring_torque(wrist_angle).
// The motor capstan is assumed to share the joint lever radius.
MotorDemand motor_current_for_joint_torque(double joint_torque, const SpringSpec& spring, double wrist_angle,
                                           const CableRoute& route, const Gearing& gear);

}  // namespace wristex::transmission
