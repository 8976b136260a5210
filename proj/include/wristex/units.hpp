#pragma once

#include <numbers>

namespace wristex::units {

constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

constexpr double milliamp_to_amp(double ma) { return ma / 1000.0; }

constexpr double kStandardGravity = 9.81;

}  // namespace wristex::units
