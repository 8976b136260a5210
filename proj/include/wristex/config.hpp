#pragma once

// Toolkit configuration: a line-oriented INI file with one section per
// concern. Every key is optional; absent keys keep the built-in defaults.
//
//   [segments]      upper_arm_mass_kg, upper_arm_length_m, upper_arm_com_ratio,
//                   forearm_*, hand_length_m, hand_com_ratio, hand_mass_kg
//                   or body_mass_kg + sex (+ hand_mass_fraction)
//   [posture_P1]..[posture_P3], [posture_custom]
//                   shoulder_flexion_deg, elbow_flexion_deg, pronation_deg
//   [motion]        mean_deg, amplitude_deg, period_s, harmonics ("order:coef_deg, ...")
//   [load]          handheld_mass_kg, grip_offset_m
//   [simulation]    gravity_mps2, joint_min_deg, joint_max_deg
//   [catalog]       path (CSV, relative to the config file)
//   [transmission]  lever_radius_m, friction_mu, wrap_angle_rad, gear_ratio,
//                   efficiency, torque_constant_NmA
//   [analysis]      angle_min_deg, angle_max_deg, max_invalid_fraction, sample_period_s

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wristex/biomech_model.hpp"
#include "wristex/spring_design.hpp"
#include "wristex/trial_analysis.hpp"
#include "wristex/transmission.hpp"

namespace wristex {

struct ToolkitConfig {
  std::vector<biomech::BodySegment> segments = biomech::default_segments();
  std::map<biomech::PostureLabel, biomech::ArmPosture> postures = {
      {biomech::PostureLabel::P1, biomech::ArmPosture::preset(biomech::PostureLabel::P1)},
      {biomech::PostureLabel::P2, biomech::ArmPosture::preset(biomech::PostureLabel::P2)},
      {biomech::PostureLabel::P3, biomech::ArmPosture::preset(biomech::PostureLabel::P3)},
  };
  biomech::MotionProfile motion;
  biomech::LoadSpec load;
  biomech::JointLimits limits;
  double gravity = units::kStandardGravity;
  std::vector<spring_design::SpringCatalogEntry> catalog = spring_design::default_catalog();
  transmission::CableRoute route;
  transmission::Gearing gear;
  trials::AnalysisBounds bounds;

  // Throws ConfigError on any violated module invariant.
  void validate() const;

  const biomech::ArmPosture& posture(biomech::PostureLabel label) const;
};

// Throws ConfigError for unreadable files, unknown keys or invalid values.
ToolkitConfig load_config(const std::filesystem::path& path);
ToolkitConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

}  // namespace wristex
