#pragma once

// Quasi-static rigid-link arm model for the wrist abduction-adduction joint.
//
// Frames: world x forward, y left (medial for the right arm), z up; gravity
// acts along -z. Shoulder and elbow flexion rotate about the lateral axis so
// that a hanging arm (0, 0) points along -z and flexion swings it forward.
// Forearm pronation 0 is the neutral thumb-up orientation; positive pronation
// turns the thumb medially, reaching palm-down at 90 deg. The Ab-Ad axis is the
// palm normal, oriented so that positive wrist angles move the hand toward the
// thumb (abduction / radial deviation).

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wristex/units.hpp"

namespace wristex::biomech {

struct BodySegment {
  std::string name;
  double mass = 0.0;       // kg
  double length = 0.0;     // m
  double com_ratio = 0.5;  // fraction of length from the proximal joint

  void validate() const;
};

// Segment names the chain must contain.
inline constexpr const char* kUpperArm = "upper_arm";
inline constexpr const char* kForearm = "forearm";
inline constexpr const char* kHand = "hand";

enum class PostureLabel { P1, P2, P3, Custom };

std::string to_string(PostureLabel label);
std::optional<PostureLabel> parse_posture_label(const std::string& text);

struct ArmPosture {
  double shoulder_flexion = 0.0;   // rad
  double elbow_flexion = 0.0;      // rad
  double forearm_pronation = 0.0;  // rad
  PostureLabel label = PostureLabel::Custom;

  // Resting, reaching and drinking presets. P3 pronation is 90 deg.
  static ArmPosture preset(PostureLabel label);

  void validate() const;
};

struct LoadSpec {
  double handheld_mass = 0.5;  // kg
  double grip_offset = 0.08;   // m, load CoM from the wrist along the hand axis

  void validate() const;
};

// Admissible wrist range; adduction is the negative bound.
struct JointLimits {
  double min_angle = units::deg_to_rad(-44.0);
  double max_angle = units::deg_to_rad(30.0);

  bool contains(double angle, double tol = 1e-9) const {
    return angle >= min_angle - tol && angle <= max_angle + tol;
  }
};

struct Harmonic {
  int order = 1;
  double coefficient = 0.0;  // rad
};

// theta(t) = mean + amplitude * sin(w t) + sum_k c_k * sin(k w t), w = 2 pi / period.
struct MotionProfile {
  double mean_angle = units::deg_to_rad(-7.0);
  double amplitude = units::deg_to_rad(37.0);
  double period = 2.0;
  std::vector<Harmonic> harmonics;  // extra terms beyond the fundamental

  double angle_at(double t) const;

  struct Range {
    double min_angle;
    double max_angle;
  };
  // Extremes over one period.
  Range range() const;

  void validate(const JointLimits& limits = {}) const;
};

struct TorqueSample {
  double angle;   // rad
  double moment;  // N*m
};

struct TorqueCurve {
  std::vector<TorqueSample> samples;
  std::string posture_label;

  double peak_abs_moment() const;
};

enum class Sex { Male, Female };

// Hand mass as a fraction of body mass (0.65 % male, 0.50 % female by default).
double hand_mass_from_body(double body_mass, Sex sex, std::optional<double> fraction_override = std::nullopt);

// Upper arm, forearm and hand for an 80 kg male with a large hand.
std::vector<BodySegment> default_segments();

// Wrist joint frame for a given posture and wrist angle, in world coordinates
// relative to the shoulder.
struct WristFrame {
  Eigen::Vector3d wrist;       // wrist joint centre
  Eigen::Vector3d forearm;     // unit, elbow -> wrist
  Eigen::Vector3d thumb;       // unit, abduction direction at zero wrist angle
  Eigen::Vector3d abad_axis;   // unit, forearm x thumb
  Eigen::Vector3d hand;        // unit, wrist -> fingertips at the given angle
};

WristFrame wrist_frame(std::span<const BodySegment> segments, const ArmPosture& posture, double wrist_angle);

// Moment the wrist must supply about the Ab-Ad axis to hold the hand and the
// handheld load against gravity (abduction positive). Throws ConfigError when
// a segment is missing and DomainError on non-finite or out-of-range angles.
double wrist_reaction_moment(std::span<const BodySegment> segments, const ArmPosture& posture, double wrist_angle,
                             const LoadSpec& load, double gravity = units::kStandardGravity,
                             const JointLimits& limits = {});

// Samples the reaction moment at n evenly spaced angles between the extremes
// of one motion cycle. Output is sorted by angle with duplicates collapsed.
TorqueCurve sweep_torque_curve(std::span<const BodySegment> segments, const ArmPosture& posture,
                               const MotionProfile& motion, const LoadSpec& load, std::size_t n_samples,
                               double gravity = units::kStandardGravity, const JointLimits& limits = {});

}  // namespace wristex::biomech
