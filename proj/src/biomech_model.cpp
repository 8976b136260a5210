#include "wristex/biomech_model.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "wristex/errors.hpp"

namespace wristex::biomech {

using Eigen::AngleAxisd;
using Eigen::Vector3d;

namespace {

const BodySegment& find_segment(std::span<const BodySegment> segments, const char* name) {
  auto it = std::find_if(segments.begin(), segments.end(), [&](const BodySegment& s) { return s.name == name; });
  if (it == segments.end()) {
    throw ConfigError(std::string("segment chain is missing '") + name + "'");
  }
  it->validate();
  return *it;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " is not finite");
  }
}

}  // namespace

void BodySegment::validate() const {
  if (!std::isfinite(mass) || mass < 0.0) throw ConfigError("segment '" + name + "': mass must be >= 0");
  if (!std::isfinite(length) || length <= 0.0) throw ConfigError("segment '" + name + "': length must be > 0");
  if (!(com_ratio >= 0.0 && com_ratio <= 1.0)) throw ConfigError("segment '" + name + "': com_ratio must be in [0,1]");
}

std::string to_string(PostureLabel label) {
  switch (label) {
    case PostureLabel::P1: return "P1";
    case PostureLabel::P2: return "P2";
    case PostureLabel::P3: return "P3";
    case PostureLabel::Custom: return "custom";
  }
  return "custom";
}

std::optional<PostureLabel> parse_posture_label(const std::string& text) {
  if (text == "P1") return PostureLabel::P1;
  if (text == "P2") return PostureLabel::P2;
  if (text == "P3") return PostureLabel::P3;
  if (text == "custom") return PostureLabel::Custom;
  return std::nullopt;
}

ArmPosture ArmPosture::preset(PostureLabel label) {
  using units::deg_to_rad;
  switch (label) {
    case PostureLabel::P1: return {deg_to_rad(30.0), deg_to_rad(60.0), deg_to_rad(90.0), label};
    case PostureLabel::P2: return {deg_to_rad(45.0), deg_to_rad(60.0), 0.0, label};
    case PostureLabel::P3: return {deg_to_rad(75.0), deg_to_rad(120.0), deg_to_rad(90.0), label};
    case PostureLabel::Custom: break;
  }
  throw ConfigError("custom posture has no preset angles");
}

void ArmPosture::validate() const {
  require_finite(shoulder_flexion, "shoulder flexion");
  require_finite(elbow_flexion, "elbow flexion");
  require_finite(forearm_pronation, "forearm pronation");
}

void LoadSpec::validate() const {
  if (!std::isfinite(handheld_mass) || handheld_mass < 0.0) throw ConfigError("handheld mass must be >= 0");
  if (!std::isfinite(grip_offset) || grip_offset < 0.0) throw ConfigError("grip offset must be >= 0");
}

double MotionProfile::angle_at(double t) const {
  const double w = 2.0 * units::kPi / period;
  double angle = mean_angle + amplitude * std::sin(w * t);
  for (const auto& h : harmonics) {
    angle += h.coefficient * std::sin(h.order * w * t);
  }
  return angle;
}

MotionProfile::Range MotionProfile::range() const {
  if (harmonics.empty()) {
    return {mean_angle - std::abs(amplitude), mean_angle + std::abs(amplitude)};
  }
  // Coarse scan to bracket each extreme, then Brent refinement.
  constexpr int kGrid = 2048;
  const double dt = period / kGrid;
  int i_min = 0;
  int i_max = 0;
  double v_min = angle_at(0.0);
  double v_max = v_min;
  for (int i = 1; i < kGrid; ++i) {
    const double v = angle_at(i * dt);
    if (v < v_min) { v_min = v; i_min = i; }
    if (v > v_max) { v_max = v; i_max = i; }
  }
  constexpr int kBits = std::numeric_limits<double>::digits / 2;
  auto lo = boost::math::tools::brent_find_minima([&](double t) { return angle_at(t); },
                                                  (i_min - 1) * dt, (i_min + 1) * dt, kBits);
  auto hi = boost::math::tools::brent_find_minima([&](double t) { return -angle_at(t); },
                                                  (i_max - 1) * dt, (i_max + 1) * dt, kBits);
  return {std::min(v_min, lo.second), std::max(v_max, -hi.second)};
}

void MotionProfile::validate(const JointLimits& limits) const {
  if (!std::isfinite(mean_angle) || !std::isfinite(amplitude)) throw ConfigError("motion profile angles must be finite");
  if (amplitude < 0.0) throw ConfigError("motion amplitude must be >= 0");
  if (!std::isfinite(period) || period <= 0.0) throw ConfigError("motion period must be > 0");
  for (const auto& h : harmonics) {
    if (h.order < 1 || !std::isfinite(h.coefficient)) throw ConfigError("invalid motion harmonic");
  }
  const auto r = range();
  if (!limits.contains(r.min_angle) || !limits.contains(r.max_angle)) {
    throw ConfigError("motion profile leaves the wrist joint limits");
  }
}

double TorqueCurve::peak_abs_moment() const {
  double peak = 0.0;
  for (const auto& s : samples) peak = std::max(peak, std::abs(s.moment));
  return peak;
}

double hand_mass_from_body(double body_mass, Sex sex, std::optional<double> fraction_override) {
  if (!std::isfinite(body_mass) || body_mass <= 0.0) throw DomainError("body mass must be > 0");
  double fraction = sex == Sex::Male ? 0.0065 : 0.0050;
  if (fraction_override) {
    if (!(*fraction_override > 0.0 && *fraction_override < 0.05)) {
      throw DomainError("hand mass fraction must be in (0, 0.05)");
    }
    fraction = *fraction_override;
  }
  return body_mass * fraction;
}

std::vector<BodySegment> default_segments() {
  return {
      {kUpperArm, 2.24, 0.30, 0.436},
      {kForearm, 1.28, 0.26, 0.430},
      {kHand, hand_mass_from_body(80.0, Sex::Male), 0.19, 0.5},
  };
}

WristFrame wrist_frame(std::span<const BodySegment> segments, const ArmPosture& posture, double wrist_angle) {
  const auto& upper = find_segment(segments, kUpperArm);
  const auto& fore = find_segment(segments, kForearm);
  find_segment(segments, kHand);
  posture.validate();
  require_finite(wrist_angle, "wrist angle");

  const Vector3d down(0.0, 0.0, -1.0);
  const Vector3d lateral_neg(0.0, -1.0, 0.0);

  const AngleAxisd shoulder(posture.shoulder_flexion, lateral_neg);
  const AngleAxisd upper_to_fore(posture.shoulder_flexion + posture.elbow_flexion, lateral_neg);
  // Pronation about the forearm's own axis; -z in the hanging frame, so the
  // thumb (+x when hanging) turns toward +y.
  const AngleAxisd pronation(posture.forearm_pronation, Vector3d::UnitZ());

  WristFrame frame;
  const Vector3d elbow = upper.length * (shoulder * down);
  frame.forearm = upper_to_fore * down;
  frame.wrist = elbow + fore.length * frame.forearm;
  frame.thumb = upper_to_fore * (pronation * Vector3d::UnitX());
  frame.abad_axis = frame.forearm.cross(frame.thumb).normalized();
  frame.hand = std::cos(wrist_angle) * frame.forearm + std::sin(wrist_angle) * frame.thumb;
  return frame;
}

double wrist_reaction_moment(std::span<const BodySegment> segments, const ArmPosture& posture, double wrist_angle,
                             const LoadSpec& load, double gravity, const JointLimits& limits) {
  require_finite(wrist_angle, "wrist angle");
  require_finite(gravity, "gravity");
  if (!limits.contains(wrist_angle)) throw DomainError("wrist angle outside joint limits");
  load.validate();

  const auto& hand = find_segment(segments, kHand);
  const WristFrame frame = wrist_frame(segments, posture, wrist_angle);
  const Vector3d g(0.0, 0.0, -gravity);

  // Only masses distal to the wrist contribute.
  const Vector3d r_hand = hand.com_ratio * hand.length * frame.hand;
  const Vector3d r_load = load.grip_offset * frame.hand;
  const Vector3d gravity_moment = r_hand.cross(hand.mass * g) + r_load.cross(load.handheld_mass * g);
  return -frame.abad_axis.dot(gravity_moment);
}

TorqueCurve sweep_torque_curve(std::span<const BodySegment> segments, const ArmPosture& posture,
                               const MotionProfile& motion, const LoadSpec& load, std::size_t n_samples,
                               double gravity, const JointLimits& limits) {
  if (n_samples < 2) throw DomainError("sweep needs at least 2 samples");
  motion.validate(limits);
  const auto range = motion.range();
  const double span = range.max_angle - range.min_angle;

  TorqueCurve curve;
  curve.posture_label = to_string(posture.label);
  curve.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const double angle = i + 1 == n_samples ? range.max_angle : range.min_angle + span * frac;
    if (!curve.samples.empty() && angle <= curve.samples.back().angle) continue;
    curve.samples.push_back({angle, wrist_reaction_moment(segments, posture, angle, load, gravity, limits)});
  }
  return curve;
}

}  // namespace wristex::biomech
