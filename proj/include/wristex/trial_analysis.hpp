#pragma once

// Experiment trial logs: cleaning, range of motion, motor torque, repeatability
// and study-level aggregation.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wristex/statistics.hpp"
#include "wristex/transmission.hpp"

namespace wristex::trials {

enum class Button { Abduct, Adduct, Neutral };  // B2, B3, B4 on the gamepad
enum class LoadCondition { Unloaded, Loaded300g };

std::string to_string(Button b);
std::string to_string(LoadCondition load);

struct TrialSample {
  double t = 0.0;           // s
  double angle_deg = 0.0;   // abduction positive
  double current_mA = 0.0;
  std::optional<Button> button;
};

struct TrialMeta {
  std::string participant;
  std::string posture;
  LoadCondition load = LoadCondition::Unloaded;
  std::string spring;
  int trial_index = 1;

  bool same_condition(const TrialMeta& other) const {
    return participant == other.participant && posture == other.posture && load == other.load &&
           spring == other.spring;
  }
};

struct TrialLog {
  std::vector<TrialSample> samples;
  TrialMeta meta;
};

struct AnalysisBounds {
  double min_angle_deg = -60.0;
  double max_angle_deg = 45.0;
  double max_invalid_fraction = 0.05;
  double nominal_period_s = 0.01;

  void validate() const;
};

struct CleanResult {
  TrialLog log;
  double invalid_fraction = 0.0;  // invalid samples over the raw sample count
  std::size_t repaired = 0;
  std::size_t dropped = 0;        // invalid leading/trailing samples
};

// Replaces non-finite or out-of-bounds samples by linear interpolation between
// the nearest valid neighbours; drops invalid samples at either end. Throws
// TrialRejected when the invalid fraction exceeds bounds.max_invalid_fraction.
CleanResult clean_interpolate(const TrialLog& log, const AnalysisBounds& bounds = {});

struct RomMetrics {
  double rom_ab = 0.0;     // deg
  double rom_ad = 0.0;     // deg
  double rom_total = 0.0;  // deg
};

RomMetrics rom_metrics(const TrialLog& log);

struct TorquePoint {
  double t;    // s
  double tau;  // N*m, motor side
};

std::vector<TorquePoint> torque_series(const TrialLog& log, const transmission::Gearing& gear);

// K_T * sqrt(mean(I^2)) with currents converted to amperes.
double rms_torque(const TrialLog& log, const transmission::Gearing& gear);

// Joint-side torque implied by a motor-side torque through the gearhead.
double joint_torque_estimate(double tau_motor, const transmission::Gearing& gear);

struct TrialMetrics {
  double rom_ab = 0.0;
  double rom_ad = 0.0;
  double rom_total = 0.0;
  double tau_rms = 0.0;  // N*m, motor side
  std::size_t n_samples = 0;
  double interpolated_fraction = 0.0;
};

struct TrialResult {
  std::string source;
  TrialMeta meta;
  TrialMetrics metrics;
};

// Clean, then compute ROM and RMS torque.
TrialMetrics analyze_trial(const TrialLog& log, const transmission::Gearing& gear, const AnalysisBounds& bounds = {});

struct RepeatabilityRecord {
  std::string participant;
  std::string posture;
  LoadCondition load = LoadCondition::Unloaded;
  std::string spring;
  double delta_rom = 0.0;  // deg
};

// |T1 - T2| on total ROM. Both trials must share participant, posture, load
// and spring.
RepeatabilityRecord repeatability(const TrialResult& first, const TrialResult& second);

enum class LikertItem { Size, Weight, DonDoff };

std::string to_string(LikertItem item);
std::optional<LikertItem> parse_likert_item(const std::string& text);

struct LikertResponse {
  std::string participant;
  LikertItem item = LikertItem::Size;
  int score = 1;  // 1..10
};

struct LikertSummary {
  LikertItem item = LikertItem::Size;
  stats::MeanSd score;
  bool single_response = false;
};

// Items without responses are left out.
std::vector<LikertSummary> likert_summary(std::span<const LikertResponse> responses);

struct TrialInput {
  std::string source;
  TrialLog log;
};

struct Rejection {
  std::string source;
  std::string reason;
  double invalid_fraction = 0.0;
};

struct GroupDistribution {
  std::string spring;
  std::string posture;  // empty when pooled over postures
  stats::FiveNumber rom_total;
  stats::FiveNumber tau_rms;
};

struct RepeatabilitySummary {
  std::string spring;   // empty for the overall summary
  std::string posture;  // empty when pooled over postures
  stats::MeanSd delta_rom;
};

struct StudyReport {
  transmission::Gearing gear;
  AnalysisBounds bounds;
  std::vector<TrialResult> trials;  // sorted by source
  std::vector<Rejection> rejected;
  std::vector<GroupDistribution> by_spring;
  std::vector<GroupDistribution> by_spring_posture;
  std::vector<RepeatabilityRecord> repeatability;
  std::vector<RepeatabilitySummary> repeatability_by_spring_posture;
  std::vector<RepeatabilitySummary> repeatability_by_spring;
  RepeatabilitySummary repeatability_overall;
  std::optional<stats::FriedmanResult> friedman_rom;
  std::optional<stats::FriedmanResult> friedman_torque;
  std::vector<LikertSummary> likert;
  std::vector<std::string> warnings;
};

// Per-trial metrics run concurrently; grouping and statistics are a single
// ordered reduction, so the report is independent of scheduling.
StudyReport aggregate_report(std::span<const TrialInput> trials, const transmission::Gearing& gear,
                             const AnalysisBounds& bounds = {}, std::span<const LikertResponse> likert = {});

}  // namespace wristex::trials
