#pragma once

// File formats: torque curves, spring catalogs, trial logs and Likert responses.
// All readers throw ParseError naming the file and 1-based line.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wristex/biomech_model.hpp"
#include "wristex/spring_design.hpp"
#include "wristex/trial_analysis.hpp"

namespace wristex::io {

inline constexpr std::string_view kCurveHeader = "angle_rad,moment_Nm";
inline constexpr std::string_view kCatalogHeader = "name,stiffness_Nmm_per_deg";
inline constexpr std::string_view kTrialHeader = "t_s,angle_deg,current_mA,button";
inline constexpr std::string_view kLikertHeader = "participant,item,score";

// Splits one CSV record on commas; no quoting.
std::vector<std::string> split_csv_line(std::string_view line);

// Parses a decimal number. Empty fields and "nan" become quiet NaN when
// allow_missing is set.
std::optional<double> parse_number(std::string_view field, bool allow_missing = false);

void write_torque_curve(const std::filesystem::path& path, const biomech::TorqueCurve& curve);
void write_torque_curve(std::ostream& os, const biomech::TorqueCurve& curve);
// Label defaults to the file stem.
biomech::TorqueCurve read_torque_curve(const std::filesystem::path& path);

std::vector<spring_design::SpringCatalogEntry> read_spring_catalog(const std::filesystem::path& path);

// P<participant>_POS<posture>_<unloaded|loaded_300g>_<spring>_T<trial>.csv
std::optional<trials::TrialMeta> parse_trial_filename(const std::string& filename);
std::string trial_filename(const trials::TrialMeta& meta);

trials::TrialLog read_trial_log(const std::filesystem::path& path);
void write_trial_log(const std::filesystem::path& path, const trials::TrialLog& log);

std::vector<trials::LikertResponse> read_likert(const std::filesystem::path& path);

// Files in `dir` whose names follow the trial convention, sorted by name.
std::vector<std::filesystem::path> list_trial_files(const std::filesystem::path& dir);

}  // namespace wristex::io
