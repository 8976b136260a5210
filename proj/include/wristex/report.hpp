#pragma once

// JSON reports and plot-ready CSVs. Floats are rounded to 6 significant
// digits and keys are sorted, so identical inputs give byte-identical files.

#include <json.hpp>

#include <filesystem>
#include <string>

#include "wristex/spring_design.hpp"
#include "wristex/trial_analysis.hpp"

namespace wristex::report {

using Json = nlohmann::json;

inline constexpr int kSignificantDigits = 6;

double round_significant(double v, int digits = kSignificantDigits);

Json to_json(const spring_design::SpringDesign& design);
Json to_json(const trials::StudyReport& report);

// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

inline constexpr const char* kRomBoxplotCsv = "rom_boxplot.csv";
inline constexpr const char* kTorqueBoxplotCsv = "torque_boxplot.csv";
inline constexpr const char* kRepeatabilityCsv = "repeatability.csv";

// Writes the three plot CSVs from a study report JSON.
void render_plot_csvs(const Json& study, const std::filesystem::path& out_dir);

}  // namespace wristex::report
