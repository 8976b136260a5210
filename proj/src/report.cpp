#include "wristex/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wristex/errors.hpp"
#include "wristex/units.hpp"

namespace wristex::report {

namespace fs = std::filesystem;

double round_significant(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

namespace {

double r(double v) { return round_significant(v); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return buf;
}

Json entry_json(const spring_design::SpringCatalogEntry& e) {
  return {{"name", e.name}, {"stiffness_Nmm_per_deg", r(e.stiffness)}};
}

Json five_json(const stats::FiveNumber& f, double scale = 1.0) {
  return {{"min", r(f.min * scale)},       {"q1", r(f.q1 * scale)},   {"median", r(f.median * scale)},
          {"q3", r(f.q3 * scale)},         {"max", r(f.max * scale)}, {"n", f.n}};
}

Json mean_sd_json(const stats::MeanSd& m, const char* unit_suffix) {
  return {{std::string("mean") + unit_suffix, r(m.mean)}, {std::string("sd") + unit_suffix, r(m.sd)}, {"n", m.n}};
}

Json friedman_json(const stats::FriedmanResult& f) {
  return {{"chi2", r(f.chi2)}, {"p", r(f.p)}, {"df", f.df}, {"n_subjects", f.n_subjects}};
}

}  // namespace

Json to_json(const spring_design::SpringDesign& d) {
  Json peaks = Json::array();
  for (const auto& [label, peak] : d.peaks) peaks.push_back({{"posture", label}, {"peak_abs_moment_Nm", r(peak)}});

  Json catalog = {{"nominal", entry_json(d.match.nominal)}};
  catalog["softer"] = d.match.softer ? entry_json(*d.match.softer) : Json(nullptr);
  catalog["stiffer"] = d.match.stiffer ? entry_json(*d.match.stiffer) : Json(nullptr);

  Json warnings = Json::array();
  if (d.derived.never_unloads) warnings.push_back("zero-torque angle is negative; the spring never unloads in range");

  const double theta0 = d.derived.spec.pretension_theta0;
  return {
      {"worst_case", d.worst_case},
      {"curves", peaks},
      {"slope", r(d.fit.slope)},
      {"intercept", r(d.fit.intercept)},
      {"r_squared", r(d.fit.r_squared)},
      {"n_points", d.fit.n_points},
      {"k_Nm_per_rad", r(d.derived.spec.stiffness_k)},
      {"k_Nmm_per_deg", r(d.k_nmm_per_deg)},
      {"theta0_rad", r(theta0)},
      {"theta0_deg", r(units::rad_to_deg(theta0))},
      {"catalog", catalog},
      {"warnings", warnings},
  };
}

Json to_json(const trials::StudyReport& rep) {
  Json j;
  j["units"] = {{"angle", "deg"},
                {"rom", "deg"},
                {"tau_rms", "mN*m, motor side"},
                {"joint_torque", "N*m, joint side (tau_rms x ratio x efficiency)"}};
  j["parameters"] = {{"gear_ratio", r(rep.gear.ratio)},
                     {"efficiency", r(rep.gear.efficiency)},
                     {"torque_constant_NmA", r(rep.gear.torque_constant)},
                     {"angle_min_deg", r(rep.bounds.min_angle_deg)},
                     {"angle_max_deg", r(rep.bounds.max_angle_deg)},
                     {"max_invalid_fraction", r(rep.bounds.max_invalid_fraction)}};

  Json trials_json = Json::array();
  for (const auto& t : rep.trials) {
    const auto& m = t.metrics;
    trials_json.push_back({
        {"source", t.source},
        {"participant", t.meta.participant},
        {"posture", t.meta.posture},
        {"load", trials::to_string(t.meta.load)},
        {"spring", t.meta.spring},
        {"trial", t.meta.trial_index},
        {"rom_ab_deg", r(m.rom_ab)},
        {"rom_ad_deg", r(m.rom_ad)},
        {"rom_total_deg", r(m.rom_total)},
        {"tau_rms_mNm", r(m.tau_rms * 1000.0)},
        {"joint_torque_Nm", r(m.tau_rms * rep.gear.ratio * rep.gear.efficiency)},
        {"n_samples", m.n_samples},
        {"interpolated_fraction", r(m.interpolated_fraction)},
    });
  }
  j["trials"] = trials_json;

  Json rejected = Json::array();
  for (const auto& x : rep.rejected) {
    rejected.push_back({{"source", x.source}, {"reason", x.reason}, {"invalid_fraction", r(x.invalid_fraction)}});
  }
  j["rejected"] = rejected;

  auto dist_array = [](const std::vector<trials::GroupDistribution>& groups) {
    Json a = Json::array();
    for (const auto& g : groups) {
      Json e = {{"spring", g.spring},
                {"rom_total_deg", five_json(g.rom_total)},
                {"tau_rms_mNm", five_json(g.tau_rms, 1000.0)}};
      if (!g.posture.empty()) e["posture"] = g.posture;
      a.push_back(e);
    }
    return a;
  };
  j["distributions"] = {{"by_spring", dist_array(rep.by_spring)},
                        {"by_spring_posture", dist_array(rep.by_spring_posture)}};

  Json records = Json::array();
  for (const auto& x : rep.repeatability) {
    records.push_back({{"participant", x.participant},
                       {"posture", x.posture},
                       {"load", trials::to_string(x.load)},
                       {"spring", x.spring},
                       {"delta_rom_deg", r(x.delta_rom)}});
  }
  auto rep_array = [](const std::vector<trials::RepeatabilitySummary>& v) {
    Json a = Json::array();
    for (const auto& s : v) {
      Json e = mean_sd_json(s.delta_rom, "_deg");
      e["spring"] = s.spring;
      if (!s.posture.empty()) e["posture"] = s.posture;
      a.push_back(e);
    }
    return a;
  };
  j["repeatability"] = {{"records", records},
                        {"by_spring_posture", rep_array(rep.repeatability_by_spring_posture)},
                        {"by_spring", rep_array(rep.repeatability_by_spring)},
                        {"overall", mean_sd_json(rep.repeatability_overall.delta_rom, "_deg")}};

  Json friedman = Json::object();
  if (rep.friedman_rom) friedman["rom_total"] = friedman_json(*rep.friedman_rom);
  if (rep.friedman_torque) friedman["tau_rms"] = friedman_json(*rep.friedman_torque);
  j["friedman"] = friedman;

  Json likert = Json::array();
  for (const auto& s : rep.likert) {
    likert.push_back({{"item", trials::to_string(s.item)},
                      {"mean", r(s.score.mean)},
                      {"sd", r(s.score.sd)},
                      {"n", s.score.n},
                      {"single_response", s.single_response}});
  }
  j["likert"] = likert;
  j["warnings"] = rep.warnings;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << dump(j);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

void render_plot_csvs(const Json& study, const fs::path& out_dir) {
  if (!study.contains("trials") || !study.contains("repeatability")) {
    throw DomainError("report JSON lacks trials or repeatability sections");
  }
  fs::create_directories(out_dir);
  auto open = [&](const char* name) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw std::runtime_error((out_dir / name).string() + ": cannot open for writing");
    return out;
  };

  auto rom = open(kRomBoxplotCsv);
  auto torque = open(kTorqueBoxplotCsv);
  rom << "spring,posture,load,participant,trial,rom_ab_deg,rom_ad_deg,rom_total_deg\n";
  torque << "spring,posture,load,participant,trial,tau_rms_mNm,joint_torque_Nm\n";
  for (const auto& t : study.at("trials")) {
    std::ostringstream key;
    key << t.at("spring").get<std::string>() << ',' << t.at("posture").get<std::string>() << ','
        << t.at("load").get<std::string>() << ',' << t.at("participant").get<std::string>() << ','
        << t.at("trial").get<int>();
    rom << key.str() << ',' << fmt(t.at("rom_ab_deg")) << ',' << fmt(t.at("rom_ad_deg")) << ','
        << fmt(t.at("rom_total_deg")) << '\n';
    torque << key.str() << ',' << fmt(t.at("tau_rms_mNm")) << ',' << fmt(t.at("joint_torque_Nm")) << '\n';
  }

  auto rep = open(kRepeatabilityCsv);
  rep << "spring,posture,load,participant,delta_rom_deg\n";
  for (const auto& x : study.at("repeatability").at("records")) {
    rep << x.at("spring").get<std::string>() << ',' << x.at("posture").get<std::string>() << ','
        << x.at("load").get<std::string>() << ',' << x.at("participant").get<std::string>() << ','
        << fmt(x.at("delta_rom_deg")) << '\n';
  }
}

}  // namespace wristex::report
