#include "wristex/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "wristex/errors.hpp"
#include "wristex/io.hpp"
#include "wristex/units.hpp"

namespace wristex {

namespace pt = boost::property_tree;
using units::deg_to_rad;

namespace {

double to_number(const std::string& section, const std::string& key, const std::string& text) {
  const auto v = io::parse_number(text);
  if (!v || !std::isfinite(*v)) throw ConfigError("[" + section + "] " + key + ": '" + text + "' is not a number");
  return *v;
}

biomech::BodySegment& segment(ToolkitConfig& cfg, const char* name) {
  auto it = std::find_if(cfg.segments.begin(), cfg.segments.end(), [&](const auto& s) { return s.name == name; });
  if (it == cfg.segments.end()) {
    cfg.segments.push_back({name, 0.0, 1.0, 0.5});
    return cfg.segments.back();
  }
  return *it;
}

std::vector<biomech::Harmonic> parse_harmonics(const std::string& text) {
  std::vector<biomech::Harmonic> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("[motion] harmonics: expected order:coefficient_deg, got '" + item + "'");
    const double order = to_number("motion", "harmonics", item.substr(0, colon));
    if (order < 1 || order != static_cast<int>(order)) throw ConfigError("[motion] harmonics: order must be a positive integer");
    out.push_back({static_cast<int>(order), deg_to_rad(to_number("motion", "harmonics", item.substr(colon + 1)))});
  }
  return out;
}

}  // namespace

void ToolkitConfig::validate() const {
  for (const auto& s : segments) s.validate();
  for (const char* name : {biomech::kUpperArm, biomech::kForearm, biomech::kHand}) {
    if (std::none_of(segments.begin(), segments.end(), [&](const auto& s) { return s.name == name; })) {
      throw ConfigError(std::string("segment chain is missing '") + name + "'");
    }
  }
  for (const auto& [label, p] : postures) p.validate();
  if (!(limits.min_angle < limits.max_angle)) throw ConfigError("joint limits are inverted");
  motion.validate(limits);
  load.validate();
  if (!std::isfinite(gravity) || gravity < 0.0) throw ConfigError("gravity must be >= 0");
  if (catalog.empty()) throw ConfigError("spring catalog is empty");
  for (const auto& e : catalog) {
    if (!(e.stiffness > 0.0)) throw ConfigError("catalog entry '" + e.name + "' has non-positive stiffness");
  }
  route.validate();
  gear.validate();
  if (gear.efficiency < 0.5) throw ConfigError("transmission efficiency must be in [0.5, 1]");
  bounds.validate();
}

const biomech::ArmPosture& ToolkitConfig::posture(biomech::PostureLabel label) const {
  auto it = postures.find(label);
  if (it == postures.end()) throw ConfigError("posture " + biomech::to_string(label) + " is not configured");
  return it->second;
}

ToolkitConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  ToolkitConfig cfg;
  std::optional<double> body_mass;
  std::optional<double> hand_fraction;
  std::optional<double> hand_mass;
  biomech::Sex sex = biomech::Sex::Male;

  using Setter = std::function<void(double)>;
  auto seg_setters = [&](const char* name) -> std::map<std::string, Setter> {
    const std::string p = name;
    return {
        {p + "_mass_kg", [&cfg, name](double v) { segment(cfg, name).mass = v; }},
        {p + "_length_m", [&cfg, name](double v) { segment(cfg, name).length = v; }},
        {p + "_com_ratio", [&cfg, name](double v) { segment(cfg, name).com_ratio = v; }},
    };
  };

  for (const auto& [section, body] : tree) {
    if (body.data().size() && body.empty()) {
      throw ConfigError("config: key '" + section + "' must be inside a section");
    }
    for (const auto& [key, node] : body) {
      const std::string value = node.data();
      auto number = [&] { return to_number(section, key, value); };
      auto unknown = [&] { return ConfigError("config: unknown key '" + key + "' in [" + section + "]"); };

      if (section == "segments") {
        if (key == "body_mass_kg") body_mass = number();
        else if (key == "hand_mass_fraction") hand_fraction = number();
        else if (key == "hand_mass_kg") hand_mass = number();
        else if (key == "sex") {
          if (value == "male") sex = biomech::Sex::Male;
          else if (value == "female") sex = biomech::Sex::Female;
          else throw ConfigError("[segments] sex must be male or female");
        } else {
          bool handled = false;
          for (const char* name : {biomech::kUpperArm, biomech::kForearm, biomech::kHand}) {
            auto setters = seg_setters(name);
            if (auto it = setters.find(key); it != setters.end() && key != "hand_mass_kg") {
              it->second(number());
              handled = true;
              break;
            }
          }
          if (!handled) throw unknown();
        }
      } else if (section.rfind("posture_", 0) == 0) {
        const auto label = biomech::parse_posture_label(section.substr(8));
        if (!label) throw ConfigError("config: unknown posture section [" + section + "]");
        auto [it, inserted] = cfg.postures.try_emplace(*label, biomech::ArmPosture{0.0, 0.0, 0.0, *label});
        if (key == "shoulder_flexion_deg") it->second.shoulder_flexion = deg_to_rad(number());
        else if (key == "elbow_flexion_deg") it->second.elbow_flexion = deg_to_rad(number());
        else if (key == "pronation_deg") it->second.forearm_pronation = deg_to_rad(number());
        else throw unknown();
      } else if (section == "motion") {
        if (key == "mean_deg") cfg.motion.mean_angle = deg_to_rad(number());
        else if (key == "amplitude_deg") cfg.motion.amplitude = deg_to_rad(number());
        else if (key == "period_s") cfg.motion.period = number();
        else if (key == "harmonics") cfg.motion.harmonics = parse_harmonics(value);
        else throw unknown();
      } else if (section == "load") {
        if (key == "handheld_mass_kg") cfg.load.handheld_mass = number();
        else if (key == "grip_offset_m") cfg.load.grip_offset = number();
        else throw unknown();
      } else if (section == "simulation") {
        if (key == "gravity_mps2") cfg.gravity = number();
        else if (key == "joint_min_deg") cfg.limits.min_angle = deg_to_rad(number());
        else if (key == "joint_max_deg") cfg.limits.max_angle = deg_to_rad(number());
        else throw unknown();
      } else if (section == "catalog") {
        if (key == "path") {
          const auto path = base_dir / value;
          if (!std::filesystem::exists(path)) throw ConfigError("[catalog] path '" + path.string() + "' does not exist");
          try {
            cfg.catalog = io::read_spring_catalog(path);
          } catch (const ParseError& e) {
            throw ConfigError(e.what());
          }
        } else {
          throw unknown();
        }
      } else if (section == "transmission") {
        if (key == "lever_radius_m") cfg.route.lever_radius = number();
        else if (key == "friction_mu") cfg.route.friction_mu = number();
        else if (key == "wrap_angle_rad") cfg.route.wrap_angle = number();
        else if (key == "gear_ratio") cfg.gear.ratio = number();
        else if (key == "efficiency") cfg.gear.efficiency = number();
        else if (key == "torque_constant_NmA") cfg.gear.torque_constant = number();
        else throw unknown();
      } else if (section == "analysis") {
        if (key == "angle_min_deg") cfg.bounds.min_angle_deg = number();
        else if (key == "angle_max_deg") cfg.bounds.max_angle_deg = number();
        else if (key == "max_invalid_fraction") cfg.bounds.max_invalid_fraction = number();
        else if (key == "sample_period_s") cfg.bounds.nominal_period_s = number();
        else throw unknown();
      } else {
        throw ConfigError("config: unknown section [" + section + "]");
      }
    }
  }

  if (hand_mass && (body_mass || hand_fraction)) {
    throw ConfigError("[segments] give either hand_mass_kg or body_mass_kg, not both");
  }
  if (hand_mass) {
    segment(cfg, biomech::kHand).mass = *hand_mass;
  } else if (body_mass || hand_fraction) {
    try {
      segment(cfg, biomech::kHand).mass = biomech::hand_mass_from_body(body_mass.value_or(80.0), sex, hand_fraction);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[segments] ") + e.what());
    }
  }

  cfg.validate();
  return cfg;
}

ToolkitConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace wristex
