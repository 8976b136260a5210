#include "wristex/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>

#include "wristex/errors.hpp"

namespace wristex::io {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  return out;
}

// Reads and checks the header line.
void expect_header(std::istream& in, const fs::path& path, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string(), 1, "file is empty");
  if (trim(line) != header) {
    throw ParseError(path.string(), 1, "expected header '" + std::string(header) + "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view field, bool allow_missing) {
  field = trim(field);
  if (field.empty() || field == "nan" || field == "NaN" || field == "NA") {
    if (allow_missing) return std::numeric_limits<double>::quiet_NaN();
    return std::nullopt;
  }
  if (field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return v;
}

void write_torque_curve(std::ostream& os, const biomech::TorqueCurve& curve) {
  os << kCurveHeader << '\n';
  for (const auto& s : curve.samples) os << format_double(s.angle) << ',' << format_double(s.moment) << '\n';
}

void write_torque_curve(const fs::path& path, const biomech::TorqueCurve& curve) {
  auto out = open_output(path);
  write_torque_curve(out, curve);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

biomech::TorqueCurve read_torque_curve(const fs::path& path) {
  auto in = open_input(path);
  expect_header(in, path, kCurveHeader);
  biomech::TorqueCurve curve;
  curve.posture_label = path.stem().string();
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw ParseError(path.string(), lineno, "expected 2 fields");
    const auto angle = parse_number(fields[0]);
    const auto moment = parse_number(fields[1]);
    if (!angle || !moment || !std::isfinite(*angle) || !std::isfinite(*moment)) {
      throw ParseError(path.string(), lineno, "malformed number");
    }
    curve.samples.push_back({*angle, *moment});
  }
  if (curve.samples.empty()) throw ParseError(path.string(), lineno, "curve has no samples");
  return curve;
}

std::vector<spring_design::SpringCatalogEntry> read_spring_catalog(const fs::path& path) {
  auto in = open_input(path);
  expect_header(in, path, kCatalogHeader);
  std::vector<spring_design::SpringCatalogEntry> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2 || fields[0].empty()) throw ParseError(path.string(), lineno, "expected name,stiffness");
    const auto k = parse_number(fields[1]);
    if (!k || !(*k > 0.0)) throw ParseError(path.string(), lineno, "stiffness must be a positive number");
    out.push_back({fields[0], *k});
  }
  if (out.empty()) throw ParseError(path.string(), lineno, "catalog has no entries");
  return out;
}

std::optional<trials::TrialMeta> parse_trial_filename(const std::string& filename) {
  static const std::regex pattern(R"(^P([A-Za-z0-9]+)_POS([A-Za-z0-9]+)_(unloaded|loaded_300g)_(S[0-9]+)_T([0-9]+)\.csv$)");
  std::smatch m;
  if (!std::regex_match(filename, m, pattern)) return std::nullopt;
  trials::TrialMeta meta;
  meta.participant = m[1];
  meta.posture = m[2];
  meta.load = m[3] == "unloaded" ? trials::LoadCondition::Unloaded : trials::LoadCondition::Loaded300g;
  meta.spring = m[4];
  meta.trial_index = std::stoi(m[5]);
  return meta;
}

std::string trial_filename(const trials::TrialMeta& meta) {
  return "P" + meta.participant + "_POS" + meta.posture + "_" + trials::to_string(meta.load) + "_" + meta.spring +
         "_T" + std::to_string(meta.trial_index) + ".csv";
}

trials::TrialLog read_trial_log(const fs::path& path) {
  const auto meta = parse_trial_filename(path.filename().string());
  if (!meta) throw ParseError(path.string(), 0, "file name does not follow the trial naming convention");

  auto in = open_input(path);
  expect_header(in, path, kTrialHeader);
  trials::TrialLog log;
  log.meta = *meta;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() == 3) fields.emplace_back();
    if (fields.size() != 4) throw ParseError(path.string(), lineno, "expected 4 fields");

    trials::TrialSample s;
    const auto t = parse_number(fields[0]);
    if (!t || !std::isfinite(*t)) throw ParseError(path.string(), lineno, "malformed timestamp");
    s.t = *t;
    const auto angle = parse_number(fields[1], true);
    const auto current = parse_number(fields[2], true);
    if (!angle || !current) throw ParseError(path.string(), lineno, "malformed angle or current");
    s.angle_deg = *angle;
    s.current_mA = *current;
    if (fields[3] == "B2") s.button = trials::Button::Abduct;
    else if (fields[3] == "B3") s.button = trials::Button::Adduct;
    else if (fields[3] == "B4") s.button = trials::Button::Neutral;
    else if (!fields[3].empty()) throw ParseError(path.string(), lineno, "unknown button '" + fields[3] + "'");

    if (!log.samples.empty() && !(s.t > log.samples.back().t)) {
      throw ParseError(path.string(), lineno, "timestamps must be strictly increasing");
    }
    log.samples.push_back(s);
  }
  if (log.samples.empty()) throw ParseError(path.string(), lineno, "trial has no samples");
  return log;
}

void write_trial_log(const fs::path& path, const trials::TrialLog& log) {
  auto out = open_output(path);
  out << kTrialHeader << '\n';
  for (const auto& s : log.samples) {
    out << format_double(s.t) << ',' << (std::isfinite(s.angle_deg) ? format_double(s.angle_deg) : "") << ','
        << (std::isfinite(s.current_mA) ? format_double(s.current_mA) : "") << ','
        << (s.button ? trials::to_string(*s.button) : "") << '\n';
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<trials::LikertResponse> read_likert(const fs::path& path) {
  auto in = open_input(path);
  expect_header(in, path, kLikertHeader);
  std::vector<trials::LikertResponse> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) throw ParseError(path.string(), lineno, "expected 3 fields");
    const auto item = trials::parse_likert_item(fields[1]);
    if (!item) throw ParseError(path.string(), lineno, "unknown questionnaire item '" + fields[1] + "'");
    const auto score = parse_number(fields[2]);
    if (!score || *score != std::floor(*score) || *score < 1 || *score > 10) {
      throw ParseError(path.string(), lineno, "score must be an integer in [1,10]");
    }
    out.push_back({fields[0], *item, static_cast<int>(*score)});
  }
  return out;
}

std::vector<fs::path> list_trial_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && parse_trial_filename(entry.path().filename().string())) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wristex::io
