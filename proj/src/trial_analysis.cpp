#include "wristex/trial_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

#include "wristex/errors.hpp"
#include "wristex/units.hpp"

namespace wristex::trials {

std::string to_string(Button b) {
  switch (b) {
    case Button::Abduct: return "B2";
    case Button::Adduct: return "B3";
    case Button::Neutral: return "B4";
  }
  return "";
}

std::string to_string(LoadCondition load) {
  return load == LoadCondition::Unloaded ? "unloaded" : "loaded_300g";
}

std::string to_string(LikertItem item) {
  switch (item) {
    case LikertItem::Size: return "size";
    case LikertItem::Weight: return "weight";
    case LikertItem::DonDoff: return "don_doff";
  }
  return "";
}

std::optional<LikertItem> parse_likert_item(const std::string& text) {
  if (text == "size") return LikertItem::Size;
  if (text == "weight") return LikertItem::Weight;
  if (text == "don_doff") return LikertItem::DonDoff;
  return std::nullopt;
}

void AnalysisBounds::validate() const {
  if (!(min_angle_deg < max_angle_deg)) throw ConfigError("analysis angle bounds are inverted");
  if (!(max_invalid_fraction >= 0.0 && max_invalid_fraction <= 1.0)) {
    throw ConfigError("max invalid fraction must be in [0,1]");
  }
  if (!(nominal_period_s > 0.0)) throw ConfigError("nominal sample period must be > 0");
}

CleanResult clean_interpolate(const TrialLog& log, const AnalysisBounds& bounds) {
  bounds.validate();
  const auto& raw = log.samples;
  if (raw.empty()) throw DomainError("trial log is empty");

  auto valid = [&](const TrialSample& s) {
    return std::isfinite(s.angle_deg) && std::isfinite(s.current_mA) && s.angle_deg >= bounds.min_angle_deg &&
           s.angle_deg <= bounds.max_angle_deg;
  };

  std::vector<std::size_t> good;
  good.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (valid(raw[i])) good.push_back(i);
  }

  CleanResult out;
  out.log.meta = log.meta;
  const std::size_t n_invalid = raw.size() - good.size();
  out.invalid_fraction = static_cast<double>(n_invalid) / static_cast<double>(raw.size());
  if (out.invalid_fraction > bounds.max_invalid_fraction || good.empty()) {
    throw TrialRejected("invalid sample fraction exceeds the repair threshold", out.invalid_fraction);
  }

  out.dropped = good.front() + (raw.size() - 1 - good.back());
  out.repaired = n_invalid - out.dropped;
  out.log.samples.reserve(good.back() - good.front() + 1);

  std::size_t next_good = 0;  // index into `good` of the first valid sample at or after i
  for (std::size_t i = good.front(); i <= good.back(); ++i) {
    while (good[next_good] < i) ++next_good;
    if (good[next_good] == i) {
      out.log.samples.push_back(raw[i]);
      continue;
    }
    const TrialSample& a = raw[good[next_good - 1]];
    const TrialSample& b = raw[good[next_good]];
    const double w = (raw[i].t - a.t) / (b.t - a.t);
    TrialSample s = raw[i];
    s.angle_deg = a.angle_deg + (b.angle_deg - a.angle_deg) * w;
    s.current_mA = a.current_mA + (b.current_mA - a.current_mA) * w;
    out.log.samples.push_back(s);
  }
  return out;
}

RomMetrics rom_metrics(const TrialLog& log) {
  if (log.samples.empty()) throw DomainError("trial log is empty");
  double hi = log.samples.front().angle_deg;
  double lo = hi;
  for (const auto& s : log.samples) {
    hi = std::max(hi, s.angle_deg);
    lo = std::min(lo, s.angle_deg);
  }
  RomMetrics rom;
  rom.rom_ab = std::max(hi, 0.0);
  rom.rom_ad = std::max(-lo, 0.0);
  rom.rom_total = rom.rom_ab + rom.rom_ad;
  return rom;
}

std::vector<TorquePoint> torque_series(const TrialLog& log, const transmission::Gearing& gear) {
  gear.validate();
  std::vector<TorquePoint> out;
  out.reserve(log.samples.size());
  for (const auto& s : log.samples) {
    out.push_back({s.t, gear.torque_constant * units::milliamp_to_amp(s.current_mA)});
  }
  return out;
}

double rms_torque(const TrialLog& log, const transmission::Gearing& gear) {
  gear.validate();
  if (log.samples.empty()) throw DomainError("trial log is empty");
  double sum_sq = 0.0;
  for (const auto& s : log.samples) {
    const double amps = units::milliamp_to_amp(s.current_mA);
    sum_sq += amps * amps;
  }
  return gear.torque_constant * std::sqrt(sum_sq / static_cast<double>(log.samples.size()));
}

double joint_torque_estimate(double tau_motor, const transmission::Gearing& gear) {
  gear.validate();
  if (!std::isfinite(tau_motor) || tau_motor < 0.0) throw DomainError("motor torque must be >= 0");
  return tau_motor * gear.ratio * gear.efficiency;
}

TrialMetrics analyze_trial(const TrialLog& log, const transmission::Gearing& gear, const AnalysisBounds& bounds) {
  const CleanResult cleaned = clean_interpolate(log, bounds);
  const RomMetrics rom = rom_metrics(cleaned.log);
  TrialMetrics m;
  m.rom_ab = rom.rom_ab;
  m.rom_ad = rom.rom_ad;
  m.rom_total = rom.rom_total;
  m.tau_rms = rms_torque(cleaned.log, gear);
  m.n_samples = cleaned.log.samples.size();
  m.interpolated_fraction = cleaned.invalid_fraction;
  return m;
}

RepeatabilityRecord repeatability(const TrialResult& first, const TrialResult& second) {
  if (!first.meta.same_condition(second.meta)) {
    throw DomainError("repeatability needs trials of the same participant, posture, load and spring");
  }
  return {first.meta.participant, first.meta.posture, first.meta.load, first.meta.spring,
          std::abs(first.metrics.rom_total - second.metrics.rom_total)};
}

std::vector<LikertSummary> likert_summary(std::span<const LikertResponse> responses) {
  std::map<LikertItem, std::vector<double>> by_item;
  for (const auto& r : responses) {
    if (r.score < 1 || r.score > 10) throw DomainError("Likert score out of [1,10]");
    by_item[r.item].push_back(static_cast<double>(r.score));
  }
  std::vector<LikertSummary> out;
  for (const auto& [item, scores] : by_item) {
    out.push_back({item, stats::mean_sd(scores), scores.size() == 1});
  }
  return out;
}

namespace {

struct Outcome {
  std::optional<TrialMetrics> metrics;
  Rejection rejection;
};

Outcome evaluate(const TrialInput& in, const transmission::Gearing& gear, const AnalysisBounds& bounds) {
  Outcome o;
  try {
    o.metrics = analyze_trial(in.log, gear, bounds);
  } catch (const TrialRejected& e) {
    o.rejection = {in.source, e.what(), e.invalid_fraction()};
  } catch (const DomainError& e) {
    o.rejection = {in.source, e.what(), 1.0};
  }
  return o;
}

GroupDistribution distribution(std::string spring, std::string posture, const std::vector<const TrialResult*>& group) {
  std::vector<double> rom;
  std::vector<double> tau;
  for (const auto* t : group) {
    rom.push_back(t->metrics.rom_total);
    tau.push_back(t->metrics.tau_rms);
  }
  return {std::move(spring), std::move(posture), stats::five_number(rom), stats::five_number(tau)};
}

std::optional<stats::FriedmanResult> friedman_over_springs(const std::vector<TrialResult>& trials,
                                                           double TrialMetrics::*metric,
                                                           const std::string& name,
                                                           std::vector<std::string>& warnings) {
  std::map<std::string, std::map<std::string, std::vector<double>>> cells;  // participant -> spring -> values
  std::map<std::string, int> springs;
  for (const auto& t : trials) {
    cells[t.meta.participant][t.meta.spring].push_back(t.metrics.*metric);
    springs[t.meta.spring] = 0;
  }
  if (cells.size() < 2 || springs.size() < 2) {
    warnings.push_back("Friedman test on " + name + " omitted: needs at least 2 participants and 2 springs");
    return std::nullopt;
  }
  std::vector<std::vector<double>> table;
  for (const auto& [participant, by_spring] : cells) {
    std::vector<double> row;
    for (const auto& [spring, unused] : springs) {
      auto it = by_spring.find(spring);
      if (it == by_spring.end()) {
        warnings.push_back("Friedman test on " + name + " omitted: participant " + participant +
                           " has no accepted trials with spring " + spring);
        return std::nullopt;
      }
      row.push_back(std::accumulate(it->second.begin(), it->second.end(), 0.0) /
                    static_cast<double>(it->second.size()));
    }
    table.push_back(std::move(row));
  }
  return stats::friedman_test(table);
}

}  // namespace

StudyReport aggregate_report(std::span<const TrialInput> trials, const transmission::Gearing& gear,
                             const AnalysisBounds& bounds, std::span<const LikertResponse> likert) {
  gear.validate();
  bounds.validate();

  std::vector<Outcome> outcomes(trials.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(trials.size(), 1));
  std::vector<std::future<void>> pending;
  for (std::size_t w = 0; w < workers; ++w) {
    pending.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < trials.size(); i += workers) outcomes[i] = evaluate(trials[i], gear, bounds);
    }));
  }
  for (auto& f : pending) f.get();

  StudyReport report;
  report.gear = gear;
  report.bounds = bounds;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    Outcome& o = outcomes[i];
    if (o.metrics) {
      report.trials.push_back({trials[i].source, trials[i].log.meta, *o.metrics});
    } else {
      report.rejected.push_back(std::move(o.rejection));
    }
  }
  std::sort(report.trials.begin(), report.trials.end(),
            [](const auto& a, const auto& b) { return a.source < b.source; });
  std::sort(report.rejected.begin(), report.rejected.end(),
            [](const auto& a, const auto& b) { return a.source < b.source; });

  std::map<std::string, std::vector<const TrialResult*>> by_spring;
  std::map<std::pair<std::string, std::string>, std::vector<const TrialResult*>> by_spring_posture;
  std::map<std::tuple<std::string, std::string, LoadCondition, std::string>, std::vector<const TrialResult*>> by_condition;
  for (const auto& t : report.trials) {
    by_spring[t.meta.spring].push_back(&t);
    by_spring_posture[{t.meta.spring, t.meta.posture}].push_back(&t);
    by_condition[{t.meta.spring, t.meta.posture, t.meta.load, t.meta.participant}].push_back(&t);
  }
  for (const auto& [spring, group] : by_spring) {
    report.by_spring.push_back(distribution(spring, "", group));
  }
  for (const auto& [key, group] : by_spring_posture) {
    report.by_spring_posture.push_back(distribution(key.first, key.second, group));
  }

  // Consecutive trials of the same condition form repeatability pairs.
  for (auto& [key, group] : by_condition) {
    std::sort(group.begin(), group.end(),
              [](const auto* a, const auto* b) { return a->meta.trial_index < b->meta.trial_index; });
    for (std::size_t i = 1; i < group.size(); ++i) {
      report.repeatability.push_back(repeatability(*group[i - 1], *group[i]));
    }
  }
  std::map<std::pair<std::string, std::string>, std::vector<double>> rep_sp;
  std::map<std::string, std::vector<double>> rep_s;
  std::vector<double> rep_all;
  for (const auto& r : report.repeatability) {
    rep_sp[{r.spring, r.posture}].push_back(r.delta_rom);
    rep_s[r.spring].push_back(r.delta_rom);
    rep_all.push_back(r.delta_rom);
  }
  for (const auto& [key, v] : rep_sp) {
    report.repeatability_by_spring_posture.push_back({key.first, key.second, stats::mean_sd(v)});
  }
  for (const auto& [spring, v] : rep_s) {
    report.repeatability_by_spring.push_back({spring, "", stats::mean_sd(v)});
  }
  report.repeatability_overall = {"", "", stats::mean_sd(rep_all)};

  if (report.trials.empty()) {
    report.warnings.push_back("no accepted trials");
  } else {
    report.friedman_rom = friedman_over_springs(report.trials, &TrialMetrics::rom_total, "rom_total", report.warnings);
    report.friedman_torque = friedman_over_springs(report.trials, &TrialMetrics::tau_rms, "tau_rms", report.warnings);
  }
  report.likert = likert_summary(likert);
  for (const auto& s : report.likert) {
    if (s.single_response) {
      report.warnings.push_back("Likert item " + to_string(s.item) + " has a single response; sd set to 0");
    }
  }
  return report;
}

}  // namespace wristex::trials
