// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "wristex/cli.hpp"
#include "wristex/config.hpp"
#include "wristex/errors.hpp"
#include "wristex/io.hpp"
#include "wristex/report.hpp"
#include "wristex/spring_design.hpp"
#include "wristex/statistics.hpp"
#include "wristex/trial_analysis.hpp"
#include "wristex/transmission.hpp"

using namespace wristex;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

biomech::TorqueCurve reference_curve(int n) {
  biomech::TorqueCurve c;
  c.posture_label = "P3";
  for (int i = 0; i < n; ++i) {
    const double th = -0.77 + 1.29 * i / (n - 1);
    c.samples.push_back({th, -0.7054 * th + 0.4157});
  }
  return c;
}

void spring_derivation() {
  const auto fit = spring_design::fit_linear(reference_curve(50));
  const auto d = spring_design::derive_spring(fit);
  const double k_nmm = spring_design::stiffness_to_nmm_per_deg(d.spec.stiffness_k);
  const bool ok = near(d.spec.stiffness_k, 0.7054, 1e-9) && near(k_nmm, 12.31, 0.10) && near(k_nmm, 12.32, 0.10) &&
                  near(d.spec.pretension_theta0, 0.589, 0.005);
  verdict(1, "spring derivation", ok,
          fmt("k=%.6f N*m/rad (%.4f N*mm/deg), theta0=%.5f rad", d.spec.stiffness_k, k_nmm, d.spec.pretension_theta0));
}

void catalog_selection() {
  const auto cat = spring_design::default_catalog();
  const auto m = spring_design::catalog_match(12.32, cat);
  const bool ok = m.nominal.name == "S2" && m.softer && m.softer->name == "S1" && m.stiffer && m.stiffer->name == "S3";
  verdict(2, "catalog selection", ok,
          fmt("nominal=%s softer=%s stiffer=%s", m.nominal.name.c_str(), m.softer ? m.softer->name.c_str() : "-",
              m.stiffer ? m.stiffer->name.c_str() : "-"));
}

void friedman_p_values() {
  const double p1 = stats::chi2_survival(2.8, 2);
  const double p2 = stats::chi2_survival(1.2, 2);
  verdict(3, "Friedman p-value reproduction", near(p1, 0.2466, 0.001) && near(p2, 0.5488, 0.001),
          fmt("p(2.8)=%.5f p(1.2)=%.5f", p1, p2));
}

void friedman_oracle() {
  const std::vector<std::vector<double>> data(5, {1.0, 2.0, 3.0});
  const auto r = stats::friedman_test(data);
  const double oracle_chi2 = oracle::friedman_variance_form(data);
  verdict(4, "Friedman oracle", r.chi2 == 10.0 && oracle_chi2 == 10.0 && near(r.p, std::exp(-5.0), 1e-6),
          fmt("chi2=%.12g p=%.9f (e^-5=%.9f)", r.chi2, r.p, std::exp(-5.0)));
}

void torque_chain() {
  trials::TrialLog log;
  for (int i = 0; i < 100; ++i) log.samples.push_back({0.01 * i, 0.0, 476.0, {}});
  const transmission::Gearing gear{128.0, 0.78, 0.0105};
  const double tau = trials::rms_torque(log, gear);
  const double joint = trials::joint_torque_estimate(tau, gear);
  const double ideal = trials::joint_torque_estimate(tau, {128.0, 1.0, 0.0105});
  const bool ok = near(tau * 1000.0, 4.998, 5e-4) && near(joint, 0.499, 5e-4) && std::abs(joint / 0.5 - 1.0) <= 0.05 &&
                  near(ideal, 0.640, 5e-4);
  verdict(5, "torque chain consistency", ok,
          fmt("tau_rms=%.4f mN*m, joint=%.4f N*m (eta 0.78), ideal=%.4f N*m", tau * 1000.0, joint, ideal));
}

void capstan_properties() {
  using transmission::FrictionDirection;
  bool identities = true;
  bool multiplicative = true;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_rel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double f = 500.0 * u(rng), mu = 0.5 * u(rng), a = 6.0 * u(rng), b = 6.0 * u(rng);
    for (auto dir : {FrictionDirection::Opposing, FrictionDirection::Aiding}) {
      identities &= transmission::capstan_transmit(f, {mu, 0.0, 0.025}, dir) == f;
      identities &= transmission::capstan_transmit(f, {0.0, a, 0.025}, dir) == f;
      const double chained = transmission::capstan_transmit(transmission::capstan_transmit(f, {mu, a, 0.025}, dir),
                                                            {mu, b, 0.025}, dir);
      const double direct = transmission::capstan_transmit(f, {mu, a + b, 0.025}, dir);
      if (direct > 0.0) worst_rel = std::max(worst_rel, std::abs(chained - direct) / direct);
    }
  }
  multiplicative = worst_rel <= 1e-12;
  const double f = transmission::capstan_transmit(100.0, {0.04, units::kPi, 0.025}, FrictionDirection::Opposing);
  const double oracle_f = 100.0 * oracle::exp_series(0.04 * units::kPi);
  const bool value = near(f, 113.39, 0.01) && near(f, oracle_f, 0.01);
  verdict(6, "capstan properties", identities && multiplicative && value,
          fmt("identities=%s max_rel_err=%.2e F=%.4f N (series %.4f N)", identities ? "exact" : "broken", worst_rel, f,
              oracle_f));
}

void rom_equivalence(const report::Json& fixture_report) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> centre(-40.0, 40.0), spread(0.0, 40.0);
  std::uniform_int_distribution<int> len(1, 200);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const double c = centre(rng), s = spread(rng);
    std::uniform_real_distribution<double> v(c - s, c + s);
    trials::TrialLog log;
    std::vector<double> theta(len(rng));
    for (std::size_t k = 0; k < theta.size(); ++k) {
      theta[k] = v(rng);
      log.samples.push_back({0.01 * k, theta[k], 0.0, {}});
    }
    const auto got = trials::rom_metrics(log);
    const auto want = oracle::rom_scan(theta);
    if (got.rom_ab != want.ab || got.rom_ad != want.ad || got.rom_total != want.total) ++mismatches;
  }

  // The report stores rounded values; recompute each accepted fixture trial.
  int sum_violations = 0;
  std::size_t checked = 0;
  const fs::path study = fs::path(WRISTEX_FIXTURE_DIR) / "study";
  for (const auto& t : fixture_report.at("trials")) {
    const auto m = trials::analyze_trial(io::read_trial_log(study / t.at("source").get<std::string>()),
                                         transmission::Gearing{});
    if (m.rom_total != m.rom_ab + m.rom_ad) ++sum_violations;
    ++checked;
  }
  verdict(7, "ROM metrics equivalence", mismatches == 0 && sum_violations == 0 && checked > 0,
          fmt("%d/1000 oracle mismatches, %d/%zu fixture trials violate total = ab + ad", mismatches, sum_violations,
              checked));
}

void simulation_linearity() {
  const ToolkitConfig cfg;
  std::vector<biomech::TorqueCurve> curves;
  std::string detail;
  bool all_linear = true;
  for (const auto& [label, posture] : cfg.postures) {
    curves.push_back(
        biomech::sweep_torque_curve(cfg.segments, posture, cfg.motion, cfg.load, 50, cfg.gravity, cfg.limits));
    const auto fit = spring_design::fit_linear(curves.back());
    all_linear &= fit.r_squared >= 0.9;
    detail += fmt("%s R2=%.4f peak=%.4f; ", biomech::to_string(label).c_str(), fit.r_squared,
                  curves.back().peak_abs_moment());
  }
  const std::string worst = spring_design::worst_case_select(curves).posture_label;
  detail += "worst=" + worst;
  verdict(8, "simulation linearity", all_linear && worst == "P3", detail);
}

void regression_robustness() {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto c = reference_curve(100);
  std::vector<double> x, y;
  for (auto& s : c.samples) {
    s.moment += noise(rng);
    x.push_back(s.angle);
    y.push_back(s.moment);
  }
  const auto fit = spring_design::fit_linear(c);
  const auto [slope, intercept] = oracle::normal_equations_fit(x, y);
  const double e_slope = std::abs(fit.slope / slope - 1.0);
  const double e_int = std::abs(fit.intercept / intercept - 1.0);
  const double t_slope = std::abs(fit.slope / -0.7054 - 1.0);
  const double t_int = std::abs(fit.intercept / 0.4157 - 1.0);
  verdict(9, "regression robustness", e_slope <= 0.02 && e_int <= 0.02 && t_slope <= 0.02 && t_int <= 0.02,
          fmt("slope=%.5f intercept=%.5f; vs oracle %.1e/%.1e, vs truth %.2f%%/%.2f%%", fit.slope, fit.intercept,
              e_slope, e_int, 100 * t_slope, 100 * t_int));
}

void interpolation_contract(const report::Json& fixture_report) {
  std::vector<double> a(100, 0.0);
  a[49] = 4.0;
  a[50] = NAN;
  a[51] = 6.0;
  trials::TrialLog log;
  for (std::size_t i = 0; i < a.size(); ++i) log.samples.push_back({0.01 * i, a[i], 400.0, {}});
  const auto cleaned = trials::clean_interpolate(log);
  const bool midpoint = cleaned.log.samples[50].angle_deg == 5.0 && cleaned.invalid_fraction == 0.01;

  // 6 of 100 invalid must be rejected.
  for (int k : {10, 20, 30, 40, 60}) log.samples[k].angle_deg = NAN;
  bool rejected = false;
  try {
    trials::clean_interpolate(log);
  } catch (const TrialRejected&) {
    rejected = true;
  }

  bool reported = false;
  for (const auto& r : fixture_report.at("rejected")) {
    reported |= r.at("source") == "P1_POS1_unloaded_S1_T3.csv" && r.at("invalid_fraction").get<double>() > 0.05;
  }
  bool none_accepted = true;
  for (const auto& t : fixture_report.at("trials")) none_accepted &= t.at("interpolated_fraction").get<double>() <= 0.05;
  verdict(10, "interpolation contract", midpoint && rejected && reported && none_accepted,
          fmt("midpoint=%.1f, 6%% gap %s, fixture gap trial %s", cleaned.log.samples[50].angle_deg,
              rejected ? "rejected" : "accepted", reported ? "listed under rejected" : "missing from rejected"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_analyze(const fs::path& out) {
  const std::string study = (fs::path(WRISTEX_FIXTURE_DIR) / "study").string();
  const std::string out_s = out.string();
  const char* argv[] = {"wristex", "analyze", study.c_str(), "--out", out_s.c_str()};
  std::ostringstream sink_out, sink_err;
  return cli::run(5, argv, sink_out, sink_err);
}

// Compares a report value to a ground-truth value at the report's precision.
bool same(const report::Json& got, const report::Json& want) {
  return got.get<double>() == report::round_significant(want.get<double>());
}

std::string ground_truth_mismatch(const report::Json& rep, const report::Json& truth) {
  std::map<std::string, const report::Json*> by_source;
  for (const auto& t : rep.at("trials")) by_source[t.at("source").get<std::string>()] = &t;
  if (by_source.size() != truth.at("trials").size()) return "accepted trial count differs";
  for (const auto& [source, want] : truth.at("trials").items()) {
    auto it = by_source.find(source);
    if (it == by_source.end()) return source + " missing";
    for (const auto& [key, value] : want.items()) {
      if (!same(it->second->at(key), value)) return source + " " + key;
    }
  }

  if (rep.at("rejected").size() != truth.at("rejected").size()) return "rejected count differs";
  for (std::size_t i = 0; i < truth.at("rejected").size(); ++i) {
    const auto& g = rep.at("rejected")[i];
    const auto& w = truth.at("rejected")[i];
    if (g.at("source") != w.at("source") || !same(g.at("invalid_fraction"), w.at("invalid_fraction")))
      return "rejected entry " + std::to_string(i);
  }

  for (const auto& g : rep.at("repeatability").at("by_spring")) {
    const auto& w = truth.at("repeatability_by_spring").at(g.at("spring").get<std::string>());
    if (!same(g.at("mean_deg"), w.at("mean_deg")) || !same(g.at("sd_deg"), w.at("sd_deg")) || g.at("n") != w.at("n"))
      return "repeatability " + g.at("spring").get<std::string>();
  }

  for (const char* key : {"rom_total", "tau_rms"}) {
    const auto& g = rep.at("friedman").at(key);
    const auto& w = truth.at("friedman").at(key);
    if (!same(g.at("chi2"), w.at("chi2")) || !same(g.at("p"), w.at("p")) || g.at("df") != w.at("df"))
      return std::string("friedman ") + key;
  }

  for (const auto& g : rep.at("likert")) {
    const auto& w = truth.at("likert").at(g.at("item").get<std::string>());
    if (!same(g.at("mean"), w.at("mean")) || !same(g.at("sd"), w.at("sd")) || g.at("n") != w.at("n"))
      return "likert " + g.at("item").get<std::string>();
  }
  return "";
}

struct FixtureRun {
  report::Json report;
  bool identical = false;
  std::size_t bytes = 0;
  std::string mismatch = "no report";
};

FixtureRun analyze_fixture_twice() {
  const fs::path base = fs::temp_directory_path() / ("wristex_acceptance_" + std::to_string(std::random_device{}()));
  const int c1 = run_analyze(base / "a");
  const int c2 = run_analyze(base / "b");
  const std::string a = slurp(base / "a" / "report.json");
  const std::string b = slurp(base / "b" / "report.json");
  fs::remove_all(base);

  FixtureRun run;
  run.identical = c1 == 0 && c2 == 0 && !a.empty() && a == b;
  run.bytes = a.size();
  if (!a.empty()) {
    run.report = report::Json::parse(a);
    const auto truth = report::read_json(fs::path(WRISTEX_FIXTURE_DIR) / "study" / "ground_truth.json");
    run.mismatch = ground_truth_mismatch(run.report, truth);
  }
  return run;
}

void end_to_end(const FixtureRun& run) {
  verdict(11, "end-to-end determinism", run.identical && run.mismatch.empty(),
          fmt("reports %s (%zu bytes), ground truth %s", run.identical ? "byte-identical" : "differ", run.bytes,
              run.mismatch.empty() ? "matched" : ("mismatch at " + run.mismatch).c_str()));
}

}  // namespace

int main() {
  const FixtureRun fixture = analyze_fixture_twice();
  const bool have_report = fixture.report.contains("trials") && fixture.report.contains("rejected");

  spring_derivation();
  catalog_selection();
  friedman_p_values();
  friedman_oracle();
  torque_chain();
  capstan_properties();
  if (have_report) {
    rom_equivalence(fixture.report);
  } else {
    verdict(7, "ROM metrics equivalence", false, "fixture report unavailable");
  }
  simulation_linearity();
  regression_robustness();
  if (have_report) {
    interpolation_contract(fixture.report);
  } else {
    verdict(10, "interpolation contract", false, "fixture report unavailable");
  }
  end_to_end(fixture);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
