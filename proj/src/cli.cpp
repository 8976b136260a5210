#include "wristex/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <ostream>

#include "wristex/config.hpp"
#include "wristex/errors.hpp"
#include "wristex/io.hpp"
#include "wristex/report.hpp"

namespace wristex::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;

  std::vector<std::string> postures;
  std::size_t samples = 50;
  std::string out;

  std::vector<std::string> curve_files;
  std::string catalog_path;

  std::string trial_dir;
  std::string report_path;
};

ToolkitConfig resolve_config(const Options& opt) {
  if (opt.config_path.empty()) {
    ToolkitConfig cfg;
    cfg.validate();
    return cfg;
  }
  return load_config(opt.config_path);
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const ToolkitConfig cfg = resolve_config(opt);

  std::vector<biomech::PostureLabel> labels;
  for (const auto& p : opt.postures) {
    if (p == "all") {
      for (const auto& [label, unused] : cfg.postures) labels.push_back(label);
    } else {
      labels.push_back(*biomech::parse_posture_label(p));
    }
  }

  std::vector<biomech::TorqueCurve> curves;
  for (auto label : labels) {
    curves.push_back(biomech::sweep_torque_curve(cfg.segments, cfg.posture(label), cfg.motion, cfg.load, opt.samples,
                                                 cfg.gravity, cfg.limits));
  }

  if (curves.size() == 1) {
    io::write_torque_curve(opt.out, curves.front());
  } else {
    fs::create_directories(opt.out);
    for (const auto& c : curves) io::write_torque_curve(fs::path(opt.out) / (c.posture_label + ".csv"), c);
  }

  const auto& worst = spring_design::worst_case_select(curves);
  out << std::setprecision(6);
  for (const auto& c : curves) {
    const auto fit = spring_design::fit_linear(c);
    out << c.posture_label << ": samples=" << c.samples.size() << " peak_abs_moment_Nm=" << c.peak_abs_moment()
        << " r_squared=" << fit.r_squared << " slope_Nm_per_rad=" << fit.slope
        << (curves.size() > 1 && &c == &worst ? "  [worst case]" : "") << '\n';
  }
  return kOk;
}

int cmd_fit(const Options& opt, std::ostream& out) {
  ToolkitConfig cfg = resolve_config(opt);
  if (!opt.catalog_path.empty()) cfg.catalog = io::read_spring_catalog(opt.catalog_path);

  std::vector<biomech::TorqueCurve> curves;
  for (const auto& f : opt.curve_files) curves.push_back(io::read_torque_curve(f));

  const auto design = spring_design::design_spring(curves, cfg.catalog);
  const auto j = report::to_json(design);
  report::write_json(opt.out, j);

  out << std::setprecision(6) << "worst case: " << design.worst_case << '\n'
      << "k = " << design.derived.spec.stiffness_k << " N*m/rad (" << design.k_nmm_per_deg << " N*mm/deg)\n"
      << "theta0 = " << design.derived.spec.pretension_theta0 << " rad\n"
      << "r_squared = " << design.fit.r_squared << '\n'
      << "nominal spring: " << design.match.nominal.name << '\n';
  if (design.derived.never_unloads) out << "warning: zero-torque angle is negative\n";
  return kOk;
}

int cmd_analyze(const Options& opt, std::ostream& out, std::ostream& err) {
  const ToolkitConfig cfg = resolve_config(opt);
  if (!fs::is_directory(opt.trial_dir)) {
    err << "error: '" << opt.trial_dir << "' is not a directory\n";
    return kDataError;
  }

  std::vector<trials::TrialInput> inputs;
  std::vector<trials::Rejection> unreadable;
  for (const auto& path : io::list_trial_files(opt.trial_dir)) {
    try {
      inputs.push_back({path.filename().string(), io::read_trial_log(path)});
    } catch (const ParseError& e) {
      unreadable.push_back({path.filename().string(), e.what(), 1.0});
    }
  }
  if (inputs.empty()) {
    err << "error: no parseable trial files in '" << opt.trial_dir << "'\n";
    return kDataError;
  }

  std::vector<trials::LikertResponse> likert;
  if (const auto likert_path = fs::path(opt.trial_dir) / "likert.csv"; fs::exists(likert_path)) {
    likert = io::read_likert(likert_path);
  }

  auto study = trials::aggregate_report(inputs, cfg.gear, cfg.bounds, likert);
  for (auto& u : unreadable) study.rejected.push_back(std::move(u));
  std::sort(study.rejected.begin(), study.rejected.end(),
            [](const auto& a, const auto& b) { return a.source < b.source; });
  if (study.trials.empty()) {
    err << "error: every trial was rejected\n";
    return kDataError;
  }

  const auto j = report::to_json(study);
  fs::create_directories(opt.out);
  report::write_json(fs::path(opt.out) / "report.json", j);
  report::render_plot_csvs(j, opt.out);

  out << "accepted trials: " << study.trials.size() << ", rejected: " << study.rejected.size() << '\n';
  for (const auto& r : study.rejected) out << "  rejected " << r.source << ": " << r.reason << '\n';
  out << std::setprecision(6);
  if (study.friedman_rom) {
    out << "Friedman rom_total: chi2=" << study.friedman_rom->chi2 << " p=" << study.friedman_rom->p << '\n';
  }
  if (study.friedman_torque) {
    out << "Friedman tau_rms: chi2=" << study.friedman_torque->chi2 << " p=" << study.friedman_torque->p << '\n';
  }
  for (const auto& w : study.warnings) err << "warning: " << w << '\n';
  return kOk;
}

int cmd_report(const Options& opt, std::ostream& out) {
  const auto j = report::read_json(opt.report_path);
  report::render_plot_csvs(j, opt.out);
  out << "wrote " << report::kRomBoxplotCsv << ", " << report::kTorqueBoxplotCsv << ", " << report::kRepeatabilityCsv
      << " to " << opt.out << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design and analysis toolkit for a spring-assisted wrist Ab-Ad exoskeleton joint", "wristex"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "Toolkit configuration (INI)");

  auto* simulate = app.add_subcommand("simulate", "Sweep the wrist reaction moment for arm postures");
  simulate->add_option("--posture", opt.postures, "P1, P2, P3, custom or all (repeatable)")
      ->required()
      ->check(CLI::IsMember({"P1", "P2", "P3", "custom", "all"}));
  simulate->add_option("--samples", opt.samples, "Angles per curve")->check(CLI::Range(2, 1000000));
  simulate->add_option("--out", opt.out, "Output CSV (directory when several postures)")->required();

  auto* fit = app.add_subcommand("fit", "Fit the worst-case curve and pick a catalog spring");
  fit->add_option("curves", opt.curve_files, "Torque curve CSV files")->required()->check(CLI::ExistingFile);
  fit->add_option("--catalog", opt.catalog_path, "Spring catalog CSV")->check(CLI::ExistingFile);
  fit->add_option("--out", opt.out, "Output JSON")->required();

  auto* analyze = app.add_subcommand("analyze", "Analyze a directory of trial logs");
  analyze->add_option("trials", opt.trial_dir, "Trial directory")->required();
  analyze->add_option("--out", opt.out, "Output directory")->required();

  auto* rerender = app.add_subcommand("report", "Re-render plot CSVs from a report JSON");
  rerender->add_option("report", opt.report_path, "report.json")->required()->check(CLI::ExistingFile);
  rerender->add_option("--out", opt.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opt, out);
    if (fit->parsed()) return cmd_fit(opt, out);
    if (analyze->parsed()) return cmd_analyze(opt, out, err);
    if (rerender->parsed()) return cmd_report(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace wristex::cli
