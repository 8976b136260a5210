#include "wristex/spring_design.hpp"

#include <algorithm>
#include <cmath>

#include "wristex/errors.hpp"
#include "wristex/units.hpp"

namespace wristex::spring_design {

namespace {
constexpr double kNmmPerDegPerNmPerRad = 1000.0 * units::kPi / 180.0;
}

LinearFit fit_linear(const biomech::TorqueCurve& curve) {
  const auto& s = curve.samples;
  const std::size_t n = s.size();
  if (n < 2) throw DegenerateError("linear fit needs at least 2 points");

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : s) {
    if (!std::isfinite(p.angle) || !std::isfinite(p.moment)) throw DomainError("curve contains non-finite values");
    mean_x += p.angle;
    mean_y += p.moment;
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  // Centred sums keep the normal equations well conditioned.
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : s) {
    const double dx = p.angle - mean_x;
    const double dy = p.moment - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateError("all curve angles are identical");

  LinearFit fit;
  fit.n_points = n;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;

  double ss_res = 0.0;
  for (const auto& p : s) {
    const double r = p.moment - (fit.slope * p.angle + fit.intercept);
    ss_res += r * r;
  }
  if (syy == 0.0) {
    fit.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
  } else {
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

SpringDerivation derive_spring(const LinearFit& fit) {
  if (!std::isfinite(fit.slope) || !std::isfinite(fit.intercept)) throw DomainError("fit coefficients must be finite");
  if (fit.slope == 0.0) throw DegenerateError("zero slope gives no stiffness");
  SpringDerivation out;
  out.spec.stiffness_k = std::abs(fit.slope);
  out.spec.pretension_theta0 = -fit.intercept / fit.slope;
  out.never_unloads = out.spec.pretension_theta0 < 0.0;
  return out;
}

const biomech::TorqueCurve& worst_case_select(std::span<const biomech::TorqueCurve> curves) {
  if (curves.empty()) throw DomainError("no curves to select from");
  const biomech::TorqueCurve* best = &curves.front();
  double best_peak = best->peak_abs_moment();
  for (const auto& c : curves.subspan(1)) {
    const double peak = c.peak_abs_moment();
    if (peak > best_peak || (peak == best_peak && c.posture_label < best->posture_label)) {
      best = &c;
      best_peak = peak;
    }
  }
  return *best;
}

double stiffness_to_nmm_per_deg(double k_nm_per_rad) {
  if (!std::isfinite(k_nm_per_rad) || k_nm_per_rad <= 0.0) throw DomainError("stiffness must be > 0");
  return k_nm_per_rad * kNmmPerDegPerNmPerRad;
}

double stiffness_from_nmm_per_deg(double k_nmm_per_deg) {
  if (!std::isfinite(k_nmm_per_deg) || k_nmm_per_deg <= 0.0) throw DomainError("stiffness must be > 0");
  return k_nmm_per_deg / kNmmPerDegPerNmPerRad;
}

CatalogMatch catalog_match(double target_nmm_per_deg, std::span<const SpringCatalogEntry> catalog) {
  if (catalog.empty()) throw DomainError("spring catalog is empty");
  if (!std::isfinite(target_nmm_per_deg)) throw DomainError("target stiffness is not finite");
  for (const auto& e : catalog) {
    if (!(e.stiffness > 0.0) || !std::isfinite(e.stiffness)) throw ConfigError("catalog entry '" + e.name + "' has non-positive stiffness");
  }

  std::vector<SpringCatalogEntry> sorted(catalog.begin(), catalog.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.stiffness < b.stiffness; });

  // Ascending scan with strict improvement keeps the softer entry on ties.
  std::size_t best = 0;
  double best_dist = std::abs(sorted[0].stiffness - target_nmm_per_deg);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double d = std::abs(sorted[i].stiffness - target_nmm_per_deg);
    if (d < best_dist) {
      best = i;
      best_dist = d;
    }
  }

  CatalogMatch match{sorted[best], std::nullopt, std::nullopt};
  const double k = sorted[best].stiffness;
  for (std::size_t i = best; i-- > 0;) {
    if (sorted[i].stiffness < k) {
      match.softer = sorted[i];
      break;
    }
  }
  for (std::size_t i = best + 1; i < sorted.size(); ++i) {
    if (sorted[i].stiffness > k) {
      match.stiffer = sorted[i];
      break;
    }
  }
  return match;
}

SpringDesign design_spring(std::span<const biomech::TorqueCurve> curves,
                           std::span<const SpringCatalogEntry> catalog) {
  const auto& worst = worst_case_select(curves);
  SpringDesign d;
  d.worst_case = worst.posture_label;
  for (const auto& c : curves) d.peaks.emplace_back(c.posture_label, c.peak_abs_moment());
  d.fit = fit_linear(worst);
  d.derived = derive_spring(d.fit);
  d.k_nmm_per_deg = stiffness_to_nmm_per_deg(d.derived.spec.stiffness_k);
  d.match = catalog_match(d.k_nmm_per_deg, catalog);
  return d;
}

std::vector<SpringCatalogEntry> default_catalog() {
  return {{"S1", 10.66}, {"S2", 11.71}, {"S3", 13.2}};
}

}  // namespace wristex::spring_design
