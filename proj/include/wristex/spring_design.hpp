#pragma once

// Spring stiffness and pretension from simulated torque curves, plus catalog
// matching for off-the-shelf clock springs.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wristex/biomech_model.hpp"
#include "wristex/transmission.hpp"

namespace wristex::spring_design {

struct LinearFit {
  double slope = 0.0;      // N*m/rad
  double intercept = 0.0;  // N*m
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

struct SpringCatalogEntry {
  std::string name;
  double stiffness = 0.0;  // N*mm/deg
};

struct SpringDerivation {
  transmission::SpringSpec spec;
  // Zero-torque angle came out negative; spec.pretension_theta0 holds the raw
  // value and the spring never unloads inside the motion range.
  bool never_unloads = false;
};

struct CatalogMatch {
  SpringCatalogEntry nominal;
  std::optional<SpringCatalogEntry> softer;
  std::optional<SpringCatalogEntry> stiffer;
};

// Ordinary least squares of moment on angle. Throws DegenerateError if fewer
// than two distinct angles are present.
LinearFit fit_linear(const biomech::TorqueCurve& curve);

// k = |slope|, theta0 = -intercept / slope.
SpringDerivation derive_spring(const LinearFit& fit);

// Curve with the largest peak |moment|; ties go to the lowest posture label.
const biomech::TorqueCurve& worst_case_select(std::span<const biomech::TorqueCurve> curves);

double stiffness_to_nmm_per_deg(double k_nm_per_rad);
double stiffness_from_nmm_per_deg(double k_nmm_per_deg);

// Nearest entry by stiffness (ties favour the softer spring) and its nearest
// softer and stiffer neighbours.
CatalogMatch catalog_match(double target_nmm_per_deg, std::span<const SpringCatalogEntry> catalog);

struct SpringDesign {
  std::string worst_case;                             // posture label of the fitted curve
  std::vector<std::pair<std::string, double>> peaks;  // peak |moment| per input curve
  LinearFit fit;
  SpringDerivation derived;
  double k_nmm_per_deg = 0.0;
  CatalogMatch match;
};

// Worst-case selection, fit, derivation and catalog lookup in one pass.
SpringDesign design_spring(std::span<const biomech::TorqueCurve> curves,
                           std::span<const SpringCatalogEntry> catalog);

// k1..k3 of the evaluated springs.
std::vector<SpringCatalogEntry> default_catalog();

}  // namespace wristex::spring_design
