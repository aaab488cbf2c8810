#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qmetro/qfi.hpp"
#include "qmetro/types.hpp"

namespace qmetro {

/// Splitting of a total photon budget into repeated shots, with the bias
/// phase that parks the estimator at its optimal operating point.
struct MeasurementPlan {
  double total_photons = 0.0;      // N
  double photons_per_shot = 0.0;   // n
  double repetitions = 1.0;        // N / n
  double center_estimate = 0.0;    // prior center for the unknown phase
  double optimal_point = 0.0;      // phi_o(n, eta1, eta2)
  double predetection_shift = 0.0; // optimal_point - center_estimate
  double delta_phi_repeated = 0.0; // error of the shifted estimate
};

struct PrecisionReport {
  double f_q = 0.0;
  double delta_phi_single = 0.0;    // parity error at phi_o, one shot
  double delta_phi_repeated = 0.0;  // delta_phi_single / sqrt(N/n)
  double phi_opt = 0.0;
  std::optional<double> n_opt;      // only filled by the photon-number search
  ReferenceLimits limits;
};

/// Phase minimizing the parity estimator error over (0, pi/2): 512-point
/// coarse scan plus golden-section refinement to 1e-10. Lossless inputs
/// return pi/2 directly. Throws std::domain_error for n <= 0.
double optimal_phase(double n, double eta1, double eta2);

/// Error after splitting N photons into shots of n:
/// delta_phi = Delta_phi(n, eta, phi_o) / sqrt(N/n). Requires 0 < n <= N.
PrecisionReport repeated_error(double n, double eta1, double eta2, double total_photons);

struct PhotonSearchResult {
  double n_opt = 0.0;
  double delta_phi = 0.0;
  bool interior = false;  // false: objective was monotone, boundary returned
};

/// Probe intensity minimizing repeated_error at fixed budget. The default
/// grid is 200 log-spaced points in [0.1, N]; an interior grid minimum is
/// refined by golden section, a boundary minimum is flagged.
PhotonSearchResult optimal_photon_number(double total_photons, double eta1, double eta2,
                                         std::span<const double> n_grid = {});

/// Smallest transmissivity (bisection to 1e-6) at which the quantum limit
/// still beats the shot-noise limit 1/sqrt(n).
double quantum_advantage_region(double n, LossModel model);

/// Plan a biased measurement around a prior center; the precision of the
/// shifted phase carries over to the unknown phase unchanged.
MeasurementPlan make_plan(double total_photons, double n, double eta1, double eta2,
                          double center_estimate);

}  // namespace qmetro
