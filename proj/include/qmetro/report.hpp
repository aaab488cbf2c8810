#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmetro/types.hpp"

namespace qmetro {

enum class OutputFormat { csv, json };

/// One evaluated configuration. Every column is always present; quantities
/// without a finite value at the point (diverged estimator, undefined
/// classical reference for asymmetric loss) carry the literal token `inf`.
/// Phases are radians, everything else dimensionless.
struct OutputRecord {
  std::string model;  // "two-arm", "one-arm" or "general"
  double n = 0.0;
  double r = 0.0;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double phi = 0.0;
  double f_q = 0.0;
  double quantum_limit = 0.0;
  double delta_phi = 0.0;
  double delta_phi_repeated = 0.0;
  double phi_opt = 0.0;
  double parity_expectation = 0.0;
  double sql = 0.0;
  double modified_hl = 0.0;
  double classical_limit = 0.0;
};

/// Fixed column list shared by the CSV header and the JSON keys.
const std::vector<std::string>& record_columns();

std::string csv_header();
std::string to_csv(const OutputRecord& rec);

/// Single JSON object per line, keys in column order; non-finite values are
/// encoded as the string "inf" to stay parseable.
std::string to_json(const OutputRecord& rec);

/// Deterministic shortest-ish decimal formatting used across all outputs.
std::string format_value(double v);

/// Full evaluation of one configuration: exact Fisher information, optimal
/// point, parity statistics at `measured_phi` (at the optimal point when
/// absent), repeated error against `budget` (single shot when absent), and
/// the reference limits. The classical reference is undefined for
/// asymmetric two-arm loss and reported as inf there.
OutputRecord evaluate_point(const LossyMziConfig& cfg, std::optional<double> budget,
                            std::optional<double> measured_phi);

enum class SweepVariable { n, eta, phi };
enum class SweepModel { two_arm, one_arm, general };

/// One-dimensional sweep: `variable` runs linearly over [lo, hi] while the
/// remaining fields of `base` stay fixed. An eta sweep needs a one- or
/// two-arm model to know which arms move. Sweeps over n or eta evaluate the
/// estimator at each point's optimal phase; a phi sweep evaluates at the
/// swept phase.
struct SweepSpec {
  SweepVariable variable = SweepVariable::n;
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
  LossyMziConfig base;
  SweepModel model = SweepModel::general;
  std::optional<double> total_photons;
};

/// Evaluates the sweep in order; deterministic row order regardless of how
/// callers parallelize. Throws std::invalid_argument for malformed specs.
std::vector<OutputRecord> run_sweep(const SweepSpec& spec);

struct FigureSpec {
  std::string id;          // fig2_left, fig2_right, fig3_left, fig3_right, fig4
  double n = 10.0;         // fixed probe size where the figure needs one
  double eta = 0.8;        // transmissivity for single-eta figures
  double total_photons = 200.0;
  int points = 60;
};

/// Curve family of one figure as a self-describing table (CSV or JSON
/// lines). Throws std::invalid_argument for unknown ids.
std::string figure_table(const FigureSpec& spec, OutputFormat format);

}  // namespace qmetro
