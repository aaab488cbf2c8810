#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmetro {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using CMat4 = Eigen::Matrix4cd;
using CMat8 = Eigen::Matrix<Complex, 8, 8>;

/// Requested Gaussian exponent for a mode whose thermal occupation vanishes.
/// The log formula diverges there; callers regularize first (see
/// regularize_pure_modes) or switch to a closed-form route.
struct PureModeError : std::domain_error {
  explicit PureModeError(const std::string& msg) : std::domain_error(msg) {}
};

/// A matrix function ran into a (near-)defective spectrum.
struct DegenerateSpectrumError : std::runtime_error {
  explicit DegenerateSpectrumError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The lower-right block of a composed ladder representation is singular.
struct SingularBlockError : std::runtime_error {
  explicit SingularBlockError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The parity estimator has no sensitivity at the requested phase
/// (sin 2phi = 0 with loss present).
struct DivergentEstimatorError : std::domain_error {
  explicit DivergentEstimatorError(const std::string& msg) : std::domain_error(msg) {}
};

/// Mean photon number of a two-mode squeezed vacuum, n = 2 sinh^2 r.
double photon_number_from_squeeze(double r);

/// Inverse of photon_number_from_squeeze.
double squeeze_from_photon_number(double n);

/// One interferometer evaluation: probe intensity, arm transmissivities and
/// the unknown phase. `n` is the mean photon number of the probe.
struct LossyMziConfig {
  double n = 0.0;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double phi = 0.0;

  double squeeze() const { return squeeze_from_photon_number(n); }

  static LossyMziConfig from_squeeze(double r, double eta1, double eta2, double phi);

  /// Throws std::domain_error unless n >= 0 finite, eta in [0,1], phi finite.
  void validate() const;
};

}  // namespace qmetro
