#include "qmetro/parity.hpp"

#include <cmath>
#include <limits>

namespace qmetro {
namespace {

// Ladder indices in L^T = (e1^dag, e2^dag, a1^dag, a2^dag, e1, e2, a1, a2).
constexpr int kE1d = 0, kE2d = 1, kA1d = 2, kA2d = 3;
constexpr int kE1 = 4, kE2 = 5, kA1 = 6, kA2 = 7;

double omega_closed(const LossyMziConfig& cfg) {
  const double c = std::cos(cfg.phi);
  return 2.0 * cfg.eta1 * cfg.eta2 * (cfg.n + 2.0) * c * c +
         (cfg.eta1 + cfg.eta2) * (2.0 - cfg.eta1 - cfg.eta2);
}

double expectation_closed(const LossyMziConfig& cfg) {
  return std::sqrt(2.0 / (cfg.n * omega_closed(cfg) + 2.0));
}

bool lossless(const LossyMziConfig& cfg) {
  return cfg.eta1 == 1.0 && cfg.eta2 == 1.0;
}

// Variance of the phase estimate, +inf where the estimator has no slope.
double variance_or_inf(const LossyMziConfig& cfg) {
  const double s2 = std::sin(2.0 * cfg.phi);
  if (std::abs(s2) < 1e-9) {
    if (lossless(cfg) && std::abs(std::cos(cfg.phi)) < 1e-9) {
      return 1.0 / (cfg.n * (cfg.n + 2.0));  // removable limit at phi = pi/2
    }
    return std::numeric_limits<double>::infinity();
  }
  const double w = omega_closed(cfg);
  const double e2 = cfg.eta1 * cfg.eta1 * cfg.eta2 * cfg.eta2;
  const double nw2 = cfg.n * w + 2.0;
  return w * nw2 * nw2 /
         (2.0 * e2 * cfg.n * (cfg.n + 2.0) * (cfg.n + 2.0) * s2 * s2);
}

}  // namespace

bool QuadraticOpMatrix::preserves_ladder_metric(double tol) const {
  CMat8 j = CMat8::Identity();
  j.block<4, 4>(4, 4) = -Eigen::Matrix4cd::Identity();
  return (m.adjoint() * j * m - j).cwiseAbs().maxCoeff() <= tol;
}

ComponentMatrices build_component_matrices(double eta1, double eta2, double phi, double r) {
  if (!(eta1 >= 0.0 && eta1 <= 1.0) || !(eta2 >= 0.0 && eta2 <= 1.0)) {
    throw std::domain_error("build_component_matrices: transmissivities must lie in [0,1]");
  }
  if (!(r >= 0.0) || !std::isfinite(r) || !std::isfinite(phi)) {
    throw std::domain_error("build_component_matrices: bad squeeze or phase");
  }

  ComponentMatrices c;

  // Parity on a1: flips the sign of a1 and a1^dag.
  c.parity.m(kA1d, kA1d) = -1.0;
  c.parity.m(kA1, kA1) = -1.0;

  // Two-mode squeezer with real nonnegative parameter r; only cross-mode
  // cosh/sinh couplings survive.
  const double ch = std::cosh(r), sh = std::sinh(r);
  CMat8& s = c.squeeze.m;
  s(kA1d, kA1d) = ch;
  s(kA2d, kA2d) = ch;
  s(kA1, kA1) = ch;
  s(kA2, kA2) = ch;
  s(kA1d, kA2) = -sh;
  s(kA2d, kA1) = -sh;
  s(kA1, kA2d) = -sh;
  s(kA2, kA1d) = -sh;

  c.phase.m(kA1d, kA1d) = std::exp(Complex(0, -phi));
  c.phase.m(kA1, kA1) = std::exp(Complex(0, phi));

  const double rt = 1.0 / std::sqrt(2.0);
  CMat8& b = c.beamsplitter.m;
  b(kA1d, kA1d) = rt;
  b(kA2d, kA2d) = rt;
  b(kA1d, kA2d) = Complex(0, rt);
  b(kA2d, kA1d) = Complex(0, rt);
  b(kA1, kA1) = rt;
  b(kA2, kA2) = rt;
  b(kA1, kA2) = Complex(0, -rt);
  b(kA2, kA1) = Complex(0, -rt);

  // Arm-loss beam splitters: theta_i = arccos(sqrt(eta_i)), imaginary
  // sin-theta couplings between each arm and its environment mode.
  const double th1 = std::acos(std::sqrt(eta1));
  const double th2 = std::acos(std::sqrt(eta2));
  CMat8& l = c.loss.m;
  l(kE1d, kE1d) = std::cos(th1);
  l(kA1d, kA1d) = std::cos(th1);
  l(kE1d, kA1d) = Complex(0, std::sin(th1));
  l(kA1d, kE1d) = Complex(0, std::sin(th1));
  l(kE2d, kE2d) = std::cos(th2);
  l(kA2d, kA2d) = std::cos(th2);
  l(kE2d, kA2d) = Complex(0, std::sin(th2));
  l(kA2d, kE2d) = Complex(0, std::sin(th2));
  l(kE1, kE1) = std::cos(th1);
  l(kA1, kA1) = std::cos(th1);
  l(kE1, kA1) = Complex(0, -std::sin(th1));
  l(kA1, kE1) = Complex(0, -std::sin(th1));
  l(kE2, kE2) = std::cos(th2);
  l(kA2, kA2) = std::cos(th2);
  l(kE2, kA2) = Complex(0, -std::sin(th2));
  l(kA2, kE2) = Complex(0, -std::sin(th2));

  return c;
}

QuadraticOpMatrix compose_u_all(const ComponentMatrices& c) {
  const CMat8 mzi = c.beamsplitter.m * c.loss.m * c.phase.m * c.beamsplitter.m;
  const CMat8 all = c.squeeze.m.inverse() * mzi.inverse() * c.parity.m * mzi * c.squeeze.m;
  if (!all.allFinite()) {
    throw std::runtime_error("compose_u_all: component inversion failed");
  }
  return QuadraticOpMatrix{all};
}

ParityResult parity_expectation_matrix(const LossyMziConfig& cfg) {
  cfg.validate();
  ComponentMatrices c = build_component_matrices(cfg.eta1, cfg.eta2, cfg.phi, cfg.squeeze());
  QuadraticOpMatrix all = compose_u_all(c);

  const Complex det_c = all.block_c().determinant();
  if (std::abs(det_c) < 1e-12) {
    throw SingularBlockError("parity_expectation_matrix: singular C block");
  }
  // 1/sqrt(det C) up to a global phase; the closed form fixes the sign (+).
  const double expectation = 1.0 / std::sqrt(std::abs(det_c));

  return ParityResult{expectation, variance_or_inf(cfg), omega_closed(cfg)};
}

ParityResult parity_expectation_closed(const LossyMziConfig& cfg) {
  cfg.validate();
  return ParityResult{expectation_closed(cfg), variance_or_inf(cfg), omega_closed(cfg)};
}

ParityResult phase_variance(const LossyMziConfig& cfg) {
  cfg.validate();
  if (!(cfg.n > 0.0)) {
    throw std::domain_error("phase_variance: n must be positive");
  }
  const double var = variance_or_inf(cfg);
  if (std::isinf(var)) {
    throw DivergentEstimatorError(
        "phase_variance: sin 2phi = 0, estimator diverges at this phase");
  }
  return ParityResult{expectation_closed(cfg), var, omega_closed(cfg)};
}

}  // namespace qmetro
