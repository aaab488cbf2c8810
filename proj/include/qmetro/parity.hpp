#pragma once

#include "qmetro/types.hpp"

namespace qmetro {

/// 8x8 matrix representation of an exponential-quadratic operator U in the
/// ladder basis L^T = (e1^dag, e2^dag, a1^dag, a2^dag, e1, e2, a1, a2),
/// defined through U L^T U^{-1} = L^T M(U). Blocks are [[A, D], [B, C]],
/// each 4x4; vacuum expectation values come from det C.
struct QuadraticOpMatrix {
  CMat8 m = CMat8::Identity();

  Eigen::Matrix4cd block_a() const { return m.block<4, 4>(0, 0); }
  Eigen::Matrix4cd block_d() const { return m.block<4, 4>(0, 4); }
  Eigen::Matrix4cd block_b() const { return m.block<4, 4>(4, 0); }
  Eigen::Matrix4cd block_c() const { return m.block<4, 4>(4, 4); }

  /// M^dag diag(I,-I) M = diag(I,-I): the representation of a unitary
  /// preserves the ladder-basis metric.
  bool preserves_ladder_metric(double tol = 1e-10) const;
};

/// Representations of the parity flip, the two-mode squeezer, the phase
/// shifter, the 50:50 beam splitter and the two arm-loss beam splitters.
struct ComponentMatrices {
  QuadraticOpMatrix parity;
  QuadraticOpMatrix squeeze;
  QuadraticOpMatrix phase;
  QuadraticOpMatrix beamsplitter;
  QuadraticOpMatrix loss;
};

struct ParityResult {
  double expectation = 1.0;     // <Pi> on output mode 1, in [-1, 1]
  double variance_phase = 0.0;  // estimator variance of phi, radians^2
  double omega = 0.0;           // loss-and-phase auxiliary in the closed form
};

/// Component representations for transmissivities eta_i = cos^2(theta_i),
/// phase phi and squeeze parameter r >= 0.
ComponentMatrices build_component_matrices(double eta1, double eta2, double phi, double r);

/// M(S^dag) M(U_mzi^dag) M(Pi) M(U_mzi) M(S) with
/// M(U_mzi) = M(U_bs) M(U_loss) M(U_phi) M(U_bs); adjoints via inversion.
QuadraticOpMatrix compose_u_all(const ComponentMatrices& c);

/// Parity expectation from 1/sqrt(det C) of the composed representation.
/// The global phase is stripped by taking the magnitude; the closed form is
/// strictly positive. Throws SingularBlockError when |det C| < 1e-12.
ParityResult parity_expectation_matrix(const LossyMziConfig& cfg);

/// Closed form <Pi> = sqrt(2 / (n w + 2)) with
/// w = 2 eta1 eta2 (n+2) cos^2 phi + (eta1+eta2)(2-eta1-eta2).
ParityResult parity_expectation_closed(const LossyMziConfig& cfg);

/// Estimator variance
/// dphi^2 = w (n w + 2)^2 / (2 eta1^2 eta2^2 n (n+2)^2 sin^2 2phi),
/// using <Pi^2> = 1. At the lossless point phi = pi/2 the removable 0/0 is
/// replaced by its limit 1/(n(n+2)); elsewhere sin 2phi ~ 0 throws
/// DivergentEstimatorError. Requires n > 0.
ParityResult phase_variance(const LossyMziConfig& cfg);

}  // namespace qmetro
