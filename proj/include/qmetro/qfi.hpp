#pragma once

#include "qmetro/symplectic.hpp"
#include "qmetro/types.hpp"

namespace qmetro {

enum class QfiMethod { closed, fidelity, fock };

struct QfiResult {
  double f_q = 0.0;
  double quantum_limit = 0.0;  // f_q^{-1/2}, radians
  QfiMethod method = QfiMethod::closed;
};

enum class LossModel { two_arm, one_arm };

struct ReferenceLimits {
  double sql = 0.0;          // 1/sqrt(n)
  double modified_hl = 0.0;  // 1/sqrt(n(n+2)), the lossless benchmark
  double classical = 0.0;    // coherent-probe limit for the chosen loss model
};

/// Constant 4x4 form on (a1^dag, a1, a2^dag, a2) entering the fidelity
/// determinant expression; squares to -I.
CMat4 ladder_symplectic_form();

/// Exact Fisher information of the lossy two-mode squeezed probe:
/// F_Q = 2 n (n+2) eta1 eta2 / (2 + n (eta1 + eta2 - 2 eta1 eta2)).
/// Independent of phi; reduces to n(n+2) when lossless.
QfiResult qfi_closed(const LossyMziConfig& cfg);

/// Equal losses in both arms: n(n+2) eta^2 / (1 + n (1-eta) eta).
QfiResult qfi_equal_loss(double n, double eta);

/// Loss in the dispersive arm only: 2 eta n (n+2) / (n (1-eta) + 2).
QfiResult qfi_one_arm(double n, double eta);

/// Uhlmann fidelity of two Gaussian exponent forms, via determinants of
/// matrix exponentials and the principal matrix square root. Both states
/// must be strictly mixed (regularize_pure_modes first when near purity).
double bures_fidelity(const GaussianExponent& n1, const GaussianExponent& n2);

/// Fisher information from the fidelity decay rate,
/// F_Q = 8 (1 - F(rho_phi, rho_{phi+dphi})) / dphi^2, Richardson-extrapolated
/// over {dphi, dphi/2}. Requires 1e-5 <= dphi <= 1e-2 and strict loss in both
/// arms (throws PureModeError at eta = 1; use qfi_closed there).
QfiResult qfi_fidelity(const LossyMziConfig& cfg, double dphi = 1e-3);

/// Shot-noise, ideal-probe and coherent-probe precision benchmarks.
/// Throws std::domain_error for n = 0.
ReferenceLimits reference_limits(double n, double eta, LossModel model);

}  // namespace qmetro
