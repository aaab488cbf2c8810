#pragma once

#include <vector>

#include "qmetro/types.hpp"

namespace qmetro {

/// Standard symplectic form on (x1,p1,...,xm,pm): direct sum of [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int dim);

/// Block change of basis from ladder pairs (a_j^dag, a_j) to quadratures
/// (x_j, p_j): direct sum over modes of K = [[1,1],[i,-i]]/sqrt(2).
Eigen::MatrixXcd quadrature_from_ladder(int modes);

/// Real symmetric matrix of quadrature second moments, vacuum = identity.
/// Quadrature ordering is (x1,p1,x2,p2) with environment modes appended as
/// (xe1,pe1,xe2,pe2) when present.
struct CovarianceMatrix {
  Eigen::MatrixXd m;

  int dim() const { return static_cast<int>(m.rows()); }
  bool is_symmetric(double tol = 1e-12) const;
  /// Moduli of the +i eigenvalue pairs of Omega*gamma, sorted descending.
  std::vector<double> symplectic_eigenvalues() const;
  /// All symplectic eigenvalues >= 1 - tol (physical Gaussian state).
  bool is_bona_fide(double tol = 1e-9) const;
};

enum class Basis { quadrature, ladder };

/// Linear transform of stacked field operators, v -> M v. In the ladder
/// basis the stacking per mode is (a^dag, a); second moments of a state with
/// covariance gamma evolve as gamma -> M gamma M^T (quadrature basis).
struct ModeTransform {
  Eigen::MatrixXcd m;
  Basis basis = Basis::quadrature;

  int modes() const { return static_cast<int>(m.rows()) / 2; }
  ModeTransform to_quadrature() const;
  ModeTransform to_ladder() const;
  /// M^T Omega M = Omega in the quadrature basis (converts first if needed).
  bool is_symplectic(double tol = 1e-10) const;
};

/// Congruence diagonalization gamma = M^T D M with M symplectic and
/// D = diag(nu1,nu1,nu2,nu2), nu1 >= nu2.
struct WilliamsonForm {
  double nu1 = 1.0;
  double nu2 = 1.0;
  Mat4 symp = Mat4::Identity();
  bool degenerate = false;  // nu1 and nu2 within 1e-9; tie-break applied

  Mat4 d() const;
};

/// Symmetric matrix N of a Gaussian operator exp(-1/2 alpha^T N alpha) with
/// alpha = (a1^dag, a1, a2^dag, a2).
struct GaussianExponent {
  CMat4 n = CMat4::Zero();
  int mode_count = 2;
};

/// Covariance matrix of a two-mode squeezed vacuum with squeeze parameter r:
/// diagonal 1 + 2 sinh^2 r, couplings +-sinh 2r, mean photon number
/// 2 sinh^2 r. r = 0 gives the vacuum (identity).
CovarianceMatrix tmsv_covariance(double r);

/// 8x8 quadrature-basis transform of the lossy interferometer arms: phase
/// phi on mode 1 followed by beam-splitter loss eta_i mixing each arm with
/// its own vacuum environment mode. Real and symplectic.
ModeTransform lossy_mzi_transform(double eta1, double eta2, double phi);

/// Embeds gamma0 with a vacuum environment, applies t, and traces the
/// environment back out (keeps the leading 4x4 block).
CovarianceMatrix evolve_and_reduce(const CovarianceMatrix& gamma0, const ModeTransform& t);

/// Closed-form covariance of the lossy two-mode squeezed probe:
/// diag blocks d_i = 1 + 2 eta_i sinh^2 r, coupling a = sqrt(eta1 eta2) sinh 2r
/// rotated by phi. Equal to evolve_and_reduce of tmsv_covariance(r).
Mat4 lossy_tmsv_covariance(double r, double eta1, double eta2, double phi);

/// Generic Williamson decomposition of a 4x4 bona-fide covariance matrix.
/// Eigenvalues sorted descending; eigenvector phases fixed by making the
/// largest-magnitude entry positive real, so the result is reproducible.
WilliamsonForm williamson(const CovarianceMatrix& gamma);

/// Lifts symplectic eigenvalues to at least 1 + eps so the thermal exponent
/// stays finite. Consumers of the fidelity route accept an eps-level bias.
WilliamsonForm regularize_pure_modes(WilliamsonForm w, double eps = 1e-9);

/// Thermal exponent of D conjugated into the state's own frame:
/// N = K^T M^{-1} diag(l1,l1,l2,l2) M^{-T} K with l_k = ln((nu_k+1)/(nu_k-1)).
/// Throws PureModeError when any nu_k <= 1 + 1e-12.
GaussianExponent exponent_from_covariance(const WilliamsonForm& w);

}  // namespace qmetro
