#pragma once

#include <vector>

#include "qmetro/types.hpp"

namespace qmetro {

/// Two-mode state in a truncated photon-number basis, held as a list of
/// pure branches: rho = sum_b |psi_b><psi_b| (a single branch is a pure
/// state). Loss channels append Kraus branches instead of materializing the
/// full density matrix, which keeps large cutoffs affordable; call
/// density_matrix() to expand when the dimension is small.
///
/// Amplitudes are indexed as n1 * (cutoff+1) + n2. Branch norms are left
/// unnormalized so that trace() reports the surviving probability mass;
/// truncation_deficit() accounts for everything dropped (initial tail,
/// clipped beam-splitter overflow, pruned branches).
class FockState {
 public:
  FockState(int cutoff, std::vector<Eigen::VectorXcd> branches, double deficit);

  /// |n1, n2> basis state.
  static FockState basis(int cutoff, int n1, int n2);

  int cutoff() const { return cutoff_; }
  int dim() const { return cutoff_ + 1; }
  bool is_pure() const { return branches_.size() == 1; }
  const std::vector<Eigen::VectorXcd>& branches() const { return branches_; }
  const Eigen::VectorXcd& amplitudes() const;
  double truncation_deficit() const { return deficit_; }

  double trace() const;
  Eigen::MatrixXcd density_matrix() const;

 private:
  int cutoff_;
  std::vector<Eigen::VectorXcd> branches_;
  double deficit_;
};

/// Two-mode squeezed vacuum truncated at `cutoff` photons per mode;
/// amplitude tanh^k r / cosh r on |k,k>, deficit tanh^{2(cutoff+1)} r.
FockState tmsv_fock(double r, int cutoff);

/// 50:50 beam splitter exp(i pi/4 (a1^dag a2 + a2^dag a1)), applied exactly
/// within each total-photon-number block; amplitude pushed past the per-mode
/// cutoff is dropped and added to the deficit.
FockState apply_beamsplitter_50(const FockState& state);

/// Phase shifter on mode 1: amplitude of |n1,n2> gains exp(-i phi n1).
FockState apply_phase(const FockState& state, double phi);

/// Photon-loss channel of transmissivity eta on one mode (0 or 1) as a
/// Kraus sum; trace-preserving up to branches below the prune threshold,
/// which are dropped into the deficit.
FockState apply_loss(const FockState& state, int mode, double eta, double prune = 1e-14);

/// Expectation of (-1)^(photon number) on one mode.
double parity_fock(const FockState& state, int mode);

/// Quadrature covariance matrix (x1,p1,x2,p2) of the state, vacuum = I.
Mat4 covariance_fock(const FockState& state);

/// Mean photon number in one mode.
double mean_photons_fock(const FockState& state, int mode);

/// Brute-force Fisher information of the probe after phase and loss, from
/// the spectral decomposition of rho_phi: 2 sum |<i|d_phi rho|j>|^2 /
/// (lambda_i + lambda_j) over pairs above a 1e-12 floor, with the derivative
/// by Richardson-extrapolated central differences (base step 1e-4).
/// Throws std::runtime_error when the truncation deficit exceeds 1e-10.
double qfi_fock(double r, double eta1, double eta2, double phi, int cutoff);

}  // namespace qmetro
