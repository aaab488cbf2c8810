#include "qmetro/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qmetro/fock.hpp"
#include "qmetro/parity.hpp"
#include "qmetro/qfi.hpp"
#include "qmetro/symplectic.hpp"

namespace qmetro {
namespace {

std::string describe(double worst, double tol) {
  std::ostringstream os;
  os << "worst " << worst << " vs tolerance " << tol;
  return os.str();
}

CheckResult covariance_check(int grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ur(0.0, 2.0), ue(0.0, 1.0),
      up(0.0, std::numbers::pi);
  double worst = 0.0;
  double worst_nu = 1.0;
  for (int i = 0; i < grid; ++i) {
    const double r = ur(rng), e1 = ue(rng), e2 = ue(rng), phi = up(rng);
    CovarianceMatrix evolved =
        evolve_and_reduce(tmsv_covariance(r), lossy_mzi_transform(e1, e2, phi));
    const Mat4 closed = lossy_tmsv_covariance(r, e1, e2, phi);
    worst = std::max(worst, (evolved.m - closed).cwiseAbs().maxCoeff());
    for (double nu : evolved.symplectic_eigenvalues()) {
      worst_nu = std::min(worst_nu, nu);
    }
  }
  const bool pass = worst <= 1e-10 && worst_nu >= 1.0 - 1e-9;
  return {"covariance evolution vs closed form", pass, worst, describe(worst, 1e-10)};
}

CheckResult parity_check(int grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ur(0.0, 1.5), ue(0.2, 1.0),
      up(0.05, std::numbers::pi - 0.05);
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    LossyMziConfig cfg = LossyMziConfig::from_squeeze(ur(rng), ue(rng), ue(rng), up(rng));
    const double a = parity_expectation_matrix(cfg).expectation;
    const double b = parity_expectation_closed(cfg).expectation;
    worst = std::max(worst, std::abs(a - b));
  }
  return {"parity determinant route vs closed form", worst <= 1e-9, worst, describe(worst, 1e-9)};
}

CheckResult qfi_route_check(int grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> un(0.1, 20.0), ue(0.3, 0.99), up(0.0, 1.5);
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    LossyMziConfig cfg{un(rng), ue(rng), ue(rng), up(rng)};
    const double closed = qfi_closed(cfg).f_q;
    const double fid = qfi_fidelity(cfg).f_q;
    worst = std::max(worst, std::abs(fid - closed) / closed);
  }
  return {"fidelity-route QFI vs closed form", worst <= 1e-4, worst, describe(worst, 1e-4)};
}

CheckResult oracle_qfi_check() {
  double worst = 0.0;
  for (const auto& [e1, e2] : {std::pair{0.8, 0.8}, std::pair{0.7, 1.0}}) {
    const LossyMziConfig cfg{1.0, e1, e2, 0.4};
    const double closed = qfi_closed(cfg).f_q;
    const double fock = qfi_fock(cfg.squeeze(), e1, e2, cfg.phi, 30);
    worst = std::max(worst, std::abs(fock - closed) / closed);
  }
  return {"Fock-oracle QFI vs closed form", worst <= 1e-5, worst, describe(worst, 1e-5)};
}

CheckResult oracle_parity_check() {
  const LossyMziConfig cfg{1.0, 0.7, 0.9, 0.9};
  FockState s = tmsv_fock(cfg.squeeze(), 30);
  s = apply_beamsplitter_50(s);
  s = apply_phase(s, cfg.phi);
  s = apply_loss(s, 0, cfg.eta1);
  s = apply_loss(s, 1, cfg.eta2);
  s = apply_beamsplitter_50(s);
  const double oracle = parity_fock(s, 0);
  const double closed = parity_expectation_closed(cfg).expectation;
  const double err = std::abs(oracle - closed);
  return {"Fock-oracle parity vs closed form", err <= 1e-6, err, describe(err, 1e-6)};
}

CheckResult oracle_covariance_check() {
  double worst = 0.0;
  for (double r : {0.4, 0.8}) {
    FockState s = tmsv_fock(r, 40);
    s = apply_phase(s, 0.6);
    s = apply_loss(s, 0, 0.75);
    s = apply_loss(s, 1, 0.9);
    const Mat4 closed = lossy_tmsv_covariance(r, 0.75, 0.9, 0.6);
    worst = std::max(worst, (covariance_fock(s) - closed).cwiseAbs().maxCoeff());
  }
  return {"Fock-oracle covariance vs closed form", worst <= 1e-8, worst, describe(worst, 1e-8)};
}

}  // namespace

std::vector<CheckResult> run_validation(int grid, std::uint64_t seed) {
  if (grid < 1) {
    throw std::domain_error("run_validation: grid must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  out.push_back(covariance_check(grid, rng));
  out.push_back(parity_check(grid, rng));
  out.push_back(qfi_route_check(std::min(grid, 200), rng));
  out.push_back(oracle_qfi_check());
  out.push_back(oracle_parity_check());
  out.push_back(oracle_covariance_check());
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& c) { return c.pass; });
}

}  // namespace qmetro
