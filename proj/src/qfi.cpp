#include "qmetro/qfi.hpp"

#include <cmath>
#include <limits>

#include "detail/gaussian_impl.hpp"

namespace qmetro {
namespace {

QfiResult make_result(double f, QfiMethod method) {
  const double ql = f > 0.0 ? 1.0 / std::sqrt(f) : std::numeric_limits<double>::infinity();
  return QfiResult{f, ql, method};
}

}  // namespace

CMat4 ladder_symplectic_form() {
  return detail::ladder_symplectic_form4<double>().cast<Complex>();
}

QfiResult qfi_closed(const LossyMziConfig& cfg) {
  cfg.validate();
  const double num = 2.0 * cfg.n * (cfg.n + 2.0) * cfg.eta1 * cfg.eta2;
  const double den = 2.0 + cfg.n * (cfg.eta1 + cfg.eta2 - 2.0 * cfg.eta1 * cfg.eta2);
  return make_result(num / den, QfiMethod::closed);
}

QfiResult qfi_equal_loss(double n, double eta) {
  LossyMziConfig{n, eta, eta, 0.0}.validate();
  const double f = n * (n + 2.0) * eta * eta / (1.0 + n * (1.0 - eta) * eta);
  return make_result(f, QfiMethod::closed);
}

QfiResult qfi_one_arm(double n, double eta) {
  LossyMziConfig{n, eta, 1.0, 0.0}.validate();
  const double f = 2.0 * eta * n * (n + 2.0) / (n * (1.0 - eta) + 2.0);
  return make_result(f, QfiMethod::closed);
}

double bures_fidelity(const GaussianExponent& n1, const GaussianExponent& n2) {
  if (n1.mode_count != 2 || n2.mode_count != 2) {
    throw std::invalid_argument("bures_fidelity: expected two-mode exponents");
  }
  // The determinant ratio gives the squared overlap; report the Uhlmann
  // fidelity itself so the small-separation expansion matches the Fisher
  // information decay rate.
  using CLD = std::complex<long double>;
  detail::CMat4T<long double> a = n1.n.cast<CLD>();
  detail::CMat4T<long double> b = n2.n.cast<CLD>();
  return static_cast<double>(std::sqrt(detail::fidelity_squared<long double>(a, b)));
}

namespace {

using LD = long double;

detail::CMat4T<LD> exponent_at_phase(LD r, LD eta1, LD eta2, LD phi) {
  detail::Mat4T<LD> g = detail::gamma_prime<LD>(r, eta1, eta2, phi);
  detail::WilliamsonT<LD> w = detail::williamson4<LD>(g);
  w.nu1 = std::max(w.nu1, LD(1) + LD(1e-9));
  w.nu2 = std::max(w.nu2, LD(1) + LD(1e-9));
  return detail::gaussian_exponent4<LD>(w);
}

LD qfi_single_step(LD r, LD eta1, LD eta2, LD phi, LD h) {
  detail::CMat4T<LD> n0 = exponent_at_phase(r, eta1, eta2, phi);
  detail::CMat4T<LD> n1 = exponent_at_phase(r, eta1, eta2, phi + h);
  const LD f = std::sqrt(detail::fidelity_squared<LD>(n0, n1));
  return 8 * (1 - f) / (h * h);
}

}  // namespace

QfiResult qfi_fidelity(const LossyMziConfig& cfg, double dphi) {
  cfg.validate();
  if (!(dphi >= 1e-5 && dphi <= 1e-2)) {
    throw std::domain_error("qfi_fidelity: dphi must lie in [1e-5, 1e-2]");
  }
  if (cfg.eta1 >= 1.0 || cfg.eta2 >= 1.0) {
    throw PureModeError(
        "qfi_fidelity: a lossless arm leaves a pure mode; use qfi_closed at eta = 1");
  }

  const LD r = std::asinh(std::sqrt(LD(cfg.n) / 2));
  const LD e1 = LD(cfg.eta1), e2 = LD(cfg.eta2), phi = LD(cfg.phi);
  const LD h = LD(dphi);

  // The finite-difference bias is even in the step, so one halving step of
  // Richardson removes the leading h^2 term.
  const LD q_h = qfi_single_step(r, e1, e2, phi, h);
  const LD q_h2 = qfi_single_step(r, e1, e2, phi, h / 2);
  const double f = static_cast<double>((4 * q_h2 - q_h) / 3);
  return make_result(std::max(f, 0.0), QfiMethod::fidelity);
}

ReferenceLimits reference_limits(double n, double eta, LossModel model) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::domain_error("reference_limits: n must be positive");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::domain_error("reference_limits: eta must lie in (0,1]");
  }
  ReferenceLimits out;
  out.sql = 1.0 / std::sqrt(n);
  out.modified_hl = 1.0 / std::sqrt(n * (n + 2.0));
  if (model == LossModel::two_arm) {
    out.classical = 1.0 / std::sqrt(n * eta);
  } else {
    out.classical = (1.0 + std::sqrt(eta)) / (2.0 * std::sqrt(n * eta));
  }
  return out;
}

}  // namespace qmetro
