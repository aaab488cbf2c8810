#include "qmetro/symplectic.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "detail/gaussian_impl.hpp"

namespace qmetro {

double photon_number_from_squeeze(double r) {
  const double s = std::sinh(r);
  return 2.0 * s * s;
}

double squeeze_from_photon_number(double n) {
  return std::asinh(std::sqrt(n / 2.0));
}

LossyMziConfig LossyMziConfig::from_squeeze(double r, double eta1, double eta2, double phi) {
  LossyMziConfig cfg{photon_number_from_squeeze(r), eta1, eta2, phi};
  cfg.validate();
  return cfg;
}

void LossyMziConfig::validate() const {
  if (!std::isfinite(n) || n < 0.0) {
    throw std::domain_error("config: mean photon number must be finite and >= 0");
  }
  if (!(eta1 >= 0.0 && eta1 <= 1.0) || !(eta2 >= 0.0 && eta2 <= 1.0)) {
    throw std::domain_error("config: transmissivities must lie in [0,1]");
  }
  if (!std::isfinite(phi)) {
    throw std::domain_error("config: phase must be finite");
  }
}

Eigen::MatrixXd symplectic_form(int dim) {
  if (dim <= 0 || dim % 2 != 0) {
    throw std::invalid_argument("symplectic_form: dimension must be positive and even");
  }
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(dim, dim);
  for (int b = 0; b < dim; b += 2) {
    o(b, b + 1) = 1.0;
    o(b + 1, b) = -1.0;
  }
  return o;
}

Eigen::MatrixXcd quadrature_from_ladder(int modes) {
  if (modes <= 0) {
    throw std::invalid_argument("quadrature_from_ladder: mode count must be positive");
  }
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(2 * modes, 2 * modes);
  for (int b = 0; b < 2 * modes; b += 2) {
    k(b, b) = Complex(s, 0);
    k(b, b + 1) = Complex(s, 0);
    k(b + 1, b) = Complex(0, s);
    k(b + 1, b + 1) = Complex(0, -s);
  }
  return k;
}

bool CovarianceMatrix::is_symmetric(double tol) const {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

std::vector<double> CovarianceMatrix::symplectic_eigenvalues() const {
  Eigen::MatrixXd w = symplectic_form(dim()) * m;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(w.cast<Complex>());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
  }
  std::vector<double> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double im = es.eigenvalues()(i).imag();
    if (im > 0.0) {
      out.push_back(im);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<double>());
  if (static_cast<int>(out.size()) != dim() / 2) {
    throw std::runtime_error("symplectic_eigenvalues: unexpected spectrum");
  }
  return out;
}

bool CovarianceMatrix::is_bona_fide(double tol) const {
  if (!is_symmetric(1e-12)) {
    return false;
  }
  for (double nu : symplectic_eigenvalues()) {
    if (nu < 1.0 - tol) {
      return false;
    }
  }
  return true;
}

ModeTransform ModeTransform::to_quadrature() const {
  if (basis == Basis::quadrature) {
    return *this;
  }
  Eigen::MatrixXcd k = quadrature_from_ladder(modes());
  return ModeTransform{k * m * k.inverse(), Basis::quadrature};
}

ModeTransform ModeTransform::to_ladder() const {
  if (basis == Basis::ladder) {
    return *this;
  }
  Eigen::MatrixXcd k = quadrature_from_ladder(modes());
  return ModeTransform{k.inverse() * m * k, Basis::ladder};
}

bool ModeTransform::is_symplectic(double tol) const {
  Eigen::MatrixXcd q = to_quadrature().m;
  Eigen::MatrixXcd omega = symplectic_form(static_cast<int>(q.rows())).cast<Complex>();
  return (q.transpose() * omega * q - omega).cwiseAbs().maxCoeff() <= tol;
}

Mat4 WilliamsonForm::d() const {
  Eigen::Vector4d diag;
  diag << nu1, nu1, nu2, nu2;
  return diag.asDiagonal();
}

CovarianceMatrix tmsv_covariance(double r) {
  if (!std::isfinite(r)) {
    throw std::domain_error("tmsv_covariance: squeeze parameter must be finite");
  }
  if (r < 0.0) {
    throw std::domain_error("tmsv_covariance: squeeze parameter must be >= 0");
  }
  return CovarianceMatrix{detail::gamma_prime<double>(r, 1.0, 1.0, 0.0)};
}

ModeTransform lossy_mzi_transform(double eta1, double eta2, double phi) {
  if (!(eta1 >= 0.0 && eta1 <= 1.0) || !(eta2 >= 0.0 && eta2 <= 1.0)) {
    throw std::domain_error("lossy_mzi_transform: transmissivities must lie in [0,1]");
  }
  if (!std::isfinite(phi)) {
    throw std::domain_error("lossy_mzi_transform: phase must be finite");
  }

  // Ladder ordering (a1^dag, a1, a2^dag, a2, e1^dag, e1, e2^dag, e2).
  CMat8 mphi = CMat8::Identity();
  mphi(0, 0) = std::exp(Complex(0, phi));
  mphi(1, 1) = std::exp(Complex(0, -phi));

  // a_i -> sqrt(eta_i) a_i - sqrt(1-eta_i) e_i,
  // e_i -> sqrt(1-eta_i) a_i + sqrt(eta_i) e_i, same for the daggers.
  CMat8 mloss = CMat8::Zero();
  const double t1 = std::sqrt(eta1), s1 = std::sqrt(1.0 - eta1);
  const double t2 = std::sqrt(eta2), s2 = std::sqrt(1.0 - eta2);
  for (int d = 0; d < 2; ++d) {  // dagger row then plain row, same real coefficients
    mloss(0 + d, 0 + d) = t1;
    mloss(0 + d, 4 + d) = -s1;
    mloss(4 + d, 0 + d) = s1;
    mloss(4 + d, 4 + d) = t1;
    mloss(2 + d, 2 + d) = t2;
    mloss(2 + d, 6 + d) = -s2;
    mloss(6 + d, 2 + d) = s2;
    mloss(6 + d, 6 + d) = t2;
  }

  Eigen::MatrixXcd k = quadrature_from_ladder(4);
  Eigen::MatrixXcd kinv = k.inverse();
  Eigen::MatrixXcd full = (k * mloss * kinv) * (k * mphi * kinv);

  if (full.imag().cwiseAbs().maxCoeff() > 1e-12) {
    throw std::runtime_error("lossy_mzi_transform: quadrature transform not real");
  }
  return ModeTransform{full.real().cast<Complex>(), Basis::quadrature};
}

CovarianceMatrix evolve_and_reduce(const CovarianceMatrix& gamma0, const ModeTransform& t) {
  if (gamma0.dim() != 4) {
    throw std::invalid_argument("evolve_and_reduce: expected a 4x4 system covariance");
  }
  if (!gamma0.is_symmetric()) {
    throw std::invalid_argument("evolve_and_reduce: covariance not symmetric");
  }
  ModeTransform q = t.to_quadrature();
  if (q.m.rows() != 8) {
    throw std::invalid_argument("evolve_and_reduce: expected an 8x8 transform");
  }

  Eigen::MatrixXd total = Eigen::MatrixXd::Identity(8, 8);
  total.topLeftCorner(4, 4) = gamma0.m;
  Eigen::MatrixXd tr = q.m.real();
  Eigen::MatrixXd evolved = tr * total * tr.transpose();
  return CovarianceMatrix{evolved.topLeftCorner(4, 4)};
}

Mat4 lossy_tmsv_covariance(double r, double eta1, double eta2, double phi) {
  return detail::gamma_prime<double>(r, eta1, eta2, phi);
}

WilliamsonForm williamson(const CovarianceMatrix& gamma) {
  if (gamma.dim() != 4) {
    throw std::invalid_argument("williamson: expected a 4x4 covariance");
  }
  if (!gamma.is_symmetric()) {
    throw std::invalid_argument("williamson: covariance not symmetric");
  }
  Mat4 g = gamma.m;
  detail::WilliamsonT<double> w = detail::williamson4<double>(g);
  return WilliamsonForm{w.nu1, w.nu2, w.symp, w.degenerate};
}

WilliamsonForm regularize_pure_modes(WilliamsonForm w, double eps) {
  w.nu1 = std::max(w.nu1, 1.0 + eps);
  w.nu2 = std::max(w.nu2, 1.0 + eps);
  return w;
}

GaussianExponent exponent_from_covariance(const WilliamsonForm& w) {
  detail::WilliamsonT<double> wt{w.nu1, w.nu2, w.symp, w.degenerate};
  return GaussianExponent{detail::gaussian_exponent4<double>(wt), 2};
}

}  // namespace qmetro
