#pragma once

// Scalar-templated 4x4 Gaussian-state machinery. The public symplectic API
// instantiates it at double; the fidelity-route QFI runs the same code at
// long double because the finite-difference step divides out two powers of
// dphi and needs the determinant ratio accurate to ~1e-12.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qmetro/types.hpp"

namespace qmetro::detail {

template <typename Real>
using Mat4T = Eigen::Matrix<Real, 4, 4>;
template <typename Real>
using CMat4T = Eigen::Matrix<std::complex<Real>, 4, 4>;

template <typename Real>
Mat4T<Real> symplectic_form4() {
  Mat4T<Real> o = Mat4T<Real>::Zero();
  o(0, 1) = 1; o(1, 0) = -1;
  o(2, 3) = 1; o(3, 2) = -1;
  return o;
}

/// Direct sum of K = [[1,1],[i,-i]]/sqrt(2) over two modes; maps stacked
/// (a^dag, a) pairs to (x, p) pairs.
template <typename Real>
CMat4T<Real> ladder_to_quadrature4() {
  using C = std::complex<Real>;
  const Real s = Real(1) / std::sqrt(Real(2));
  CMat4T<Real> k = CMat4T<Real>::Zero();
  for (int b = 0; b < 4; b += 2) {
    k(b, b) = C(s, 0);
    k(b, b + 1) = C(s, 0);
    k(b + 1, b) = C(0, s);
    k(b + 1, b + 1) = C(0, -s);
  }
  return k;
}

/// Ladder-ordered symplectic form (two modes): direct sum of [[0,1],[-1,0]]
/// acting on (a1^dag, a1, a2^dag, a2). Squares to -I.
template <typename Real>
Mat4T<Real> ladder_symplectic_form4() {
  return symplectic_form4<Real>();
}

/// Covariance of the lossy two-mode squeezed probe after phase phi on mode 1
/// and arm transmissivities eta1, eta2.
template <typename Real>
Mat4T<Real> gamma_prime(Real r, Real eta1, Real eta2, Real phi) {
  const Real sh = std::sinh(r);
  const Real d1 = 1 + 2 * eta1 * sh * sh;
  const Real d2 = 1 + 2 * eta2 * sh * sh;
  const Real a = std::sqrt(eta1 * eta2) * std::sinh(2 * r);
  const Real c = std::cos(phi), s = std::sin(phi);
  Mat4T<Real> g;
  g << d1, 0, a * c, -a * s,
       0, d1, -a * s, -a * c,
       a * c, -a * s, d2, 0,
       -a * s, -a * c, 0, d2;
  return g;
}

template <typename Real>
struct WilliamsonT {
  Real nu1, nu2;
  Mat4T<Real> symp;  // gamma = symp^T * diag(nu1,nu1,nu2,nu2) * symp
  bool degenerate;
};

/// Williamson decomposition via the antisymmetric product
/// W = gamma^{1/2} Omega gamma^{1/2}. The real Schur form of W splits it
/// into orthogonal 2-planes, which stays stable when nu1 = nu2 (equal-loss
/// covariances are exactly degenerate).
template <typename Real>
WilliamsonT<Real> williamson4(const Mat4T<Real>& gamma) {
  using C = std::complex<Real>;

  Eigen::SelfAdjointEigenSolver<Mat4T<Real>> es(gamma);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("williamson: eigensolver failed");
  }
  if (es.eigenvalues().minCoeff() <= Real(0)) {
    throw std::domain_error("williamson: covariance matrix not positive definite");
  }
  Eigen::Matrix<Real, 4, 1> sq = es.eigenvalues().cwiseSqrt();
  Mat4T<Real> half = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  Mat4T<Real> inv_half =
      es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();

  Mat4T<Real> w = half * symplectic_form4<Real>() * half;

  Eigen::RealSchur<Mat4T<Real>> schur(w);
  if (schur.info() != Eigen::Success) {
    throw std::runtime_error("williamson: Schur decomposition failed");
  }
  Mat4T<Real> q = schur.matrixU();
  const Mat4T<Real>& t = schur.matrixT();

  // Purely imaginary spectrum: T is block diagonal with blocks ~ b*J.
  if (std::abs(t(1, 0)) < Real(1e-12) || std::abs(t(3, 2)) < Real(1e-12)) {
    throw std::runtime_error("williamson: unexpected Schur structure");
  }
  Real nu[2];
  for (int k = 0; k < 2; ++k) {
    const int i = 2 * k;
    nu[k] = (std::abs(t(i, i + 1)) + std::abs(t(i + 1, i))) / 2;
    if (t(i, i + 1) < Real(0)) {
      q.col(i).swap(q.col(i + 1));  // orient the plane so the block is +nu*J
    }
  }
  if (nu[0] < nu[1]) {
    std::swap(nu[0], nu[1]);
    q.col(0).swap(q.col(2));
    q.col(1).swap(q.col(3));
  }

  // Deterministic in-plane rotation: the complex vector u + i v gets its
  // largest-magnitude entry made positive real.
  for (int k = 0; k < 2; ++k) {
    Eigen::Matrix<C, 4, 1> z = q.col(2 * k).template cast<C>() +
                               C(0, 1) * q.col(2 * k + 1).template cast<C>();
    int imax = 0;
    Real best = Real(0);
    for (int i = 0; i < 4; ++i) {
      const Real a = std::abs(z(i));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    z *= std::conj(z(imax)) / std::abs(z(imax));
    q.col(2 * k) = z.real();
    q.col(2 * k + 1) = z.imag();
  }

  Eigen::Matrix<Real, 4, 1> dsqrt;
  dsqrt << std::sqrt(nu[0]), std::sqrt(nu[0]), std::sqrt(nu[1]), std::sqrt(nu[1]);
  // S gamma S^T = D and S Omega S^T = Omega; the congruence in gamma = M^T D M
  // is M = S^{-T}.
  Mat4T<Real> s = dsqrt.asDiagonal() * q.transpose() * inv_half;
  Mat4T<Real> m = s.transpose().inverse();

  WilliamsonT<Real> out;
  out.nu1 = nu[0];
  out.nu2 = nu[1];
  out.symp = m;
  out.degenerate = std::abs(nu[0] - nu[1]) < Real(1e-9);
  return out;
}

/// N = K^T M^{-1} diag(l1,l1,l2,l2) M^{-T} K, l_k = ln((nu_k+1)/(nu_k-1)).
template <typename Real>
CMat4T<Real> gaussian_exponent4(const WilliamsonT<Real>& w, Real purity_tol = Real(1e-12)) {
  using C = std::complex<Real>;
  if (w.nu1 <= 1 + purity_tol || w.nu2 <= 1 + purity_tol) {
    throw PureModeError("gaussian exponent: symplectic eigenvalue at or below 1");
  }
  const Real l1 = std::log((w.nu1 + 1) / (w.nu1 - 1));
  const Real l2 = std::log((w.nu2 + 1) / (w.nu2 - 1));
  Eigen::Matrix<Real, 4, 1> lam;
  lam << l1, l1, l2, l2;

  Mat4T<Real> minv = w.symp.inverse();
  Mat4T<Real> core = minv * lam.asDiagonal() * minv.transpose();
  CMat4T<Real> k = ladder_to_quadrature4<Real>();
  return k.transpose() * core.template cast<C>() * k;
}

/// Spectral matrix exponential; throws when the eigenbasis is too
/// ill-conditioned to trust (caller may jitter the input).
template <typename Real>
CMat4T<Real> mat_exp(const CMat4T<Real>& a) {
  Eigen::ComplexEigenSolver<CMat4T<Real>> es(a);
  if (es.info() != Eigen::Success) {
    throw DegenerateSpectrumError("matrix exponential: eigensolver failed");
  }
  const CMat4T<Real>& v = es.eigenvectors();
  CMat4T<Real> vinv = v.inverse();
  const Real cond = v.norm() * vinv.norm();
  if (!(cond < Real(1e12))) {
    throw DegenerateSpectrumError(
        "matrix exponential: defective spectrum; jitter the input by ~1e-12");
  }
  Eigen::Matrix<std::complex<Real>, 4, 1> e = es.eigenvalues().array().exp();
  return v * e.asDiagonal() * vinv;
}

/// Spectral principal square root; same conditioning guard as mat_exp.
template <typename Real>
CMat4T<Real> mat_sqrt(const CMat4T<Real>& a) {
  Eigen::ComplexEigenSolver<CMat4T<Real>> es(a);
  if (es.info() != Eigen::Success) {
    throw DegenerateSpectrumError("matrix sqrt: eigensolver failed");
  }
  const CMat4T<Real>& v = es.eigenvectors();
  CMat4T<Real> vinv = v.inverse();
  const Real cond = v.norm() * vinv.norm();
  if (!(cond < Real(1e12))) {
    throw DegenerateSpectrumError("matrix sqrt: defective spectrum; jitter the input by ~1e-12");
  }
  Eigen::Matrix<std::complex<Real>, 4, 1> e = es.eigenvalues().array().sqrt();
  return v * e.asDiagonal() * vinv;
}

/// Determinant expression for the overlap of two Gaussian exponents. The
/// ratio evaluates to the squared Uhlmann fidelity F^2 (checked against
/// diagonal thermal states); callers take the square root.
template <typename Real>
Real fidelity_squared(const CMat4T<Real>& n1, const CMat4T<Real>& n2) {
  using C = std::complex<Real>;
  const CMat4T<Real> sigma = ladder_symplectic_form4<Real>().template cast<C>();
  const CMat4T<Real> id = CMat4T<Real>::Identity();

  // -N Sigma^{-1} = N Sigma since Sigma^{-1} = -Sigma.
  CMat4T<Real> a1 = n1 * sigma;
  CMat4T<Real> a2 = n2 * sigma;

  CMat4T<Real> e1 = mat_exp<Real>(a1);
  CMat4T<Real> e2 = mat_exp<Real>(a2);
  CMat4T<Real> h = mat_exp<Real>(CMat4T<Real>(a1 / Real(2)));
  CMat4T<Real> g = h * e2 * h;
  CMat4T<Real> root = mat_sqrt<Real>(g);

  const C dnum = (e1 - id).determinant() * (e2 - id).determinant();
  const C dden = (root - id).determinant();

  const Real num = std::sqrt(std::abs(dnum));
  const Real den_re = dden.real();
  if (std::abs(dden.imag()) > Real(1e-8) * std::max(Real(1), std::abs(den_re))) {
    throw std::runtime_error("fidelity: non-real determinant beyond tolerance");
  }
  if (!(den_re > Real(0))) {
    throw std::runtime_error("fidelity: non-positive denominator determinant");
  }

  Real f2 = num / den_re;
  if (f2 > Real(1)) {
    if (f2 > Real(1) + Real(1e-8)) {
      throw std::runtime_error("fidelity: value above 1 beyond tolerance");
    }
    f2 = Real(1);
  }
  if (f2 < Real(0)) {
    f2 = Real(0);
  }
  return f2;
}

}  // namespace qmetro::detail
