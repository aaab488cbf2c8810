#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmetro/symplectic.hpp"

using namespace qmetro;

namespace {

Mat4 reconstruct(const WilliamsonForm& w) { return w.symp.transpose() * w.d() * w.symp; }

}  // namespace

TEST_CASE("tmsv covariance basics") {
  SUBCASE("zero squeezing is the vacuum") {
    CHECK((tmsv_covariance(0.0).m - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("entry pattern: cosh/sinh blocks with the sign split between x and p") {
    // diagonal 1 + 2 sinh^2 r = cosh 2r, couplings +-sinh 2r
    const double r = 0.5;
    const Mat4 g = tmsv_covariance(r).m;
    CHECK(g(0, 0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
    CHECK(g(1, 1) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
    CHECK(g(0, 2) == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
    CHECK(g(1, 3) == doctest::Approx(-std::sinh(1.0)).epsilon(1e-14));
    CHECK(g(0, 1) == 0.0);
    CHECK(g(0, 3) == 0.0);
  }

  SUBCASE("photon number bookkeeping") {
    const double r = std::asinh(1.0);  // n = 2
    CHECK(photon_number_from_squeeze(r) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(squeeze_from_photon_number(2.0) == doctest::Approx(r).epsilon(1e-14));
    const Mat4 g = tmsv_covariance(r).m;
    // per-mode occupation (g_xx + g_pp - 2)/4 sums to n
    const double n = (g(0, 0) + g(1, 1) - 2.0) / 4.0 + (g(2, 2) + g(3, 3) - 2.0) / 4.0;
    CHECK(n == doctest::Approx(2.0).epsilon(1e-13));
  }

  SUBCASE("pure for any squeezing") {
    for (double r : {0.3, std::asinh(1.0), 1.4}) {
      for (double nu : tmsv_covariance(r).symplectic_eigenvalues()) {
        CHECK(nu == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }

  SUBCASE("rejects bad input") {
    CHECK_THROWS_AS(tmsv_covariance(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(tmsv_covariance(-0.1), std::domain_error);
  }
}

TEST_CASE("lossy interferometer transform") {
  SUBCASE("identity at no loss, no phase") {
    const ModeTransform t = lossy_mzi_transform(1.0, 1.0, 0.0);
    CHECK((t.m - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("total loss swaps system and environment up to sign") {
    const Eigen::MatrixXd m = lossy_mzi_transform(0.0, 0.0, 0.0).m.real();
    CHECK((m.topLeftCorner(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((m.topRightCorner(4, 4) + Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
          1e-14);
    CHECK((m.bottomLeftCorner(4, 4) - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
          1e-14);
  }

  SUBCASE("symplectic for arbitrary parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ue(0.0, 1.0), up(0.0, std::numbers::pi);
    for (int i = 0; i < 50; ++i) {
      CHECK(lossy_mzi_transform(ue(rng), ue(rng), up(rng)).is_symplectic(1e-10));
    }
  }

  SUBCASE("basis conversion is an involution") {
    const ModeTransform t = lossy_mzi_transform(0.7, 0.9, 0.4);
    const ModeTransform back = t.to_ladder().to_quadrature();
    CHECK((t.m - back.m).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("composition of transforms stays symplectic") {
    const Eigen::MatrixXcd a = lossy_mzi_transform(0.8, 0.6, 0.3).m;
    const Eigen::MatrixXcd b = lossy_mzi_transform(0.5, 0.95, 1.1).m;
    CHECK(ModeTransform{a * b, Basis::quadrature}.is_symplectic(1e-9));
  }

  SUBCASE("domain checks") {
    CHECK_THROWS_AS(lossy_mzi_transform(-0.1, 0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(lossy_mzi_transform(0.5, 1.1, 0.0), std::domain_error);
  }
}

TEST_CASE("evolution against the closed-form covariance") {
  SUBCASE("lossless identity") {
    const CovarianceMatrix g0 = tmsv_covariance(1.0);
    const CovarianceMatrix g = evolve_and_reduce(g0, lossy_mzi_transform(1.0, 1.0, 0.0));
    CHECK((g.m - g0.m).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("total loss leaves the vacuum") {
    const CovarianceMatrix g =
        evolve_and_reduce(tmsv_covariance(1.0), lossy_mzi_transform(0.0, 0.0, 0.7));
    CHECK((g.m - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("matches the d1/d2/a pattern entrywise") {
    const double r = 1.0, e1 = 0.8, e2 = 1.0, phi = 0.3;
    const CovarianceMatrix g =
        evolve_and_reduce(tmsv_covariance(r), lossy_mzi_transform(e1, e2, phi));
    const double sh2 = std::sinh(r) * std::sinh(r);
    const double d1 = 1.0 + 2.0 * e1 * sh2;
    const double d2 = 1.0 + 2.0 * e2 * sh2;
    const double a = std::sqrt(e1 * e2) * std::sinh(2.0 * r);
    Mat4 expected;
    expected << d1, 0, a * std::cos(phi), -a * std::sin(phi),
        0, d1, -a * std::sin(phi), -a * std::cos(phi),
        a * std::cos(phi), -a * std::sin(phi), d2, 0,
        -a * std::sin(phi), -a * std::cos(phi), 0, d2;
    CHECK((g.m - expected).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((lossy_tmsv_covariance(r, e1, e2, phi) - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("random grid: closed form, bona fide, phase covariance") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(0.0, 2.0), ue(0.0, 1.0),
        up(0.0, std::numbers::pi);
    for (int i = 0; i < 1000; ++i) {
      const double r = ur(rng), e1 = ue(rng), e2 = ue(rng), phi = up(rng);
      const CovarianceMatrix g =
          evolve_and_reduce(tmsv_covariance(r), lossy_mzi_transform(e1, e2, phi));
      CHECK((g.m - lossy_tmsv_covariance(r, e1, e2, phi)).cwiseAbs().maxCoeff() <= 1e-10);
      for (double nu : g.symplectic_eigenvalues()) {
        CHECK(nu >= 1.0 - 1e-9);
      }
    }
  }

  SUBCASE("phase only rotates the cross block") {
    const double r = 0.7, e1 = 0.85, e2 = 0.65;
    const Mat4 g1 = lossy_tmsv_covariance(r, e1, e2, 0.4);
    const Mat4 g2 = lossy_tmsv_covariance(r, e1, e2, 1.3);
    CHECK((g1.topLeftCorner<2, 2>() - g2.topLeftCorner<2, 2>()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((g1.bottomRightCorner<2, 2>() - g2.bottomRightCorner<2, 2>()).cwiseAbs().maxCoeff() <=
          1e-13);
    Mat2 rot;
    const double d = 1.3 - 0.4;
    rot << std::cos(d), std::sin(d), -std::sin(d), std::cos(d);
    CHECK((rot * g1.topRightCorner<2, 2>() - g2.topRightCorner<2, 2>()).cwiseAbs().maxCoeff() <=
          1e-12);
  }

  SUBCASE("dimension mismatch is rejected") {
    CovarianceMatrix g8{Eigen::MatrixXd::Identity(8, 8)};
    CHECK_THROWS_AS(evolve_and_reduce(g8, lossy_mzi_transform(1, 1, 0)),
                    std::invalid_argument);
  }
}

TEST_CASE("williamson decomposition") {
  SUBCASE("identity input") {
    const WilliamsonForm w = williamson(CovarianceMatrix{Eigen::MatrixXd::Identity(4, 4)});
    CHECK(w.nu1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.nu2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.degenerate);
    CHECK((reconstruct(w) - Mat4::Identity()).norm() <= 1e-9);
  }

  SUBCASE("pure probe has unit eigenvalues") {
    const WilliamsonForm w = williamson(tmsv_covariance(0.9));
    CHECK(w.nu1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(w.nu2 == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("reconstruction and symplecticity on a grid") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ur(0.1, 1.5), ue(0.2, 0.999),
        up(0.0, std::numbers::pi);
    const Eigen::MatrixXd omega = symplectic_form(4);
    for (int i = 0; i < 200; ++i) {
      const Mat4 g = lossy_tmsv_covariance(ur(rng), ue(rng), ue(rng), up(rng));
      const WilliamsonForm w = williamson(CovarianceMatrix{g});
      CHECK((reconstruct(w) - g).norm() <= 1e-9);
      CHECK((w.symp.transpose() * omega * w.symp - omega).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(w.nu1 >= w.nu2);
      CHECK(w.nu2 >= 1.0 - 1e-9);
    }
  }

  SUBCASE("specific reconstruction check") {
    // equal loss in both arms makes the spectrum exactly degenerate
    const Mat4 g = lossy_tmsv_covariance(0.8, 0.7, 0.7, 0.5);
    const WilliamsonForm w = williamson(CovarianceMatrix{g});
    CHECK(w.degenerate);
    CHECK(w.nu1 == doctest::Approx(w.nu2).epsilon(1e-12));
    CHECK((reconstruct(w) - g).norm() <= 1e-9);
    const Eigen::MatrixXd omega = symplectic_form(4);
    CHECK((w.symp.transpose() * omega * w.symp - omega).cwiseAbs().maxCoeff() <= 1e-9);
  }

  SUBCASE("deterministic output") {
    const Mat4 g = lossy_tmsv_covariance(0.6, 0.75, 0.9, 1.1);
    const WilliamsonForm a = williamson(CovarianceMatrix{g});
    const WilliamsonForm b = williamson(CovarianceMatrix{g});
    CHECK((a.symp - b.symp).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("quoted eigenvalue shortcut disagrees with the decomposition") {
    // The half-sum/half-difference closed pattern
    //   1/2 (d1+d2) sqrt(4a^2+1) +- 1/2 (d1-d2)
    // reproduces d1, d2 at a = 0 but fails for any coupled state (a pure
    // probe would get eigenvalues ~cosh 2r instead of 1) and is kept only as
    // a recorded check-target. The generic decomposition is authoritative.
    const double r = 0.5, e1 = 0.8, e2 = 0.6, phi = 0.4;
    const double sh2 = std::sinh(r) * std::sinh(r);
    const double d1 = 1.0 + 2.0 * e1 * sh2, d2 = 1.0 + 2.0 * e2 * sh2;
    const double a = std::sqrt(e1 * e2) * std::sinh(2.0 * r);
    const double quoted1 =
        0.5 * (d1 + d2) * std::sqrt(4.0 * a * a + 1.0) + 0.5 * (d1 - d2);
    const WilliamsonForm w = williamson(CovarianceMatrix{lossy_tmsv_covariance(r, e1, e2, phi)});
    CHECK(std::abs(quoted1 - w.nu1) > 0.5);  // materially different
    // and the generic result is the one consistent with the state:
    CHECK((reconstruct(w) - lossy_tmsv_covariance(r, e1, e2, phi)).norm() <= 1e-9);
  }
}

TEST_CASE("gaussian exponent") {
  SUBCASE("thermal couplings") {
    WilliamsonForm w;
    w.nu1 = w.nu2 = 3.0;
    const GaussianExponent ge = exponent_from_covariance(w);
    // -ln((3-1)/(3+1)) = ln 2 on the off-diagonal of each mode block
    CHECK(std::abs(ge.n(0, 1) - Complex(std::log(2.0), 0)) <= 1e-12);
    CHECK(std::abs(ge.n(1, 0) - Complex(std::log(2.0), 0)) <= 1e-12);
    CHECK(std::abs(ge.n(2, 3) - Complex(std::log(2.0), 0)) <= 1e-12);
    CHECK(std::abs(ge.n(0, 0)) <= 1e-12);
    CHECK(std::abs(ge.n(0, 2)) <= 1e-12);
  }

  SUBCASE("thermal round trip recovers the eigenvalues") {
    WilliamsonForm w;
    w.nu1 = w.nu2 = 3.0;
    const GaussianExponent ge = exponent_from_covariance(w);
    const double lambda = ge.n(0, 1).real();
    const double x = std::exp(-lambda);
    CHECK((1.0 + x) / (1.0 - x) == doctest::Approx(3.0).epsilon(1e-9));
  }

  SUBCASE("lossy probe exponent is symmetric") {
    const Mat4 g = lossy_tmsv_covariance(1.0, 0.8, 0.8, 0.2);
    const GaussianExponent ge = exponent_from_covariance(williamson(CovarianceMatrix{g}));
    CHECK((ge.n - ge.n.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("pure modes are refused, regularization lifts them") {
    const WilliamsonForm w = williamson(tmsv_covariance(0.8));
    CHECK_THROWS_AS(exponent_from_covariance(w), PureModeError);
    CHECK_NOTHROW(exponent_from_covariance(regularize_pure_modes(w)));
  }
}
