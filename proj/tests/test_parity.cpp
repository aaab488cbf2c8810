#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmetro/optimize.hpp"
#include "qmetro/parity.hpp"
#include "qmetro/qfi.hpp"

using namespace qmetro;

namespace {

constexpr double kPi = std::numbers::pi;

double ideal_expectation(double n, double phi) {
  const double c = std::cos(phi);
  return 1.0 / std::sqrt(1.0 + n * (n + 2.0) * c * c);
}

double ideal_delta_phi(double n, double phi) {
  const double c = std::cos(phi);
  return (1.0 + n * (n + 2.0) * c * c) / (std::abs(std::sin(phi)) * std::sqrt(n * (n + 2.0)));
}

}  // namespace

TEST_CASE("component representations") {
  const ComponentMatrices c = build_component_matrices(0.8, 0.65, 0.7, 0.9);

  SUBCASE("parity squares to the identity") {
    CHECK((c.parity.m * c.parity.m - CMat8::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("all components preserve the ladder metric") {
    CHECK(c.parity.preserves_ladder_metric());
    CHECK(c.squeeze.preserves_ladder_metric());
    CHECK(c.phase.preserves_ladder_metric());
    CHECK(c.beamsplitter.preserves_ladder_metric());
    CHECK(c.loss.preserves_ladder_metric());
  }

  SUBCASE("trivial parameters give identity factors") {
    const ComponentMatrices t = build_component_matrices(1.0, 1.0, 0.0, 0.0);
    CHECK((t.loss.m - CMat8::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((t.phase.m - CMat8::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
    // no leading scalar on the squeezer: r -> 0 must reduce it to identity
    CHECK((t.squeeze.m - CMat8::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("domain checks") {
    CHECK_THROWS_AS(build_component_matrices(1.2, 0.5, 0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(build_component_matrices(0.5, 0.5, 0.0, -0.1), std::domain_error);
  }
}

TEST_CASE("composed representation") {
  SUBCASE("trivial parameters leave a bare parity flip") {
    // The double beam splitter is a mode swap (with i phases), so the
    // composition carries the flip onto the second mode; the vacuum
    // expectation is unaffected.
    const ComponentMatrices c = build_component_matrices(1.0, 1.0, 0.0, 0.0);
    CMat8 expected = CMat8::Identity();
    expected(3, 3) = -1.0;  // a2^dag
    expected(7, 7) = -1.0;  // a2
    CHECK((compose_u_all(c).m - expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(parity_expectation_matrix({0.0, 1.0, 1.0, 0.0}).expectation ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("C block invertible across a grid") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.0, 1.5), ue(0.2, 1.0),
        up(0.05, kPi - 0.05);
    for (int i = 0; i < 100; ++i) {
      const ComponentMatrices c = build_component_matrices(ue(rng), ue(rng), up(rng), ur(rng));
      CHECK(std::abs(compose_u_all(c).block_c().determinant()) > 1e-12);
    }
  }
}

TEST_CASE("parity expectation") {
  SUBCASE("ideal fringe extremes") {
    CHECK(parity_expectation_matrix({2.0, 1.0, 1.0, kPi / 2.0}).expectation ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(parity_expectation_matrix({2.0, 1.0, 1.0, 0.0}).expectation ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }

  SUBCASE("lossy frozen point") {
    const LossyMziConfig cfg{1.0, 0.8, 1.0, 0.7};
    const double c2 = std::cos(0.7) * std::cos(0.7);
    const double omega = 2.0 * 0.8 * 3.0 * c2 + 1.8 * 0.2;
    const double expected = std::sqrt(2.0 / (omega + 2.0));
    CHECK(parity_expectation_closed(cfg).expectation ==
          doctest::Approx(expected).epsilon(1e-13));
    CHECK(parity_expectation_closed(cfg).omega == doctest::Approx(omega).epsilon(1e-13));
    CHECK(parity_expectation_matrix(cfg).expectation ==
          doctest::Approx(expected).epsilon(1e-10));
  }

  SUBCASE("vacuum probe always reports even parity") {
    for (double phi : {0.0, 0.4, 1.2}) {
      CHECK(parity_expectation_closed({0.0, 0.6, 0.9, phi}).expectation ==
            doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  SUBCASE("ideal reduction of the closed form") {
    for (double n : {0.5, 2.0, 7.0}) {
      for (double phi : {0.2, 0.9, 1.5}) {
        CHECK(parity_expectation_closed({n, 1.0, 1.0, phi}).expectation ==
              doctest::Approx(ideal_expectation(n, phi)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("determinant route equals the closed form on a random grid") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ur(0.0, 1.5), ue(0.2, 1.0),
        up(0.05, kPi - 0.05);
    for (int i = 0; i < 1000; ++i) {
      const LossyMziConfig cfg =
          LossyMziConfig::from_squeeze(ur(rng), ue(rng), ue(rng), up(rng));
      const double matrix_route = parity_expectation_matrix(cfg).expectation;
      const double closed = parity_expectation_closed(cfg).expectation;
      CHECK(std::abs(matrix_route - closed) <= 1e-9);
      CHECK(std::abs(matrix_route) <= 1.0 + 1e-9);
    }
  }

  SUBCASE("fringe symmetry phi -> pi - phi and pi-periodicity") {
    const LossyMziConfig base{1.5, 0.75, 0.85, 0.6};
    LossyMziConfig mirrored = base;
    mirrored.phi = kPi - base.phi;
    LossyMziConfig shifted = base;
    shifted.phi = base.phi + kPi;
    const double e0 = parity_expectation_closed(base).expectation;
    CHECK(parity_expectation_closed(mirrored).expectation ==
          doctest::Approx(e0).epsilon(1e-12));
    CHECK(parity_expectation_closed(shifted).expectation ==
          doctest::Approx(e0).epsilon(1e-12));
  }
}

TEST_CASE("phase variance") {
  SUBCASE("ideal operating point") {
    const ParityResult res = phase_variance({2.0, 1.0, 1.0, kPi / 2.0});
    CHECK(std::sqrt(res.variance_phase) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-12));
  }

  SUBCASE("matches the ideal closed pattern everywhere at full transmission") {
    for (double n : {1.0, 4.0}) {
      for (double phi : {0.3, 0.8, 1.3}) {
        const ParityResult res = phase_variance({n, 1.0, 1.0, phi});
        CHECK(std::sqrt(res.variance_phase) ==
              doctest::Approx(ideal_delta_phi(n, phi)).epsilon(1e-10));
      }
    }
  }

  SUBCASE("diverges at the fringe extremes once loss is present") {
    CHECK_THROWS_AS(phase_variance({2.0, 0.9, 1.0, kPi / 2.0}), DivergentEstimatorError);
    CHECK_THROWS_AS(phase_variance({2.0, 0.9, 0.9, 0.0}), DivergentEstimatorError);
    // approaching the extreme blows up smoothly
    const double v1 = phase_variance({2.0, 0.9, 1.0, 1.45}).variance_phase;
    const double v2 = phase_variance({2.0, 0.9, 1.0, 1.55}).variance_phase;
    CHECK(v2 > v1);
  }

  SUBCASE("never better than the Fisher bound") {
    const double phi_o = optimal_phase(1.0, 0.99, 1.0);
    const ParityResult res = phase_variance({1.0, 0.99, 1.0, phi_o});
    const double bound = qfi_closed({1.0, 0.99, 1.0, phi_o}).quantum_limit;
    CHECK(std::sqrt(res.variance_phase) >= bound - 1e-12);
  }

  SUBCASE("requires a nonempty probe") {
    CHECK_THROWS_AS(phase_variance({0.0, 0.9, 0.9, 0.7}), std::domain_error);
  }
}
