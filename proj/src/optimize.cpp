#include "qmetro/optimize.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "qmetro/parity.hpp"

namespace qmetro {
namespace {

constexpr double kGuard = 1e-6;  // stay off the sin 2phi zeros at 0 and pi/2

double variance_at(double n, double eta1, double eta2, double phi) {
  return phase_variance(LossyMziConfig{n, eta1, eta2, phi}).variance_phase;
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

LossModel deduce_model(double eta2) {
  return eta2 == 1.0 ? LossModel::one_arm : LossModel::two_arm;
}

double model_eta(double eta1, double eta2) {
  return deduce_model(eta2) == LossModel::one_arm ? eta1 : std::sqrt(eta1 * eta2);
}

}  // namespace

double optimal_phase(double n, double eta1, double eta2) {
  LossyMziConfig{n, eta1, eta2, 0.0}.validate();
  if (!(n > 0.0)) {
    throw std::domain_error("optimal_phase: flat objective, n must be positive");
  }
  const double half_pi = std::numbers::pi / 2.0;
  if (eta1 == 1.0 && eta2 == 1.0) {
    return half_pi;  // the lossless error is monotone decreasing up to pi/2
  }

  const double lo = kGuard;
  const double hi = half_pi - kGuard;
  constexpr int kScan = 512;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double phi = lo + (hi - lo) * i / (kScan - 1);
    const double v = variance_at(n, eta1, eta2, phi);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double step = (hi - lo) / (kScan - 1);
  const double a = std::max(lo, lo + (best - 1) * step);
  const double b = std::min(hi, lo + (best + 1) * step);
  return golden_minimize([&](double phi) { return variance_at(n, eta1, eta2, phi); }, a, b, 1e-10);
}

PrecisionReport repeated_error(double n, double eta1, double eta2, double total_photons) {
  if (!(n > 0.0) || !(total_photons >= n)) {
    throw std::domain_error("repeated_error: need 0 < n <= N");
  }
  PrecisionReport rep;
  rep.phi_opt = optimal_phase(n, eta1, eta2);
  const LossyMziConfig cfg{n, eta1, eta2, rep.phi_opt};
  rep.f_q = qfi_closed(cfg).f_q;
  if (eta1 == 1.0 && eta2 == 1.0) {
    rep.delta_phi_single = 1.0 / std::sqrt(n * (n + 2.0));
  } else {
    rep.delta_phi_single = std::sqrt(phase_variance(cfg).variance_phase);
  }
  rep.delta_phi_repeated = rep.delta_phi_single / std::sqrt(total_photons / n);
  rep.limits = reference_limits(n, model_eta(eta1, eta2), deduce_model(eta2));
  return rep;
}

PhotonSearchResult optimal_photon_number(double total_photons, double eta1, double eta2,
                                         std::span<const double> n_grid) {
  if (!(total_photons > 0.0)) {
    throw std::domain_error("optimal_photon_number: budget must be positive");
  }
  std::vector<double> fallback;
  if (n_grid.empty()) {
    constexpr int kPoints = 200;
    const double lo = std::log(0.1), hi = std::log(total_photons);
    fallback.reserve(kPoints);
    for (int i = 0; i < kPoints; ++i) {
      fallback.push_back(std::min(std::exp(lo + (hi - lo) * i / (kPoints - 1)), total_photons));
    }
    fallback.front() = std::min(0.1, total_photons);
    fallback.back() = total_photons;
    n_grid = fallback;
  }
  for (double n : n_grid) {
    if (!(n > 0.0 && n <= total_photons)) {
      throw std::domain_error("optimal_photon_number: grid point outside (0, N]");
    }
  }

  auto objective = [&](double n) {
    return repeated_error(n, eta1, eta2, total_photons).delta_phi_repeated;
  };

  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(n_grid.size()); ++i) {
    const double v = objective(n_grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }

  PhotonSearchResult out;
  if (best == 0 || best == static_cast<int>(n_grid.size()) - 1) {
    out.n_opt = n_grid[best];
    out.delta_phi = best_val;
    out.interior = false;
    return out;
  }
  const double n_ref =
      golden_minimize(objective, n_grid[best - 1], n_grid[best + 1], 1e-6 * n_grid[best]);
  out.n_opt = n_ref;
  out.delta_phi = objective(n_ref);
  out.interior = true;
  return out;
}

double quantum_advantage_region(double n, LossModel model) {
  if (!(n > 0.0)) {
    throw std::domain_error("quantum_advantage_region: n must be positive");
  }
  auto beats_sql = [&](double eta) {
    const double f =
        model == LossModel::two_arm ? qfi_equal_loss(n, eta).f_q : qfi_one_arm(n, eta).f_q;
    return f > n;
  };
  double lo = 0.0, hi = 1.0;  // beats_sql(1) holds for every n > 0
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (beats_sql(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

MeasurementPlan make_plan(double total_photons, double n, double eta1, double eta2,
                          double center_estimate) {
  PrecisionReport rep = repeated_error(n, eta1, eta2, total_photons);
  MeasurementPlan plan;
  plan.total_photons = total_photons;
  plan.photons_per_shot = n;
  plan.repetitions = total_photons / n;
  plan.center_estimate = center_estimate;
  plan.optimal_point = rep.phi_opt;
  plan.predetection_shift = rep.phi_opt - center_estimate;
  // Estimating the shifted phase and subtracting the known bias leaves the
  // error untouched.
  plan.delta_phi_repeated = rep.delta_phi_repeated;
  return plan;
}

}  // namespace qmetro
