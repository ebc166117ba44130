#include "wpcn/eh_model.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {

namespace {

void check_params(const EhParams& p) {
  if (!(p.max_power_w > 0.0) || !(p.slope_per_w > 0.0) || !(p.turn_on_w > 0.0)) {
    throw std::domain_error("EhParams: max_power_w, slope_per_w and turn_on_w must be positive");
  }
}

// Logistic term M / (1 + exp(-a (p - b))), computed as M * (1/(1+e)) so
// that at p = 0 it bit-matches M * zero_offset() and the harvested power
// subtracts to exactly zero.
double logistic(double p, const EhParams& params) {
  const double e = std::exp(-params.slope_per_w * (p - params.turn_on_w));
  return params.max_power_w * (1.0 / (1.0 + e));
}

}  // namespace

EhParams::EhParams(double max_power_w_, double slope_per_w_, double turn_on_w_)
    : max_power_w(max_power_w_), slope_per_w(slope_per_w_), turn_on_w(turn_on_w_) {
  check_params(*this);
}

double EhParams::zero_offset() const {
  return 1.0 / (1.0 + std::exp(slope_per_w * turn_on_w));
}

double harvest_nonlinear(double p_rf_w, const EhParams& params) {
  check_params(params);
  if (p_rf_w < 0.0) {
    throw std::domain_error("harvest_nonlinear: negative RF input power");
  }
  const double omega = params.zero_offset();
  const double psi = logistic(p_rf_w, params);
  return (psi - params.max_power_w * omega) / (1.0 - omega);
}

double harvest_linear(double p_rf_w, double eta) {
  if (p_rf_w < 0.0) {
    throw std::domain_error("harvest_linear: negative RF input power");
  }
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::domain_error("harvest_linear: eta must lie in (0, 1]");
  }
  return eta * p_rf_w;
}

double harvest_derivative(double p_rf_w, const EhParams& params) {
  check_params(params);
  if (p_rf_w < 0.0) {
    throw std::domain_error("harvest_derivative: negative RF input power");
  }
  const double omega = params.zero_offset();
  const double psi = logistic(p_rf_w, params);
  // d/dp Psi = a Psi (1 - Psi/M); the affine correction rescales by 1/(1-Omega).
  return params.slope_per_w * psi * (1.0 - psi / params.max_power_w) / (1.0 - omega);
}

double sca_upper_bound(double p_rf_w, double anchor_w, const EhParams& params) {
  if (p_rf_w < 0.0 || anchor_w < 0.0) {
    throw std::domain_error("sca_upper_bound: negative power argument");
  }
  return harvest_nonlinear(anchor_w, params) +
         harvest_derivative(anchor_w, params) * (p_rf_w - anchor_w);
}

}  // namespace wpcn
