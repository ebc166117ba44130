#pragma once

namespace wpcn {

// Parameters of the saturating (logistic-family) RF energy-harvesting
// transfer function.  `max_power_w` is the asymptotic harvested power,
// `slope_per_w` controls how steeply the harvester turns on, and
// `turn_on_w` is the input power at the logistic midpoint.
struct EhParams {
  double max_power_w = 0.024;
  double slope_per_w = 1500.0;
  double turn_on_w = 0.0022;

  EhParams() = default;
  EhParams(double max_power_w_, double slope_per_w_, double turn_on_w_);

  // Logistic value at zero input, as a fraction of max_power_w.
  // Subtracting it keeps the zero-input harvest exactly zero.
  double zero_offset() const;
};

// Harvested power (W) for RF input power `p_rf_w` (W).  Exactly zero at
// zero input, approaches max_power_w as the input grows, strictly
// increasing in between.
double harvest_nonlinear(double p_rf_w, const EhParams& params);

// Idealized proportional harvester: eta * p_rf_w.
double harvest_linear(double p_rf_w, double eta);

// d/dp of harvest_nonlinear, used for tangent majorants.
double harvest_derivative(double p_rf_w, const EhParams& params);

// First-order expansion of harvest_nonlinear about `anchor_w`.  An upper
// bound on the true curve wherever the curve is concave (inputs at or
// above turn_on_w); callers anchoring below turn_on_w get the plain
// tangent, which is no longer a guaranteed bound.
double sca_upper_bound(double p_rf_w, double anchor_w, const EhParams& params);

}  // namespace wpcn
