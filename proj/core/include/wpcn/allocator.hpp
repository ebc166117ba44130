#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpcn/channel.hpp"

namespace wpcn {

enum class Objective { max_sum, max_min };
enum class Scheme { proposed, linear_baseline, non_robust, perfect_csi };

const char* to_string(Objective o);
const char* to_string(Scheme s);
std::optional<Objective> objective_from_string(const std::string& s);
std::optional<Scheme> scheme_from_string(const std::string& s);

struct SolverOptions {
  Objective objective = Objective::max_sum;
  Scheme scheme = Scheme::proposed;
  int tau0_grid_points = 50;     // charging-time grid resolution in solve()
  int beam_multistarts = 2;      // gradient-refinement starts (0 = candidates only)
  double bisection_tol = 1e-9;   // relative tolerance of scalar root searches
  int sca_max_iters = 20;
};

// Complete transmission plan for one slot.
struct AllocationPolicy {
  double tau0 = 0.0;                    // charging time (s)
  std::vector<double> tau;              // uplink time per device (s)
  ComplexVector beam;                   // unit-norm energy beam
  std::vector<Eigen::VectorXd> lambda;  // eigenmode transmit powers per device (W)
  std::vector<double> theta;            // design (worst-case) RF input per device (W)
  std::vector<double> rates;            // design throughput per device (bits/s/Hz x s)
};

struct SolveReport {
  double objective_value = 0.0;
  AllocationPolicy policy;
  std::map<std::string, double> kkt_residuals;
  int sca_iterations = 0;
  std::vector<double> sca_objective_history;  // objective after each SCA pass
  std::vector<bool> feasible_users;     // false = dropped (non-positive energy budget)
  std::vector<double> tau0_grid;        // grid scanned by solve(), for plotting
  std::vector<double> objective_grid;   // objective at each grid point
  std::vector<std::string> warnings;
};

struct WaterfillResult {
  Eigen::VectorXd lambda;   // per-mode powers, sums to the budget
  double water_level = 0.0; // common level mu over active modes
  bool no_usable_mode = false;
};

// Classic water-filling: maximize sum_i log2(1 + lambda_i g_i) subject to
// sum lambda = budget, lambda >= 0.  `gains` entries are per-mode SNR per
// Watt; nonpositive gains are never filled.  Budget <= 0 or all gains
// nonpositive yields all-zero powers (and no_usable_mode accordingly).
WaterfillResult waterfill(const Eigen::VectorXd& gains, double budget,
                          double tol = 1e-9);

// Throughput of one device transmitting for tau_k seconds with energy
// budget `energy` (J), amplifier multiplier eps, worst-case channel
// singular values gamma_star and noise sigma_n2: water-fills the radiated
// energy-per-second budget energy/(eps*tau_k) across eigenmodes.
// Zero when tau_k or energy is nonpositive.
double user_rate(double tau_k, double energy, const Eigen::VectorXd& gamma_star,
                 double sigma_n2, double eps);

// Splits t_wit seconds among devices to maximize total throughput.
// Devices with nonpositive budget or no usable channel mode get zero
// time.  Marginal rates d(rate_k)/d(tau_k) equalize across devices that
// receive time (unless capped by construction).
std::vector<double> allocate_time_sum(const std::vector<double>& budgets,
                                      const std::vector<Eigen::VectorXd>& gamma_stars,
                                      double t_wit, double sigma_n2,
                                      const std::vector<double>& eps,
                                      double tol = 1e-9);

// Splits t_wit seconds to maximize the minimum device throughput.
// Returns {nu, tau}: every positive-budget device achieves rate nu.  If
// any device has a nonpositive budget the max-min value is zero and all
// times are zero.
std::pair<double, std::vector<double>> allocate_time_maxmin(
    const std::vector<double>& budgets,
    const std::vector<Eigen::VectorXd>& gamma_stars, double t_wit,
    double sigma_n2, const std::vector<double>& eps, double tol = 1e-9);

// Picks the unit-norm energy beam for a given charging time: evaluates
// per-device dominant directions and their simplex-weighted combinations
// against the end objective, then refines the leaders by projected
// gradient ascent when options.beam_multistarts > 0.
ComplexVector optimize_beam(const Scenario& scenario, double tau0,
                            Objective objective, const SolverOptions& options);

// Full allocation for a fixed charging time and beam: worst-case RF
// input via the closed form, energy budgets through the harvester curve,
// then time/power allocation per the objective.
SolveReport solve_fixed_tau0(const Scenario& scenario, double tau0,
                             const ComplexVector& beam, Objective objective);

// End-to-end solve: scans a uniform charging-time grid with per-point
// beam optimization and returns the best report (ties break toward the
// smaller charging time).  Scheme transformations (linear-harvester
// design, ignored uncertainty, perfect CSI) are applied per options.
SolveReport solve(const Scenario& scenario, const SolverOptions& options);

// Successive convex approximation path for a fixed charging time and
// beam: tangent majorants of the harvester curve, re-anchored each
// iteration until the anchor point stops moving.  `initial_anchors`
// (RF input powers, W) seeds the first majorant; defaults to each
// device's turn-on power.
SolveReport sca_solve_fixed_tau0(const Scenario& scenario, double tau0,
                                 const ComplexVector& beam, Objective objective,
                                 const SolverOptions& options,
                                 const std::vector<double>& initial_anchors = {});

// Comparison schemes (linear_baseline, non_robust, perfect_csi): applies
// the scheme's design-time model substitution and runs the same pipeline
// as solve().
SolveReport baseline_solve(const Scenario& scenario, const SolverOptions& options);

// How evaluate_policy models the harvester when scoring a policy.
struct EhEvalMode {
  bool linear = false;
  double eta = 0.5;
  static EhEvalMode nonlinear() { return {false, 0.0}; }
  static EhEvalMode linear_model(double eta) { return {true, eta}; }
};

// How evaluate_policy models the channels: design worst case, or a
// concrete error draw added to the estimates (one pair per device).
struct CsiEvalMode {
  bool sampled = false;
  std::vector<ComplexMatrix> delta_g;
  std::vector<ComplexMatrix> delta_h;
  static CsiEvalMode worst_case() { return {}; }
  static CsiEvalMode sampled_errors(std::vector<ComplexMatrix> dg,
                                    std::vector<ComplexMatrix> dh);
};

// Re-scores a fixed policy under a possibly different reality: recomputes
// each device's harvested energy for the realized channel and harvester
// model, scales transmit powers down if the planned spend exceeds the
// realized budget (to zero if the budget is negative), and recomputes
// rates against the realized channel's singular values.
std::vector<double> evaluate_policy(const AllocationPolicy& policy,
                                    const Scenario& scenario,
                                    const EhEvalMode& eh_mode,
                                    const CsiEvalMode& csi_mode);

// First-order optimality and feasibility residuals of a report, all
// normalized so "small" means "satisfied": inverse-gain water-level
// spread across active modes, energy-budget exhaustion gap, the
// charging/transmit time identity, total-time slack, and the transmit
// power cap gap.
std::map<std::string, double> verify_kkt(const SolveReport& report,
                                         const Scenario& scenario);

}  // namespace wpcn
