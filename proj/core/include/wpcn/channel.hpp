#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "wpcn/eh_model.hpp"

namespace wpcn {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// One device's links: downlink energy channel estimate (n_t x n_u),
// uplink data channel estimate (n_u x n_r), Frobenius-norm radii of the
// estimation-error balls, and the realizations the estimates were drawn
// from (used only for scoring and for the perfect-CSI scheme).
struct UserChannel {
  ComplexMatrix g_hat;   // power station -> device
  ComplexMatrix h_hat;   // device -> information receiver
  double g_radius = 0.0; // bound on ||G - g_hat||_F
  double h_radius = 0.0; // bound on ||H - h_hat||_F
  ComplexMatrix g_true;
  ComplexMatrix h_true;
};

// Static description of a network draw; everything a solver needs.
struct Scenario {
  std::vector<UserChannel> users;
  std::vector<EhParams> eh;       // harvester per device
  std::vector<double> eps;        // transmit-amplifier power multiplier per device
  std::vector<double> p_c_w;      // static circuit drain per device (W)
  double p_max_w = 0.0;           // downlink transmit power cap (W)
  double t_max_s = 1.0;           // slot length (s)
  double sigma_n2_w = 0.0;        // receiver noise power (W)
  int n_t = 0;                    // power-station antennas
  int n_r = 0;                    // information-receiver antennas
  int n_u = 0;                    // device antennas
};

// Knobs for random scenario generation; mirrors the JSON config schema.
struct ScenarioConfig {
  int n_t = 4;
  int n_r = 4;
  int n_u = 2;
  int user_count = 4;
  double min_distance_m = 2.0;
  double max_distance_m = 20.0;
  double ir_distance_m = 100.0;
  double carrier_hz = 915e6;
  double pathloss_exponent = 3.6;
  double rician_k_db = 3.0;
  double gain_ps_dbi = 10.0;
  double gain_ir_dbi = 2.0;
  double sigma_n2_dbm = -95.0;
  double sigma_est2 = 0.05;       // normalized CSI error energy
  EhParams eh{0.024, 1500.0, 0.0022};
  double p_max_dbm = 35.0;
  double t_max_s = 1.0;
  double eps = 5.0;
  double p_c_w = 5e-6;
};

// Distance-dependent loss in dB: free space out to a 5 m breakpoint,
// then a steeper exponent beyond it.
double path_loss_db(double distance_m, double carrier_hz, double exponent);

// Draws device placements and channels.  Downlink is Rician with a
// deterministic line-of-sight component per device; uplink is Rayleigh.
// Estimation errors are drawn inside Frobenius balls whose radii scale
// with sqrt(sigma_est2) times the realized channel's spectral norm, and
// estimates are the realizations minus those errors, so the truth always
// lies inside the design ball.
Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

// Draws `count` admissible error pairs (dG, dH) for one device.  Each
// matrix independently lands exactly on the ball boundary with
// probability 1/2, otherwise uniformly inside; boundary draws stress
// worst-case checks harder than interior ones.
std::vector<std::pair<ComplexMatrix, ComplexMatrix>> sample_uncertainty(
    const UserChannel& user, int count, std::uint64_t seed);

// Guaranteed lower bounds on the singular values of H given estimate
// singular values `gamma_hat` and a Frobenius error bound `radius`:
// each value shrinks by the radius and clamps at zero.
Eigen::VectorXd worst_case_singular_values(const Eigen::VectorXd& gamma_hat,
                                           double radius);

// Minimum received RF power over the error ball when the station sends
// rank-one power p along unit beam u:
//   p * max(||g_hat^H u|| - radius, 0)^2.
double worst_case_harvest_power(const ComplexMatrix& g_hat,
                                const ComplexVector& u, double p,
                                double radius);

// Error matrix attaining the worst case above (norm = radius, aligned
// against the estimate's response to u).  Zero matrix if the response
// is already zero.
ComplexMatrix worst_case_harvest_witness(const ComplexMatrix& g_hat,
                                         const ComplexVector& u,
                                         double radius);

// Robust feasibility certificate for "received power >= theta for all
// G in the ball": checks positive semidefiniteness of the S-procedure
// block matrix at multiplier `omega`.  V is the (Hermitian PSD) transmit
// covariance.  Tolerance is relative: min eigenvalue >= -1e-9 * ||block||.
bool s_procedure_certify(const ComplexMatrix& V, double omega, double theta,
                         const ComplexMatrix& g_hat, double radius);

// Searches omega over a log grid on [1e-6, 1e6] and refines by ternary
// search (the certificate's minimum eigenvalue is concave in omega).
// Returns true if any multiplier certifies; best_omega receives the
// maximizer when non-null.
bool s_procedure_search(const ComplexMatrix& V, double theta,
                        const ComplexMatrix& g_hat, double radius,
                        double* best_omega = nullptr);

}  // namespace wpcn
