#include "wpcn/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wpcn/errors.hpp"
#include "wpcn/rng.hpp"

namespace wpcn {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kBreakpointM = 5.0;

double db_to_linear_power(double db) { return std::pow(10.0, db / 10.0); }

double free_space_db(double distance_m, double carrier_hz) {
  const double wavelength = kSpeedOfLight / carrier_hz;
  return 20.0 * std::log10(4.0 * M_PI * distance_m / wavelength);
}

// Fills a matrix with iid unit-variance complex normals in a fixed
// (row-major) order so draws are reproducible across Eigen versions.
void fill_complex_normal(ComplexMatrix& m, RandomStream& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rng.complex_normal();
    }
  }
}

// Uniform draw from the Frobenius ball of radius `radius`, or from its
// boundary when `on_boundary`.  Consumes the same number of stream
// values regardless of radius so zero-radius users stay stream-aligned
// with positive-radius ones.
ComplexMatrix ball_draw(Eigen::Index rows, Eigen::Index cols, double radius,
                        bool on_boundary, RandomStream& rng) {
  ComplexMatrix dir(rows, cols);
  fill_complex_normal(dir, rng);
  const double u = rng.uniform();
  const double norm = dir.norm();
  if (norm == 0.0 || radius == 0.0) return ComplexMatrix::Zero(rows, cols);
  // Real dimension of the ball is 2*rows*cols; the radial CDF inverse is
  // u^(1/dim) for uniform-in-ball mass.
  const double dim = 2.0 * static_cast<double>(rows * cols);
  const double r = on_boundary ? radius : radius * std::pow(u, 1.0 / dim);
  return dir * (r / norm);
}

ComplexVector steering_vector(int n, double angle_rad) {
  ComplexVector a(n);
  for (int i = 0; i < n; ++i) {
    const double phase = M_PI * static_cast<double>(i) * std::sin(angle_rad);
    a(i) = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return a;
}

void validate_config(const ScenarioConfig& c) {
  if (c.n_t < 1 || c.n_r < 1 || c.n_u < 1) {
    throw ConfigError("scenario: antenna counts must be at least 1");
  }
  if (c.user_count < 1) {
    throw ConfigError("scenario: users.count must be at least 1");
  }
  if (!(c.min_distance_m > 0.0) || !(c.max_distance_m >= c.min_distance_m)) {
    throw ConfigError("scenario: device distance range must satisfy 0 < min <= max");
  }
  if (!(c.ir_distance_m > 0.0)) {
    throw ConfigError("scenario: receiver distance must be positive");
  }
  if (!(c.carrier_hz > 0.0)) {
    throw ConfigError("scenario: carrier frequency must be positive");
  }
  if (!(c.pathloss_exponent >= 2.0)) {
    throw ConfigError("scenario: path-loss exponent must be at least 2");
  }
  if (c.sigma_est2 < 0.0) {
    throw ConfigError("scenario: csi.sigma_est2 must be nonnegative");
  }
  if (!(c.eps > 1.0)) {
    throw ConfigError("scenario: amplifier multiplier eps must exceed 1");
  }
  if (c.p_c_w < 0.0) {
    throw ConfigError("scenario: circuit power must be nonnegative");
  }
  if (!(c.t_max_s > 0.0)) {
    throw ConfigError("scenario: slot length must be positive");
  }
}

}  // namespace

double path_loss_db(double distance_m, double carrier_hz, double exponent) {
  if (!(distance_m > 0.0) || !(carrier_hz > 0.0)) {
    throw std::domain_error("path_loss_db: distance and carrier must be positive");
  }
  if (distance_m <= kBreakpointM) {
    return free_space_db(distance_m, carrier_hz);
  }
  return free_space_db(kBreakpointM, carrier_hz) +
         10.0 * exponent * std::log10(distance_m / kBreakpointM);
}

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  validate_config(config);

  Scenario sc;
  sc.n_t = config.n_t;
  sc.n_r = config.n_r;
  sc.n_u = config.n_u;
  sc.p_max_w = db_to_linear_power(config.p_max_dbm - 30.0);
  sc.t_max_s = config.t_max_s;
  sc.sigma_n2_w = db_to_linear_power(config.sigma_n2_dbm - 30.0);

  const double rician_k = db_to_linear_power(config.rician_k_db);
  const double los_scale = std::sqrt(rician_k / (rician_k + 1.0));
  const double nlos_scale = std::sqrt(1.0 / (rician_k + 1.0));
  const double err_scale = std::sqrt(config.sigma_est2);

  // Uplink loss is common to all devices (fixed station-to-receiver hop).
  const double up_loss_db =
      path_loss_db(config.ir_distance_m, config.carrier_hz, config.pathloss_exponent) -
      config.gain_ir_dbi;
  const double up_amp = std::pow(10.0, -up_loss_db / 20.0);

  RandomStream rng(seed);
  sc.users.reserve(config.user_count);
  for (int k = 0; k < config.user_count; ++k) {
    const double d = rng.uniform(config.min_distance_m, config.max_distance_m);
    const double aod = rng.uniform(-M_PI, M_PI);
    const double aoa = rng.uniform(-M_PI, M_PI);

    const double down_loss_db =
        path_loss_db(d, config.carrier_hz, config.pathloss_exponent) - config.gain_ps_dbi;
    const double down_amp = std::pow(10.0, -down_loss_db / 20.0);

    UserChannel u;
    ComplexMatrix scatter(config.n_t, config.n_u);
    fill_complex_normal(scatter, rng);
    const ComplexMatrix los =
        steering_vector(config.n_t, aod) * steering_vector(config.n_u, aoa).adjoint();
    u.g_true = down_amp * (los_scale * los + nlos_scale * scatter);

    ComplexMatrix uplink(config.n_u, config.n_r);
    fill_complex_normal(uplink, rng);
    u.h_true = up_amp * uplink;

    u.g_radius = err_scale * u.g_true.operatorNorm();
    u.h_radius = err_scale * u.h_true.operatorNorm();

    const ComplexMatrix dg = ball_draw(config.n_t, config.n_u, u.g_radius, false, rng);
    const ComplexMatrix dh = ball_draw(config.n_u, config.n_r, u.h_radius, false, rng);
    u.g_hat = u.g_true - dg;
    u.h_hat = u.h_true - dh;

    sc.users.push_back(std::move(u));
    sc.eh.push_back(config.eh);
    sc.eps.push_back(config.eps);
    sc.p_c_w.push_back(config.p_c_w);
  }
  return sc;
}

std::vector<std::pair<ComplexMatrix, ComplexMatrix>> sample_uncertainty(
    const UserChannel& user, int count, std::uint64_t seed) {
  if (count < 0) {
    throw std::domain_error("sample_uncertainty: count must be nonnegative");
  }
  RandomStream rng(seed);
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> draws;
  draws.reserve(count);
  for (int i = 0; i < count; ++i) {
    const bool g_boundary = rng.uniform() < 0.5;
    const bool h_boundary = rng.uniform() < 0.5;
    ComplexMatrix dg = ball_draw(user.g_hat.rows(), user.g_hat.cols(),
                                 user.g_radius, g_boundary, rng);
    ComplexMatrix dh = ball_draw(user.h_hat.rows(), user.h_hat.cols(),
                                 user.h_radius, h_boundary, rng);
    draws.emplace_back(std::move(dg), std::move(dh));
  }
  return draws;
}

Eigen::VectorXd worst_case_singular_values(const Eigen::VectorXd& gamma_hat,
                                           double radius) {
  if (radius < 0.0) {
    throw std::domain_error("worst_case_singular_values: negative radius");
  }
  return (gamma_hat.array() - radius).max(0.0);
}

double worst_case_harvest_power(const ComplexMatrix& g_hat,
                                const ComplexVector& u, double p,
                                double radius) {
  if (g_hat.rows() != u.size()) {
    throw std::domain_error("worst_case_harvest_power: beam/channel dimension mismatch");
  }
  if (p < 0.0 || radius < 0.0) {
    throw std::domain_error("worst_case_harvest_power: negative power or radius");
  }
  const double un = u.norm();
  if (un == 0.0) {
    throw std::domain_error("worst_case_harvest_power: zero beam vector");
  }
  const double response = (g_hat.adjoint() * (u / un)).norm();
  const double shrunk = std::max(response - radius, 0.0);
  return p * shrunk * shrunk;
}

ComplexMatrix worst_case_harvest_witness(const ComplexMatrix& g_hat,
                                         const ComplexVector& u,
                                         double radius) {
  if (g_hat.rows() != u.size()) {
    throw std::domain_error("worst_case_harvest_witness: beam/channel dimension mismatch");
  }
  if (radius < 0.0) {
    throw std::domain_error("worst_case_harvest_witness: negative radius");
  }
  const double un = u.norm();
  if (un == 0.0) {
    throw std::domain_error("worst_case_harvest_witness: zero beam vector");
  }
  const ComplexVector unit = u / un;
  const ComplexVector response = g_hat.adjoint() * unit;  // n_u entries
  const double rn = response.norm();
  if (rn < 1e-300) {
    return ComplexMatrix::Zero(g_hat.rows(), g_hat.cols());
  }
  // Shifts the response vector straight toward zero; saturates once the
  // radius exceeds the response norm (residual response stays at zero).
  const double step = std::min(radius, rn);
  return -(step / rn) * (unit * response.adjoint());
}

namespace {

// S-procedure block matrix for the robust harvest constraint at
// multiplier omega.  gvec is the column-stacked channel estimate and
// V_big = I_{n_u} (x) V acts on stacked error vectors.
ComplexMatrix certificate_matrix(const ComplexMatrix& V, double omega,
                                 double theta, const ComplexMatrix& g_hat,
                                 double radius) {
  const Eigen::Index n_t = V.rows();
  const Eigen::Index n_u = g_hat.cols();
  const Eigen::Index n = n_t * n_u;

  ComplexMatrix big = ComplexMatrix::Zero(n + 1, n + 1);
  Eigen::Map<const ComplexVector> gvec(g_hat.data(), n);

  for (Eigen::Index b = 0; b < n_u; ++b) {
    big.block(b * n_t, b * n_t, n_t, n_t) = V;
  }
  ComplexVector vg(n);
  for (Eigen::Index b = 0; b < n_u; ++b) {
    vg.segment(b * n_t, n_t) = V * gvec.segment(b * n_t, n_t);
  }
  big.block(0, n, n, 1) = vg;
  big.block(n, 0, 1, n) = vg.adjoint();
  const double quad = std::real(gvec.dot(vg));  // gvec^H V_big gvec
  big(n, n) = quad - omega * radius * radius - theta;
  big.topLeftCorner(n, n) += omega * ComplexMatrix::Identity(n, n);
  return big;
}

double min_eig_and_norm(const ComplexMatrix& m, double* spectral_norm) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (spectral_norm != nullptr) {
    *spectral_norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  }
  return ev.minCoeff();
}

void validate_certificate_inputs(const ComplexMatrix& V,
                                 const ComplexMatrix& g_hat, double radius) {
  if (V.rows() != V.cols()) {
    throw std::domain_error("s_procedure: V must be square");
  }
  if (V.rows() != g_hat.rows()) {
    throw std::domain_error("s_procedure: V and channel estimate dimension mismatch");
  }
  if (radius < 0.0) {
    throw std::domain_error("s_procedure: negative radius");
  }
  const double scale = std::max(1.0, V.norm());
  if ((V - V.adjoint()).norm() > 1e-9 * scale) {
    throw std::domain_error("s_procedure: V must be Hermitian");
  }
  if (min_eig_and_norm((V + V.adjoint()) / 2.0, nullptr) < -1e-9 * scale) {
    throw std::domain_error("s_procedure: V must be positive semidefinite");
  }
}

}  // namespace

bool s_procedure_certify(const ComplexMatrix& V, double omega, double theta,
                         const ComplexMatrix& g_hat, double radius) {
  validate_certificate_inputs(V, g_hat, radius);
  if (omega < 0.0) {
    throw std::domain_error("s_procedure_certify: omega must be nonnegative");
  }
  const ComplexMatrix big = certificate_matrix(V, omega, theta, g_hat, radius);
  double norm = 0.0;
  const double min_eig = min_eig_and_norm(big, &norm);
  return min_eig >= -1e-9 * norm;
}

bool s_procedure_search(const ComplexMatrix& V, double theta,
                        const ComplexMatrix& g_hat, double radius,
                        double* best_omega) {
  validate_certificate_inputs(V, g_hat, radius);

  const auto min_eig_at = [&](double omega) {
    return min_eig_and_norm(certificate_matrix(V, omega, theta, g_hat, radius),
                            nullptr);
  };

  constexpr int kGridPoints = 40;
  constexpr double kLogLo = -6.0;
  constexpr double kLogHi = 6.0;
  double best_log = kLogLo;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridPoints; ++i) {
    const double lg = kLogLo + (kLogHi - kLogLo) * i / (kGridPoints - 1);
    const double v = min_eig_at(std::pow(10.0, lg));
    if (v > best_val) {
      best_val = v;
      best_log = lg;
    }
  }

  // The minimum eigenvalue is concave in omega (pointwise infimum of
  // affine functions), so ternary search around the best grid point
  // recovers maximizers that fall between grid nodes.
  const double step = (kLogHi - kLogLo) / (kGridPoints - 1);
  double lo = std::max(kLogLo, best_log - step);
  double hi = std::min(kLogHi, best_log + step);
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (min_eig_at(std::pow(10.0, m1)) < min_eig_at(std::pow(10.0, m2))) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const double refined = std::pow(10.0, (lo + hi) / 2.0);
  const double coarse = std::pow(10.0, best_log);
  const double omega =
      min_eig_at(refined) >= min_eig_at(coarse) ? refined : coarse;
  if (best_omega != nullptr) {
    *best_omega = omega;
  }
  return s_procedure_certify(V, omega, theta, g_hat, radius);
}

}  // namespace wpcn
