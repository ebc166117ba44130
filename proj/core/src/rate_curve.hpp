#pragma once

// Internal helpers shared by the allocation routines.  A RateCurve
// captures one device's water-filling throughput as a function of
// radiated power, with the analytic pieces (capacity, marginal rate and
// its derivative) needed by the Newton-based time allocators.  The
// allocation cores operate on UserSlot views so callers can cache the
// per-device curves across many invocations.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace wpcn::detail {

constexpr double kLn2 = 0.6931471805599453;

struct RateCurve {
  // Inverse gains 1/g_i sorted ascending, for usable (g_i > 0) modes.
  std::vector<double> inv_gains;
  std::vector<double> prefix;  // prefix[m] = sum of first m inverse gains

  RateCurve() = default;

  explicit RateCurve(const Eigen::VectorXd& gains) {
    for (Eigen::Index i = 0; i < gains.size(); ++i) {
      if (gains(i) > 0.0) inv_gains.push_back(1.0 / gains(i));
    }
    std::sort(inv_gains.begin(), inv_gains.end());
    prefix.resize(inv_gains.size() + 1, 0.0);
    for (std::size_t m = 0; m < inv_gains.size(); ++m) {
      prefix[m + 1] = prefix[m] + inv_gains[m];
    }
  }

  bool usable() const { return !inv_gains.empty(); }

  // Number of filled modes and the common water level for radiated
  // power P > 0.
  int active_modes(double P, double* mu_out) const {
    int m = 1;
    const int n = static_cast<int>(inv_gains.size());
    while (m < n && (P + prefix[m]) / m > inv_gains[m]) ++m;
    if (mu_out != nullptr) *mu_out = (P + prefix[m]) / m;
    return m;
  }

  // Capacity sum_i log2(mu / d_i) over active modes, in bits per second
  // of transmit time.
  double capacity(double P, double* mu_out = nullptr, int* m_out = nullptr) const {
    if (P <= 0.0 || inv_gains.empty()) {
      if (mu_out != nullptr) *mu_out = inv_gains.empty() ? 0.0 : inv_gains[0];
      if (m_out != nullptr) *m_out = 0;
      return 0.0;
    }
    double mu = 0.0;
    const int m = active_modes(P, &mu);
    double c = 0.0;
    for (int i = 0; i < m; ++i) c += std::log2(mu / inv_gains[i]);
    if (mu_out != nullptr) *mu_out = mu;
    if (m_out != nullptr) *m_out = m;
    return c;
  }

  // Marginal rate with respect to transmit time when the energy budget
  // is fixed: phi(P) = C(P) - P C'(P) = C(P) - P/(ln2 mu).  Strictly
  // increasing from 0; derivative phi'(P) = P / (m ln2 mu^2).
  double phi(double P, double* dphi_out = nullptr) const {
    if (P <= 0.0 || inv_gains.empty()) {
      if (dphi_out != nullptr) *dphi_out = 0.0;
      return 0.0;
    }
    double mu = 0.0;
    int m = 0;
    const double c = capacity(P, &mu, &m);
    if (dphi_out != nullptr) *dphi_out = P / (m * kLn2 * mu * mu);
    return c - P / (kLn2 * mu);
  }

  // Solves phi(P) = target for the unique positive root.  Newton with a
  // growing bracket and bisection fallback; `guess` warm-starts.
  double solve_phi(double target, double guess) const {
    if (target <= 0.0 || inv_gains.empty()) return 0.0;
    double lo = 0.0;
    double hi = std::max(guess, inv_gains[0]);
    while (phi(hi) < target) {
      lo = hi;
      hi *= 4.0;
      if (hi > 1e300) return hi;
    }
    double p = std::min(std::max(guess, lo), hi);
    if (p <= 0.0) p = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      double dphi = 0.0;
      const double f = phi(p, &dphi) - target;
      if (f > 0.0) {
        hi = p;
      } else {
        lo = p;
      }
      if (std::abs(f) <= 1e-13 * std::max(target, 1e-300)) break;
      double next = dphi > 0.0 ? p - f / dphi : -1.0;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 1e-15 * hi) break;
      p = next;
    }
    return p;
  }

  // Throughput for transmit time tau and radiated-energy budget e_rad
  // (the device's energy budget already divided by its amplifier
  // multiplier).
  double rate(double tau, double e_rad) const {
    if (tau <= 0.0 || e_rad <= 0.0 || inv_gains.empty()) return 0.0;
    return tau * capacity(e_rad / tau);
  }
};

// One schedulable device as seen by the time allocators.
struct UserSlot {
  int index = 0;
  double e_rad = 0.0;  // radiated-energy budget: energy / eps
  const RateCurve* curve = nullptr;
  double warm = 0.0;   // warm start (power or time, allocator-specific)

  // Time this device wants at marginal-rate level kappa, capped at cap_s.
  double time_at(double kappa, double cap_s) {
    const double p = curve->solve_phi(kappa, warm);
    warm = p;
    if (p <= 0.0) return cap_s;
    return std::min(e_rad / p, cap_s);
  }

  // Minimal time to reach rate nu (requires nu <= rate at cap_s):
  // safeguarded Newton on tau with the analytic slope phi.
  double time_for_rate(double nu, double cap_s, double guess) const {
    if (nu <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = cap_s;
    double tau = std::min(std::max(guess, 1e-12 * cap_s), cap_s);
    for (int it = 0; it < 200; ++it) {
      const double P = e_rad / tau;
      const double f = tau * curve->capacity(P) - nu;
      if (f > 0.0) {
        hi = tau;
      } else {
        lo = tau;
      }
      if (std::abs(f) <= 1e-13 * std::max(nu, 1e-300)) break;
      const double slope = curve->phi(P);
      double next = slope > 0.0 ? tau - f / slope : -1.0;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 1e-15 * hi) break;
      tau = next;
    }
    return tau;
  }
};

// Sum-throughput split of t_wit across slots.  Writes times into
// tau[slot.index]; returns the sum of rates at the final split.
inline double allocate_sum_core(std::vector<UserSlot>& slots, double t_wit,
                                double tol, std::vector<double>& tau) {
  if (slots.empty() || t_wit <= 0.0) return 0.0;
  if (slots.size() == 1) {
    tau[slots[0].index] = t_wit;
    return slots[0].curve->rate(t_wit, slots[0].e_rad);
  }

  const double equal_share = t_wit / static_cast<double>(slots.size());
  for (auto& s : slots) s.warm = s.e_rad / equal_share;

  const auto total_time = [&](double kappa) {
    double sum = 0.0;
    for (auto& s : slots) sum += s.time_at(kappa, t_wit);
    return sum;
  };

  // Total requested time decreases in the marginal-rate level kappa;
  // bracket geometrically, then bisect.
  double kappa_lo = 1.0;
  double kappa_hi = 1.0;
  if (total_time(1.0) > t_wit) {
    while (total_time(kappa_hi) > t_wit && kappa_hi < 1e12) kappa_hi *= 4.0;
    kappa_lo = kappa_hi / 4.0;
  } else {
    while (total_time(kappa_lo) <= t_wit && kappa_lo > 1e-300) kappa_lo /= 4.0;
    kappa_hi = kappa_lo * 4.0;
  }

  for (int it = 0; it < 200; ++it) {
    const double kappa = 0.5 * (kappa_lo + kappa_hi);
    const double total = total_time(kappa);
    if (total > t_wit) {
      kappa_lo = kappa;
    } else {
      kappa_hi = kappa;
    }
    if (std::abs(total - t_wit) <= tol * t_wit) break;
    if (kappa_hi - kappa_lo <= 1e-15 * kappa_hi) break;
  }

  const double kappa = 0.5 * (kappa_lo + kappa_hi);
  double sum = 0.0;
  for (auto& s : slots) {
    const double t = s.time_at(kappa, t_wit);
    tau[s.index] = t;
    sum += t;
  }
  double rate_sum = 0.0;
  if (sum > 0.0) {
    const double scale = t_wit / sum;  // exact window exhaustion
    for (auto& s : slots) {
      tau[s.index] *= scale;
      rate_sum += s.curve->rate(tau[s.index], s.e_rad);
    }
  }
  return rate_sum;
}

// Max-min split of t_wit across slots.  `all_schedulable` must be false
// when any device was dropped before building the slots (nonpositive
// budget or no usable mode): the minimum is then pinned at zero and the
// all-zero schedule attains it.  Returns the achieved common rate.
inline double allocate_maxmin_core(std::vector<UserSlot>& slots, double t_wit,
                                   double tol, bool all_schedulable,
                                   std::vector<double>& tau) {
  if (!all_schedulable || slots.empty() || t_wit <= 0.0) return 0.0;

  double nu_hi = std::numeric_limits<double>::infinity();
  for (const auto& s : slots) {
    nu_hi = std::min(nu_hi, s.curve->rate(t_wit, s.e_rad));
  }
  if (!(nu_hi > 0.0)) return 0.0;

  for (auto& s : slots) s.warm = t_wit / static_cast<double>(slots.size());
  const auto total_time = [&](double nu) {
    double sum = 0.0;
    for (auto& s : slots) {
      s.warm = s.time_for_rate(nu, t_wit, s.warm);
      sum += s.warm;
    }
    return sum;
  };

  double nu_lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double nu = 0.5 * (nu_lo + nu_hi);
    if (total_time(nu) <= t_wit) {
      nu_lo = nu;
    } else {
      nu_hi = nu;
    }
    if (nu_hi - nu_lo <= tol * std::max(nu_hi, 1e-300)) break;
  }

  double sum = 0.0;
  for (auto& s : slots) {
    s.warm = s.time_for_rate(nu_lo, t_wit, s.warm);
    sum += s.warm;
  }
  if (sum <= 0.0) return 0.0;
  // Hand leftover window time out pro rata; every rate rises, so the
  // minimum stays at or above the certified level.
  const double scale = t_wit / sum;
  double nu_achieved = std::numeric_limits<double>::infinity();
  for (auto& s : slots) {
    tau[s.index] = s.warm * scale;
    nu_achieved = std::min(nu_achieved, s.curve->rate(tau[s.index], s.e_rad));
  }
  return nu_achieved;
}

}  // namespace wpcn::detail
