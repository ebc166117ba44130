#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rate_curve.hpp"
#include "wpcn/allocator.hpp"

namespace wpcn {

WaterfillResult waterfill(const Eigen::VectorXd& gains, double budget,
                          double tol) {
  (void)tol;  // the active-set solution is exact; kept for interface stability
  WaterfillResult out;
  out.lambda = Eigen::VectorXd::Zero(gains.size());

  std::vector<int> usable;
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    if (gains(i) > 0.0) usable.push_back(static_cast<int>(i));
  }
  out.no_usable_mode = usable.empty();
  if (usable.empty() || budget <= 0.0) {
    return out;
  }

  std::sort(usable.begin(), usable.end(),
            [&](int a, int b) { return gains(a) > gains(b); });

  // Water level mu = (budget + sum of included inverse gains) / m, with m
  // the largest count keeping every included mode above water.
  double inv_sum = 0.0;
  int m = 0;
  double mu = 0.0;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    const double d = 1.0 / gains(usable[i]);
    const double candidate_mu = (budget + inv_sum + d) / static_cast<double>(i + 1);
    if (candidate_mu <= d) break;
    inv_sum += d;
    m = static_cast<int>(i + 1);
    mu = candidate_mu;
  }
  for (int i = 0; i < m; ++i) {
    out.lambda(usable[i]) = mu - 1.0 / gains(usable[i]);
  }
  out.water_level = mu;
  return out;
}

double user_rate(double tau_k, double energy, const Eigen::VectorXd& gamma_star,
                 double sigma_n2, double eps) {
  if (!(sigma_n2 > 0.0)) {
    throw std::domain_error("user_rate: noise power must be positive");
  }
  if (!(eps > 0.0)) {
    throw std::domain_error("user_rate: amplifier multiplier must be positive");
  }
  if (tau_k <= 0.0 || energy <= 0.0) return 0.0;
  const Eigen::VectorXd gains = gamma_star.array().square() / sigma_n2;
  const detail::RateCurve curve(gains);
  return curve.rate(tau_k, energy / eps);
}

namespace {

void check_allocation_inputs(const std::vector<double>& budgets,
                             const std::vector<Eigen::VectorXd>& gamma_stars,
                             double sigma_n2, const std::vector<double>& eps) {
  if (budgets.size() != gamma_stars.size() || budgets.size() != eps.size()) {
    throw std::domain_error("time allocation: per-user array sizes disagree");
  }
  if (!(sigma_n2 > 0.0)) {
    throw std::domain_error("time allocation: noise power must be positive");
  }
  for (double e : eps) {
    if (!(e > 0.0)) {
      throw std::domain_error("time allocation: amplifier multipliers must be positive");
    }
  }
}

}  // namespace

std::vector<double> allocate_time_sum(const std::vector<double>& budgets,
                                      const std::vector<Eigen::VectorXd>& gamma_stars,
                                      double t_wit, double sigma_n2,
                                      const std::vector<double>& eps,
                                      double tol) {
  check_allocation_inputs(budgets, gamma_stars, sigma_n2, eps);
  std::vector<double> tau(budgets.size(), 0.0);

  std::vector<detail::RateCurve> curves;
  curves.reserve(budgets.size());
  for (const auto& g : gamma_stars) {
    curves.emplace_back(Eigen::VectorXd(g.array().square() / sigma_n2));
  }
  std::vector<detail::UserSlot> slots;
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    if (budgets[k] <= 0.0 || !curves[k].usable()) continue;
    slots.push_back({static_cast<int>(k), budgets[k] / eps[k], &curves[k], 0.0});
  }
  detail::allocate_sum_core(slots, t_wit, tol, tau);
  return tau;
}

std::pair<double, std::vector<double>> allocate_time_maxmin(
    const std::vector<double>& budgets,
    const std::vector<Eigen::VectorXd>& gamma_stars, double t_wit,
    double sigma_n2, const std::vector<double>& eps, double tol) {
  check_allocation_inputs(budgets, gamma_stars, sigma_n2, eps);
  std::vector<double> tau(budgets.size(), 0.0);

  std::vector<detail::RateCurve> curves;
  curves.reserve(budgets.size());
  for (const auto& g : gamma_stars) {
    curves.emplace_back(Eigen::VectorXd(g.array().square() / sigma_n2));
  }
  bool all_schedulable = true;
  std::vector<detail::UserSlot> slots;
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    if (budgets[k] <= 0.0 || !curves[k].usable()) {
      all_schedulable = false;
      continue;
    }
    slots.push_back({static_cast<int>(k), budgets[k] / eps[k], &curves[k], 0.0});
  }
  const double nu =
      detail::allocate_maxmin_core(slots, t_wit, tol, all_schedulable, tau);
  if (nu <= 0.0) {
    std::fill(tau.begin(), tau.end(), 0.0);
  }
  return {nu, tau};
}

}  // namespace wpcn
