#include "qcons/protocol.hpp"

#include <stdexcept>

namespace qcons {

void validate(const ProtocolParams& p) {
  if (!(p.T > 0.0)) throw std::invalid_argument("protocol: T must be > 0");
  if (p.K < 1) throw std::invalid_argument("protocol: K must be >= 1");
  if (!(p.C_s > 0.0))
    throw std::invalid_argument("protocol: C_s must be > 0");
  validate_k_gains(p.k_gains);
  validate(p.schedule);
}

double theta_full(const AgentModel& m, std::span<const double> rho,
                  std::span<const double> z, double t,
                  std::span<const double> k_gains) {
  if (rho.size() != k_gains.size() + 1)
    throw std::invalid_argument("theta_full: need r-1 gains for r states");
  double omega = m.disturbance ? m.disturbance(t) : 0.0;
  double th = m.F(rho, z, omega, t);
  for (std::size_t j = 0; j < k_gains.size(); ++j)
    th += k_gains[j] * rho[j + 1];
  return th;
}

double theta_eso(std::span<const double> rho_bar,
                 std::span<const double> k_gains) {
  if (rho_bar.size() != k_gains.size() + 2)
    throw std::invalid_argument("theta_eso: need r+1 estimates");
  double th = rho_bar.back();  // disturbance estimate stands in for F
  for (std::size_t j = 0; j < k_gains.size(); ++j)
    th += k_gains[j] * rho_bar[j + 1];
  return th;
}

double control(double theta, double neighbor_sum) {
  return -theta + neighbor_sum;
}

}  // namespace qcons
