#include "qcons/plant.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace qcons {

void canonical_rhs(const AgentModel& m, std::span<const double> rho,
                   std::span<const double> z, double t, double u,
                   std::span<double> drho, std::span<double> dz) {
  const int r = m.r;
  if (static_cast<int>(rho.size()) != r ||
      static_cast<int>(drho.size()) != r ||
      static_cast<int>(z.size()) != m.zero_dim ||
      static_cast<int>(dz.size()) != m.zero_dim)
    throw std::invalid_argument("canonical_rhs: size mismatch");
  double omega = m.disturbance ? m.disturbance(t) : 0.0;
  for (int i = 0; i + 1 < r; ++i) drho[i] = rho[i + 1];
  drho[r - 1] = m.F(rho, z, omega, t) + u;
  if (m.zero_dim > 0) m.Z(rho, z, omega, t, dz);
}

PendulumParams pendulum_params(int index) {
  if (index < 1) throw std::invalid_argument("pendulum: index must be >= 1");
  return {10.0 + index, 2.0 + 0.2 * index, index};
}

AgentModel pendulum_model(int index) {
  PendulumParams pp = pendulum_params(index);
  AgentModel m;
  m.r = 3;
  m.zero_dim = 0;
  m.label = "pendulum-" + std::to_string(index);
  m.disturbance = [](double t) { return std::sin(2.0 * t); };
  m.F = [pp](std::span<const double> rho, std::span<const double>,
             double omega, double) {
    double s1 = std::sin(rho[0]);
    double c1 = std::cos(rho[0]);
    return -rho[2] - pp.p * s1 - pp.q * c1 - pp.p * rho[1] * c1 +
           pp.q * rho[1] * s1 + omega;
  };
  m.to_canonical = [pp](const Vec& x) { return pendulum_transform(x, pp); };
  return m;
}

Vec pendulum_transform(const Vec& x, const PendulumParams& p) {
  if (x.size() != 3)
    throw std::invalid_argument("pendulum_transform: need 3 coordinates");
  return {x[0], x[1], x[2] - p.p * std::sin(x[0]) - p.q * std::cos(x[0])};
}

Vec pendulum_transform_inverse(const Vec& rho, const PendulumParams& p) {
  if (rho.size() != 3)
    throw std::invalid_argument("pendulum_transform: need 3 coordinates");
  return {rho[0], rho[1],
          rho[2] + p.p * std::sin(rho[0]) + p.q * std::cos(rho[0])};
}

std::vector<std::vector<double>> LinearCounterpart::state_matrix() const {
  if (static_cast<int>(k_gains.size()) != r - 1)
    throw std::invalid_argument("linear counterpart: need r-1 gains");
  std::vector<std::vector<double>> A(r, std::vector<double>(r, 0.0));
  for (int i = 0; i + 1 < r; ++i) A[i][i + 1] = 1.0;
  for (int j = 1; j < r; ++j) A[r - 1][j] = -k_gains[j - 1];
  return A;
}

void linear_counterpart_rhs(const LinearCounterpart& lc,
                            std::span<const double> rho_star, double u_star,
                            std::span<double> drho_star) {
  const int r = lc.r;
  if (static_cast<int>(rho_star.size()) != r ||
      static_cast<int>(drho_star.size()) != r ||
      static_cast<int>(lc.k_gains.size()) != r - 1)
    throw std::invalid_argument("linear_counterpart_rhs: size mismatch");
  for (int i = 0; i + 1 < r; ++i) drho_star[i] = rho_star[i + 1];
  double acc = u_star;
  for (int j = 1; j < r; ++j) acc -= lc.k_gains[j - 1] * rho_star[j];
  drho_star[r - 1] = acc;
}

double composite_s(std::span<const double> rho,
                   std::span<const double> k_gains) {
  if (rho.size() != k_gains.size() + 1)
    throw std::invalid_argument("composite_s: need r-1 gains for r states");
  double s = rho.back();
  for (std::size_t j = 0; j < k_gains.size(); ++j) s += k_gains[j] * rho[j];
  return s;
}

bool k_gains_hurwitz(const std::vector<double>& k_gains) {
  const int d = static_cast<int>(k_gains.size());
  if (d == 0) return true;  // r == 1, no polynomial to check
  // Companion matrix of L^d + k_d L^{d-1} + ... + k_1.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int j = 0; j < d; ++j) C(j, d - 1) = -k_gains[j];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(C, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("k_gains_hurwitz: eigensolver failed");
  for (int i = 0; i < d; ++i)
    if (solver.eigenvalues()[i].real() >= -1e-9) return false;
  return true;
}

void validate_k_gains(const std::vector<double>& k_gains) {
  if (!k_gains_hurwitz(k_gains))
    throw std::invalid_argument(
        "k gains: associated polynomial is not Hurwitz");
}

}  // namespace qcons
