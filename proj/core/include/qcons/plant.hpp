#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qcons {

using Vec = std::vector<double>;

// Agent dynamics in canonical coordinates: a chain of r integrators whose
// last derivative is F(rho, z, omega, t) + u, plus optional zero dynamics z.
struct AgentModel {
  int r = 0;
  int zero_dim = 0;
  std::function<double(std::span<const double> rho, std::span<const double> z,
                       double omega, double t)> F;
  // Writes d z into dz. May be empty when zero_dim == 0.
  std::function<void(std::span<const double> rho, std::span<const double> z,
                     double omega, double t, std::span<double> dz)> Z;
  std::function<double(double t)> disturbance;  // empty means omega == 0
  // Original state -> canonical state, applied to initial draws. Empty means
  // the draw is already canonical.
  std::function<Vec(const Vec& x)> to_canonical;
  std::string label;
};

// d rho / d z for one agent under input u. drho and dz must be presized to
// r and zero_dim.
void canonical_rhs(const AgentModel& m, std::span<const double> rho,
                   std::span<const double> z, double t, double u,
                   std::span<double> drho, std::span<double> dz);

struct PendulumParams {
  double p = 0.0;
  double q = 0.0;
  int index = 0;
};

// Heterogeneous pendulum family, index is 1-based: p = 10 + i, q = 2 + 0.2 i,
// disturbance sin(2t), relative degree 3, no zero dynamics.
PendulumParams pendulum_params(int index);
AgentModel pendulum_model(int index);

// x = (angle, rate, actuator) -> rho. The third coordinate absorbs the
// gravity terms so the chain form is exact.
Vec pendulum_transform(const Vec& x, const PendulumParams& p);
Vec pendulum_transform_inverse(const Vec& rho, const PendulumParams& p);

// Reference linear chain: last row of the state matrix is
// (0, -k1, ..., -k_{r-1}) and the input enters the last component.
struct LinearCounterpart {
  int r = 0;
  std::vector<double> k_gains;  // r - 1 entries

  std::vector<std::vector<double>> state_matrix() const;
};

void linear_counterpart_rhs(const LinearCounterpart& lc,
                            std::span<const double> rho_star, double u_star,
                            std::span<double> drho_star);

// s = k1 rho1 + ... + k_{r-1} rho_{r-1} + rho_r.
double composite_s(std::span<const double> rho,
                   std::span<const double> k_gains);

// The gains are admissible iff L^{r-1} + k_{r-1} L^{r-2} + ... + k1 is
// Hurwitz. r == 1 (empty gains) is trivially admissible.
bool k_gains_hurwitz(const std::vector<double>& k_gains);
void validate_k_gains(const std::vector<double>& k_gains);  // throws if not

}  // namespace qcons
