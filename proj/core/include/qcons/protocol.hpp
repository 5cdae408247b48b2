#pragma once

#include <span>
#include <vector>

#include "qcons/codec.hpp"
#include "qcons/plant.hpp"

namespace qcons {

// Sampled data consensus protocol parameters shared by all agents.
struct ProtocolParams {
  double T = 0.05;              // sampling period, > 0
  std::vector<double> k_gains;  // k_1 .. k_{r-1}, Hurwitz (see plant)
  int K = 1;                    // quantizer levels each side
  ScalingSchedule schedule;
  double C_s = 0.0;             // bound assumed on |s_i(0)|, > 0
};

void validate(const ProtocolParams& p);

// Feedback linearization term with full state knowledge:
// k_1 rho_2 + ... + k_{r-1} rho_r + F(rho, z, omega, t).
double theta_full(const AgentModel& m, std::span<const double> rho,
                  std::span<const double> z, double t,
                  std::span<const double> k_gains);

// Same role built from saturated observer estimates rho_bar (r+1 entries);
// the last entry stands in for F.
double theta_eso(std::span<const double> rho_bar,
                 std::span<const double> k_gains);

// u = -theta + sum of (decoded neighbor xi - own xi) terms. The neighbor sum
// is held constant over the sampling interval.
double control(double theta, double neighbor_sum);

}  // namespace qcons
