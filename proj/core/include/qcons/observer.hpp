#pragma once

#include <span>
#include <vector>

#include "qcons/plant.hpp"

namespace qcons {

// High gain extended state observer. Component m of the correction gain is
// l_m / eps^m; component r+1 estimates the lumped disturbance F.
struct EsoConfig {
  int r = 0;
  std::vector<double> gains;       // l_1 .. l_{r+1}
  double epsilon = 0.01;           // in (0, 1)
  std::vector<double> sat_bounds;  // M_1 .. M_{r+1}, all positive
};

// Throws std::invalid_argument unless eps in (0,1), bounds positive, and the
// error matrix (companion of L^{r+1} + l_1 L^r + ... + l_{r+1}) is Hurwitz.
void validate(const EsoConfig& cfg);

struct EsoState {
  Vec estimates;  // r+1 entries, all zero at start
};

EsoState make_eso_state(int r);

// d estimates. estimates and d_estimates have r+1 entries; y is the measured
// output, u the applied input (it enters component r only).
void eso_rhs(const EsoConfig& cfg, std::span<const double> estimates, double y,
             double u, std::span<double> d_estimates);

// Componentwise clamp of the estimates to [-M_m, M_m].
Vec saturate(const EsoConfig& cfg, std::span<const double> estimates);

// Gains that place every observer pole at `pole` (< 0): binomial expansion of
// (L - pole)^{r+1}. r = 3, pole = -1 gives (4, 6, 4, 1).
std::vector<double> gains_from_pole(int r, double pole);

}  // namespace qcons
