#include "qcons/observer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcons {

void validate(const EsoConfig& cfg) {
  if (cfg.r < 1) throw std::invalid_argument("eso: r must be >= 1");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw std::invalid_argument("eso: epsilon must lie in (0, 1)");
  const int n = cfg.r + 1;
  if (static_cast<int>(cfg.gains.size()) != n)
    throw std::invalid_argument("eso: need r+1 gains");
  if (static_cast<int>(cfg.sat_bounds.size()) != n)
    throw std::invalid_argument("eso: need r+1 saturation bounds");
  for (double m : cfg.sat_bounds)
    if (!(m > 0.0))
      throw std::invalid_argument("eso: saturation bounds must be positive");
  // Error dynamics matrix E: -l_m down the first column, identity shifted
  // above the diagonal. Hurwitz E is what makes the peaking transient decay.
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    E(i, 0) = -cfg.gains[i];
    if (i + 1 < n) E(i, i + 1) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(E, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eso: eigensolver failed");
  for (int i = 0; i < n; ++i)
    if (solver.eigenvalues()[i].real() >= -1e-9)
      throw std::invalid_argument("eso: gain polynomial is not Hurwitz");
}

EsoState make_eso_state(int r) {
  EsoState st;
  st.estimates.assign(r + 1, 0.0);
  return st;
}

void eso_rhs(const EsoConfig& cfg, std::span<const double> estimates, double y,
             double u, std::span<double> d_estimates) {
  const int r = cfg.r;
  if (static_cast<int>(estimates.size()) != r + 1 ||
      static_cast<int>(d_estimates.size()) != r + 1)
    throw std::invalid_argument("eso_rhs: size mismatch");
  const double e = y - estimates[0];
  double scale = 1.0;
  for (int m = 0; m < r + 1; ++m) {
    scale /= cfg.epsilon;  // l_{m+1} / eps^{m+1}
    double inject = cfg.gains[m] * scale * e;
    if (m < r) {
      d_estimates[m] = estimates[m + 1] + inject;
      if (m == r - 1) d_estimates[m] += u;
    } else {
      d_estimates[m] = inject;
    }
  }
}

Vec saturate(const EsoConfig& cfg, std::span<const double> estimates) {
  if (estimates.size() != cfg.sat_bounds.size())
    throw std::invalid_argument("saturate: size mismatch");
  Vec out(estimates.size());
  for (std::size_t m = 0; m < estimates.size(); ++m)
    out[m] = std::clamp(estimates[m], -cfg.sat_bounds[m], cfg.sat_bounds[m]);
  return out;
}

std::vector<double> gains_from_pole(int r, double pole) {
  if (r < 1) throw std::invalid_argument("gains_from_pole: r must be >= 1");
  if (!(pole < 0.0))
    throw std::invalid_argument("gains_from_pole: pole must be negative");
  // (L - pole)^{r+1} = sum_m C(r+1, m) (-pole)^m L^{r+1-m}; the coefficient
  // of L^{r+1-m} is gain l_m.
  const int n = r + 1;
  std::vector<double> l(n);
  double binom = 1.0;
  double power = 1.0;
  for (int m = 1; m <= n; ++m) {
    binom = binom * (n - m + 1) / m;
    power *= -pole;
    l[m - 1] = binom * power;
  }
  return l;
}

}  // namespace qcons
