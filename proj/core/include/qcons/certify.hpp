#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcons/graph.hpp"
#include "qcons/protocol.hpp"

namespace qcons::cert {

// Which sufficient-condition set to check: Theorem1 is the full information
// protocol with geometric scaling, Theorem2 the observer based protocol with
// floored scaling, Theorem3 the one-bit (K = 1) design rule.
enum class TheoremMode { Theorem1, Theorem2, Theorem3 };

struct ConditionCheck {
  std::string name;
  bool ok = false;
  double margin = 0.0;  // positive means satisfied with room
  std::string detail;
};

struct CertReport {
  TheoremMode mode = TheoremMode::Theorem1;
  double rho_h = 0.0;
  double k1 = 0.0;          // NaN when gamma <= rho_h
  int k_min = 0;            // 0 when k1 is NaN
  double beta0_min = 0.0;   // NaN when k1 is NaN
  std::pair<double, double> T_window{0.0, 0.0};
  std::pair<double, double> gamma_window{0.0, 0.0};
  double T_m = 0.0;         // NaN unless Theorem3
  bool feasible = false;
  std::vector<ConditionCheck> checks;

  // Names of failed checks. feasible is true iff this is empty.
  std::vector<std::string> violated() const;
};

// Required quantizer half range before rounding:
// sqrt(N) T^2 lN^2 / (2 gamma (gamma - rho_h)) + (1 + 2 T d*) / (2 gamma).
// Throws when gamma <= rho_h or gamma >= 1.
double k1(double T, double gamma, const SpectralData& s);

// Smallest admissible integer K: floor(k1 - 1/2) + 1.
int k_min(double T, double gamma, const SpectralData& s);

// Tight lower bound on beta0: max of the three startup conditions. Throws
// under the same circumstances as k1.
double beta0_min(double T, double gamma, int K, double C_s,
                 const SpectralData& s);

// One-bit design: largest sampling period for which K levels suffice when
// gamma is tied to T by gamma_one_bit.
double t_max_one_bit(int K, double eps0, const SpectralData& s);

// gamma = 1 - (1 - eps0) T lambda2.
double gamma_one_bit(double T, double eps0, const SpectralData& s);

// Full audit of a parameter set against one condition set. eps is the
// observer gain parameter (ignored in Theorem1 mode), eps0 the one-bit
// design margin (Theorem3 only).
CertReport validate(const ProtocolParams& p, const SpectralData& s,
                    TheoremMode mode, double eps, double eps0, double C_s);

std::string to_string(TheoremMode mode);
std::string format_report(const CertReport& rep, bool key_value = false);

}  // namespace qcons::cert
