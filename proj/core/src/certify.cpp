#include "qcons/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qcons::cert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRelSlack = 1e-12;  // strict inequalities get this much room

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void require_connected(const SpectralData& s) {
  if (s.n() < 2 || !s.connected)
    throw std::invalid_argument("certify: graph must be connected with n >= 2");
}

void require_gamma_open(double T, double gamma, const SpectralData& s) {
  require_connected(s);
  double rh = rho_h(s, T);
  if (!(gamma > rh && gamma < 1.0))
    throw std::invalid_argument("certify: gamma must lie in (rho_h, 1)");
}

}  // namespace

double k1(double T, double gamma, const SpectralData& s) {
  require_gamma_open(T, gamma, s);
  const double N = s.n();
  const double lN = s.lambdaN;
  const double dstar = s.max_degree;
  const double rh = rho_h(s, T);
  return std::sqrt(N) * T * T * lN * lN / (2.0 * gamma * (gamma - rh)) +
         (1.0 + 2.0 * T * dstar) / (2.0 * gamma);
}

int k_min(double T, double gamma, const SpectralData& s) {
  double need = k1(T, gamma, s);
  int k = static_cast<int>(std::floor(need - 0.5)) + 1;
  return std::max(k, 1);
}

double beta0_min(double T, double gamma, int K, double C_s,
                 const SpectralData& s) {
  require_gamma_open(T, gamma, s);
  if (K < 1) throw std::invalid_argument("beta0_min: K must be >= 1");
  if (!(C_s >= 0.0)) throw std::invalid_argument("beta0_min: C_s must be >= 0");
  const double lN = s.lambdaN;
  const double rh = rho_h(s, T);
  const double half = K + 0.5;
  double a = 2.0 * T * lN * C_s / (gamma * half);
  double b = C_s / half;
  double c = 2.0 * C_s * (gamma - rh) * (2.0 * gamma + T * lN) / (T * lN);
  return std::max({a, b, c});
}

double gamma_one_bit(double T, double eps0, const SpectralData& s) {
  require_connected(s);
  if (!(T > 0.0)) throw std::invalid_argument("gamma_one_bit: T must be > 0");
  if (!(eps0 > 0.0 && eps0 < 1.0))
    throw std::invalid_argument("gamma_one_bit: eps0 must lie in (0, 1)");
  return 1.0 - (1.0 - eps0) * T * s.lambda2;
}

double t_max_one_bit(int K, double eps0, const SpectralData& s) {
  require_connected(s);
  if (K < 1) throw std::invalid_argument("t_max_one_bit: K must be >= 1");
  if (!(eps0 > 0.0 && eps0 < 1.0))
    throw std::invalid_argument("t_max_one_bit: eps0 must lie in (0, 1)");
  const double N = s.n();
  const double l2 = s.lambda2;
  const double lN = s.lambdaN;
  const double dstar = s.max_degree;
  double num = 2.0 * K * eps0 * l2;
  double den = std::sqrt(N) * lN * lN + 2.0 * eps0 * l2 * dstar +
               (2.0 * K + 1.0) * (1.0 - eps0) * eps0 * l2 * l2;
  return num / den;
}

std::vector<std::string> CertReport::violated() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.ok) out.push_back(c.name);
  return out;
}

CertReport validate(const ProtocolParams& p, const SpectralData& s,
                    TheoremMode mode, double eps, double eps0, double C_s) {
  require_connected(s);
  CertReport rep;
  rep.mode = mode;
  rep.T_m = kNaN;
  rep.k1 = kNaN;
  rep.beta0_min = kNaN;

  const double T = p.T;
  const double gamma = p.schedule.gamma;
  const double l2 = s.lambda2;
  const double lN = s.lambdaN;

  auto push = [&rep](std::string name, bool ok, double margin,
                     std::string detail) {
    rep.checks.push_back({std::move(name), ok, margin, std::move(detail)});
  };

  // Sampling window. Theorem3 additionally caps T by T_m and restricts the
  // base window so rho_h = 1 - T lambda2.
  double T_hi = 2.0 / lN;
  if (mode == TheoremMode::Theorem3) {
    rep.T_m = t_max_one_bit(p.K, eps0, s);
    T_hi = std::min(2.0 / (l2 + lN), rep.T_m);
  }
  rep.T_window = {0.0, T_hi};
  {
    bool ok = T > 0.0 && T < T_hi * (1.0 + kRelSlack);
    push("sampling period", ok, std::min(T, T_hi - T),
         "T=" + fmt(T) + " window (0, " + fmt(T_hi) + ")");
  }

  double rh = T > 0.0 ? rho_h(s, T) : kNaN;
  rep.rho_h = rh;

  // Contraction factor window for gamma.
  bool gamma_ok = false;
  if (mode == TheoremMode::Theorem3) {
    if (!(eps0 > 0.0 && eps0 < 1.0)) {
      push("eps0 range", false, std::min(eps0, 1.0 - eps0),
           "eps0=" + fmt(eps0) + " window (0, 1)");
    } else {
      push("eps0 range", true, std::min(eps0, 1.0 - eps0),
           "eps0=" + fmt(eps0));
      double g_req = gamma_one_bit(T, eps0, s);
      rep.gamma_window = {g_req, g_req};
      double diff = std::abs(gamma - g_req);
      gamma_ok = diff <= 1e-9 * std::max(1.0, std::abs(g_req));
      push("gamma formula", gamma_ok, -diff,
           "gamma=" + fmt(gamma) + " required " + fmt(g_req));
      // The design rule leaves gamma above rho_h whenever T < T_m; record
      // the realized margin anyway.
      gamma_ok = gamma_ok && gamma > rh && gamma < 1.0;
    }
  } else {
    rep.gamma_window = {rh, 1.0};
    double margin = std::min(gamma - rh, 1.0 - gamma);
    gamma_ok = gamma > rh && gamma < 1.0;
    push("gamma window", gamma_ok, margin,
         "gamma=" + fmt(gamma) + " window (" + fmt(rh) + ", 1)");
  }

  // Quantizer size and initial gain need a valid contraction point.
  if (gamma_ok && gamma > rh && gamma < 1.0) {
    rep.k1 = k1(T, gamma, s);
    rep.k_min = k_min(T, gamma, s);
    rep.beta0_min = beta0_min(T, gamma, p.K, C_s, s);
    push("quantizer range", p.K >= rep.k_min,
         static_cast<double>(p.K - rep.k_min),
         "K=" + std::to_string(p.K) + " needs >= " + std::to_string(rep.k_min) +
             " (k1=" + fmt(rep.k1) + ")");
    bool b_ok = p.schedule.beta0 >
                rep.beta0_min * (1.0 - kRelSlack);
    push("beta0 floor", b_ok, p.schedule.beta0 - rep.beta0_min,
         "beta0=" + fmt(p.schedule.beta0) + " needs > " + fmt(rep.beta0_min));
  } else {
    rep.k_min = 0;
    push("quantizer range", false, kNaN,
         "not evaluable, gamma outside its window");
    push("beta0 floor", false, kNaN,
         "not evaluable, gamma outside its window");
  }

  // Scaling mode discipline per condition set.
  if (mode == TheoremMode::Theorem1) {
    bool ok = p.schedule.mode == ScalingMode::Geometric;
    push("schedule mode", ok, ok ? 0.0 : -1.0,
         ok ? "geometric" : "full information rule needs geometric scaling");
  } else {
    bool mode_ok = p.schedule.mode == ScalingMode::Floored;
    double want = std::sqrt(eps);
    bool floor_ok =
        mode_ok && std::abs(p.schedule.floor - want) <=
                       1e-9 * std::max(1.0, want);
    push("schedule mode", mode_ok, mode_ok ? 0.0 : -1.0,
         mode_ok ? "floored" : "observer based rule needs floored scaling");
    push("scaling floor", floor_ok,
         mode_ok ? -std::abs(p.schedule.floor - want) : kNaN,
         "floor=" + fmt(p.schedule.floor) + " required sqrt(eps)=" +
             fmt(want));
  }

  rep.feasible = rep.violated().empty();
  return rep;
}

std::string to_string(TheoremMode mode) {
  switch (mode) {
    case TheoremMode::Theorem1: return "full-information";
    case TheoremMode::Theorem2: return "observer-feedback";
    case TheoremMode::Theorem3: return "one-bit";
  }
  return "unknown";
}

std::string format_report(const CertReport& rep, bool key_value) {
  std::ostringstream os;
  char buf[160];
  if (key_value) {
    os << "mode=" << to_string(rep.mode) << "\n";
    os << "feasible=" << (rep.feasible ? 1 : 0) << "\n";
    std::snprintf(buf, sizeof(buf), "rho_h=%.12g\nk1=%.12g\nk_min=%d\n",
                  rep.rho_h, rep.k1, rep.k_min);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "beta0_min=%.12g\nT_window=%.12g,%.12g\n"
                  "gamma_window=%.12g,%.12g\nT_m=%.12g\n",
                  rep.beta0_min, rep.T_window.first, rep.T_window.second,
                  rep.gamma_window.first, rep.gamma_window.second, rep.T_m);
    os << buf;
    for (const auto& c : rep.checks) {
      std::string slug;
      for (char ch : c.name) slug += ch == ' ' ? '_' : ch;
      std::snprintf(buf, sizeof(buf), "check.%s.ok=%d\ncheck.%s.margin=%.12g\n",
                    slug.c_str(), c.ok ? 1 : 0, slug.c_str(), c.margin);
      os << buf;
    }
    return os.str();
  }

  os << "certificate (" << to_string(rep.mode) << ")\n";
  std::snprintf(buf, sizeof(buf), "  rho_h      = %.10g\n", rep.rho_h);
  os << buf;
  std::snprintf(buf, sizeof(buf), "  k1         = %.10g\n", rep.k1);
  os << buf;
  std::snprintf(buf, sizeof(buf), "  K_min      = %d\n", rep.k_min);
  os << buf;
  std::snprintf(buf, sizeof(buf), "  beta0_min  = %.10g\n", rep.beta0_min);
  os << buf;
  std::snprintf(buf, sizeof(buf), "  T window   = (%.10g, %.10g)\n",
                rep.T_window.first, rep.T_window.second);
  os << buf;
  std::snprintf(buf, sizeof(buf), "  gamma window = (%.10g, %.10g)\n",
                rep.gamma_window.first, rep.gamma_window.second);
  os << buf;
  if (rep.mode == TheoremMode::Theorem3) {
    std::snprintf(buf, sizeof(buf), "  T_m        = %.10g\n", rep.T_m);
    os << buf;
  }
  os << "  feasible   = " << (rep.feasible ? "yes" : "no") << "\n";
  for (const auto& c : rep.checks) {
    std::snprintf(buf, sizeof(buf), "  [%s] %-16s margin=%-14.6g %s\n",
                  c.ok ? " ok " : "FAIL", c.name.c_str(), c.margin,
                  c.detail.c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace qcons::cert
