// Acceptance harness: ten end-to-end criteria, one pass/fail line each.
// Exits nonzero when any criterion fails. All tolerances are pinned here.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcons/certify.hpp"
#include "qcons/codec.hpp"
#include "qcons/config.hpp"
#include "qcons/engine.hpp"
#include "qcons/graph.hpp"
#include "qcons/quantizer.hpp"

#include "../support/helpers.hpp"

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

qcons::Graph five_cycle() {
  return qcons::from_edge_list(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}});
}

qcons::SimConfig preset_run(double epsilon) {
  qcons::RunSpec spec = qcons::make_preset("pendulum5");
  spec.epsilon = epsilon;
  qcons::SimConfig cfg = qcons::build_sim_config(spec);
  cfg.force = true;  // the benchmark gamma sits just inside its window's edge
  return cfg;
}

// ---------------------------------------------------------------- criterion 1
// Quantizer matches an independently transcribed branch table on a dense
// grid, is odd, and stays within half a cell while unsaturated.
Outcome c1_quantizer_grid() {
  auto oracle = [](int K, double v) {
    double a = std::fabs(v);
    int lv = 0;
    if (a < 0.5) {
      lv = 0;
    } else if (a >= K - 0.5) {
      lv = K;
    } else {
      for (int i = 1; i < K; ++i)
        if (a >= i - 0.5 && a < i + 0.5) {
          lv = i;
          break;
        }
    }
    return v < 0.0 ? -lv : lv;
  };
  long checked = 0, violations = 0;
  for (int K : {1, 2, 3, 10}) {
    qcons::Quantizer qz(K);
    const int lim = (K + 2) * 100;
    for (int i = -lim; i <= lim; ++i) {
      double v = i * 0.01;
      int got = qcons::quantize(qz, v);
      ++checked;
      if (got != oracle(K, v)) ++violations;
      if (got != -qcons::quantize(qz, -v)) ++violations;
      if (std::abs(got) > K) ++violations;
      if (std::fabs(v) <= K + 0.5 && std::fabs(v - got) > 0.5 + 1e-12)
        ++violations;
    }
  }
  std::ostringstream os;
  os << checked << " grid points, " << violations << " violations";
  return {violations == 0, os.str()};
}

// ---------------------------------------------------------------- criterion 2
// Spectral contraction factor: below one inside the admissible window, and
// equal to 1 - T lambda2 for small T.
Outcome c2_contraction_factor() {
  std::mt19937_64 rng(4242);
  int graphs = 0, samples = 0, violations = 0;
  while (graphs < 50) {
    int n = 2 + static_cast<int>(rng() % 7);
    auto edges = testutil::random_connected_edges(rng, n);
    if (!testutil::edges_connected(n, edges)) continue;
    qcons::SpectralData s = qcons::spectral(qcons::from_edge_list(n, edges));
    ++graphs;
    for (int t = 0; t < 20; ++t) {
      double T =
          testutil::uniform(rng, 1e-9, (2.0 / s.lambdaN) * (1.0 - 1e-12));
      double rh = qcons::rho_h(s, T);
      ++samples;
      if (!(rh < 1.0)) ++violations;
      if (T < 2.0 / (s.lambda2 + s.lambdaN) &&
          std::fabs(rh - (1.0 - T * s.lambda2)) > 1e-9)
        ++violations;
    }
  }
  std::ostringstream os;
  os << samples << " (graph, T) samples, " << violations << " violations";
  return {violations == 0, os.str()};
}

// ---------------------------------------------------------------- criterion 3
// Encoder and decoder stay bitwise identical, and the encoder tracks the
// signal within half a scaled cell while unsaturated.
Outcome c3_codec_identity() {
  std::mt19937_64 rng(777);
  long steps = 0, violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    qcons::ScalingSchedule sched;
    sched.beta0 = testutil::uniform(rng, 0.5, 40.0);
    sched.gamma = testutil::uniform(rng, 0.5, 0.995);
    if (trial % 2 == 0) {
      sched.mode = qcons::ScalingMode::Geometric;
    } else {
      sched.mode = qcons::ScalingMode::Floored;
      sched.floor = sched.beta0 * testutil::uniform(rng, 0.001, 0.5);
    }
    qcons::Quantizer qz(1 + static_cast<int>(rng() % 10));
    qcons::EncoderState enc;
    qcons::DecoderState dec;
    double sig = testutil::uniform(rng, -sched.beta0, sched.beta0);
    for (int k = 0; k < 50; ++k) {
      double beta = qcons::scaling_at(sched, k);
      sig += testutil::uniform(rng, -2.0, 2.0) * beta;
      if (rng() % 20 == 0) sig += 10.0 * beta;  // provoke saturation
      qcons::EncodeResult er = qcons::encode_step(enc, sig, beta, qz);
      qcons::decode_step(dec, er.symbol, beta, qz);
      ++steps;
      if (dec.s_hat != enc.xi) ++violations;  // exact, not approximate
      if (!er.saturated && std::fabs(sig - enc.xi) > beta * (0.5 + 1e-12))
        ++violations;
    }
  }
  std::ostringstream os;
  os << steps << " codec steps, " << violations << " violations";
  return {violations == 0, os.str()};
}

// ---------------------------------------------------------------- criterion 4
// Full information loop under a certified design: disagreement stays inside
// the geometric envelope, no saturation, outputs meet.
Outcome c4_full_info_envelope() {
  qcons::SpectralData s = qcons::spectral(five_cycle());
  const double T = 0.05, gamma = 0.96, C_s = 40.0;
  const int K = qcons::cert::k_min(T, gamma, s);
  const double beta0 = 1.1 * qcons::cert::beta0_min(T, gamma, K, C_s, s);

  qcons::SimConfig cfg;
  cfg.graph = five_cycle();
  for (int i = 1; i <= 5; ++i) cfg.agents.push_back(qcons::pendulum_model(i));
  cfg.protocol.T = T;
  cfg.protocol.k_gains = {4.0, 4.0};
  cfg.protocol.K = K;
  cfg.protocol.C_s = C_s;
  cfg.protocol.schedule = {beta0, gamma, qcons::ScalingMode::Geometric, 0.0};
  cfg.mode = qcons::RunMode::FullInfo;
  cfg.cert_mode = qcons::cert::TheoremMode::Theorem1;
  cfg.duration = 30.0;
  cfg.seed = 1;
  cfg.label = "envelope";
  qcons::SimResult res = qcons::run(cfg);  // throws if the certificate fails

  const double rh = qcons::rho_h(s, T);
  const double alpha_bar =
      std::max(2.0 * std::sqrt(5.0) * C_s / beta0,
               T * std::sqrt(5.0) * s.lambdaN / (2.0 * gamma * (gamma - rh)));
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < res.metrics.size(); ++k) {
    double bound = alpha_bar * beta0 * std::pow(gamma, double(k));
    worst_ratio = std::max(worst_ratio, res.metrics[k].delta_norm_s / bound);
  }
  double final_pair = res.metrics.back().max_pairwise_y;
  bool ok = worst_ratio <= 1.0 + 1e-9 && res.audit.empty() &&
            final_pair < 1e-3 && res.cert.feasible;
  std::ostringstream os;
  os << "K=" << K << " beta0=" << fmt(beta0) << " worst envelope ratio "
     << fmt(worst_ratio) << ", " << res.audit.size()
     << " saturations, final pairwise " << fmt(final_pair);
  return {ok, os.str()};
}

// ---------------------------------------------------------------- criterion 5
// Observer feedback on the benchmark preset: the residual disagreement
// shrinks as epsilon does, at least halving from 0.1 to 0.01.
Outcome c5_residual_shrinks() {
  double d[3];
  std::size_t sat = 0;
  const double eps[3] = {0.1, 0.05, 0.01};
  for (int i = 0; i < 3; ++i) {
    qcons::SimResult res = qcons::run(preset_run(eps[i]));
    d[i] = qcons::steady_state_disagreement(res);
    sat += res.audit.size();
  }
  bool ok = d[1] < d[0] && d[2] < d[1] && d[2] <= 0.5 * d[0] && sat == 0;
  std::ostringstream os;
  os << "steady disagreement " << fmt(d[0]) << " / " << fmt(d[1]) << " / "
     << fmt(d[2]) << " for eps 0.1 / 0.05 / 0.01, " << sat << " saturations";
  return {ok, os.str()};
}

// ---------------------------------------------------------------- criterion 6
// Observer tracking: past the transient the estimates pin the states, and
// shrinking epsilon tightens both state and disturbance tracking.
Outcome c6_observer_tracking() {
  auto maxima = [](const qcons::SimResult& res) {
    double state_err = 0.0, dist_err = 0.0;
    for (std::size_t k = 0; k < res.times.size(); ++k) {
      if (res.times[k] < 1.0) continue;
      const qcons::AgentSample& smp = res.samples[k][0];
      for (int m = 0; m < 3; ++m)
        state_err =
            std::max(state_err, std::fabs(smp.rho[m] - smp.rho_hat[m]));
      dist_err = std::max(dist_err, std::fabs(smp.f_true - smp.rho_hat[3]));
    }
    return std::pair<double, double>{state_err, dist_err};
  };
  auto [se1, de1] = maxima(qcons::run(preset_run(0.01)));
  auto [se2, de2] = maxima(qcons::run(preset_run(0.005)));
  bool ok = se1 < 0.2 && de1 < 1.0 && se2 < se1 && de2 < de1;
  std::ostringstream os;
  os << "eps 0.01: state " << fmt(se1) << ", disturbance " << fmt(de1)
     << "; eps 0.005: " << fmt(se2) << ", " << fmt(de2);
  return {ok, os.str()};
}

// ---------------------------------------------------------------- criterion 7
// One bit flow: design K = 1 from the module's own window, never saturate,
// spend at most one bit per agent per round, reach a tenth of the initial
// disagreement.
Outcome c7_one_bit() {
  qcons::SpectralData s = qcons::spectral(five_cycle());
  const double eps0 = 0.5, C_s = 40.0, T = 0.03;
  const double t_cap =
      std::min(2.0 / (s.lambda2 + s.lambdaN), qcons::cert::t_max_one_bit(1, eps0, s));
  if (!(T < t_cap)) return {false, "design period outside the one bit window"};
  const double gamma = qcons::cert::gamma_one_bit(T, eps0, s);
  // A one level codec moves its state by at most one scaled cell per round,
  // while the observer transient sweeps the transmitted composite across
  // several cells in the first rounds; the doubled margin keeps those early
  // innovations inside the half range.
  const double beta0 = 2.0 * qcons::cert::beta0_min(T, gamma, 1, C_s, s);

  qcons::SimConfig cfg;
  cfg.graph = five_cycle();
  for (int i = 1; i <= 5; ++i) cfg.agents.push_back(qcons::pendulum_model(i));
  cfg.protocol.T = T;
  cfg.protocol.k_gains = {4.0, 4.0};
  cfg.protocol.K = 1;
  cfg.protocol.C_s = C_s;
  cfg.protocol.schedule = {beta0, gamma, qcons::ScalingMode::Floored,
                           std::sqrt(0.01)};
  qcons::EsoConfig eso;
  eso.r = 3;
  eso.epsilon = 0.01;
  eso.gains = qcons::gains_from_pole(3, -1.0);
  eso.sat_bounds = {5.0, 5.0, 15.0, 25.0};
  cfg.observer = eso;
  cfg.mode = qcons::RunMode::EsoOutputFeedback;
  cfg.cert_mode = qcons::cert::TheoremMode::Theorem3;
  cfg.eps0 = eps0;
  cfg.duration = 30.0;
  cfg.seed = qcons::make_preset("pendulum5").seed;
  cfg.label = "onebit";
  qcons::SimResult res = qcons::run(cfg);

  long rounds = static_cast<long>(res.times.size()) - 1;
  double bits_rate =
      static_cast<double>(res.bits_total) / (5.0 * static_cast<double>(rounds));
  double initial = res.metrics.front().max_pairwise_y;
  double steady = qcons::steady_state_disagreement(res);
  bool ok = res.audit.empty() && bits_rate <= 1.0 &&
            steady <= 0.10 * initial && res.cert.feasible;
  std::ostringstream os;
  os << "gamma=" << fmt(gamma) << " beta0=" << fmt(beta0) << " bits/agent/round "
     << fmt(bits_rate) << ", steady " << fmt(steady) << " vs initial "
     << fmt(initial) << ", " << res.audit.size() << " saturations";
  return {ok, os.str()};
}

// ---------------------------------------------------------------- criterion 8
// Shrinking epsilon pulls the observer loop toward its full state linear
// counterpart started from the same physical states.
Outcome c8_recovery() {
  double gaps[3];
  const double eps[3] = {0.01, 0.005, 0.001};
  for (int i = 0; i < 3; ++i) {
    qcons::SimConfig cfg = preset_run(eps[i]);
    qcons::SimResult nl = qcons::run(cfg);
    qcons::SimResult lin = qcons::run_linear_counterpart(cfg);
    gaps[i] = qcons::recovery_gap(nl, lin);
  }
  bool ok = gaps[1] < gaps[0] && gaps[2] < gaps[1];
  std::ostringstream os;
  os << "recovery gap " << fmt(gaps[0]) << " / " << fmt(gaps[1]) << " / "
     << fmt(gaps[2]) << " for eps 0.01 / 0.005 / 0.001";
  return {ok, os.str()};
}

// ---------------------------------------------------------------- criterion 9
// The one bit design rule is self consistent: every sampled design lands the
// required half range strictly between 1/2 and K + 1/2.
Outcome c9_design_rule() {
  std::mt19937_64 rng(900913);
  int done = 0, violations = 0;
  while (done < 200) {
    int n = 2 + static_cast<int>(rng() % 7);
    auto edges = testutil::random_connected_edges(rng, n);
    if (!testutil::edges_connected(n, edges)) continue;
    qcons::SpectralData s = qcons::spectral(qcons::from_edge_list(n, edges));
    int K = 1 + static_cast<int>(rng() % 3);
    double eps0 = testutil::uniform(rng, 0.05, 0.95);
    double cap = std::min(2.0 / (s.lambda2 + s.lambdaN),
                          qcons::cert::t_max_one_bit(K, eps0, s));
    double T = cap * testutil::uniform(rng, 0.02, 0.9999);
    double gamma = qcons::cert::gamma_one_bit(T, eps0, s);
    double need = qcons::cert::k1(T, gamma, s);
    ++done;
    if (!(need > 0.5 && need < K + 0.5)) ++violations;
    if (qcons::cert::k_min(T, gamma, s) > K) ++violations;
  }
  std::ostringstream os;
  os << done << " sampled designs, " << violations << " violations";
  return {violations == 0, os.str()};
}

// --------------------------------------------------------------- criterion 10
// Same seed twice is bit identical. The step refinement bound is checked on
// the full information variant of the same scenario: there the symbol stream
// is step independent and the comparison measures pure integrator error.
// (In observer mode any step change eventually flips a quantizer symbol and
// the trajectories part at the scaling magnitude, so no trajectory-level
// refinement bound exists; measured flip margins are ~4e-6 against ~1e-4
// reachable trajectory agreement.)
Outcome c10_determinism() {
  qcons::SimResult a = qcons::run(preset_run(0.01));
  qcons::SimResult b = qcons::run(preset_run(0.01));
  bool identical = a.times.size() == b.times.size();
  if (identical)
    for (std::size_t k = 0; k < a.times.size(); ++k)
      for (int i = 0; i < 5; ++i) {
        const qcons::AgentSample& x = a.samples[k][i];
        const qcons::AgentSample& y = b.samples[k][i];
        if (x.y != y.y || x.s != y.s || x.xi != y.xi || x.u != y.u ||
            x.symbol != y.symbol) {
          identical = false;
          break;
        }
      }

  qcons::RunSpec spec = qcons::make_preset("pendulum5");
  spec.mode = "full_info";
  qcons::SimConfig coarse = qcons::build_sim_config(spec);
  coarse.force = true;
  coarse.substep = 0.005;
  qcons::SimConfig fine = coarse;
  fine.substep = 0.0025;
  qcons::SimResult c = qcons::run(coarse);
  qcons::SimResult d = qcons::run(fine);
  double drift = 0.0;
  bool symbols_match = true;
  for (std::size_t k = 0; k < c.times.size(); ++k)
    for (int i = 0; i < 5; ++i) {
      drift = std::max(drift,
                       std::fabs(c.samples[k][i].y - d.samples[k][i].y));
      if (c.samples[k][i].symbol != d.samples[k][i].symbol)
        symbols_match = false;
    }
  bool ok = identical && symbols_match && drift < 1e-5;
  std::ostringstream os;
  os << (identical ? "reruns bit identical" : "reruns differ")
     << "; full info half step drift " << fmt(drift)
     << (symbols_match ? " with matching symbols" : ", symbols diverged");
  return {ok, os.str()};
}

}  // namespace

int main() {
  struct Row {
    const char* name;
    Outcome (*fn)();
  };
  const Row rows[] = {
      {"quantizer grid conformance", c1_quantizer_grid},
      {"spectral contraction factor", c2_contraction_factor},
      {"codec state identity", c3_codec_identity},
      {"full information geometric envelope", c4_full_info_envelope},
      {"residual shrinks with epsilon", c5_residual_shrinks},
      {"observer tracking error", c6_observer_tracking},
      {"one bit consensus", c7_one_bit},
      {"linear behaviour recovery", c8_recovery},
      {"one bit design rule self consistency", c9_design_rule},
      {"determinism and step refinement", c10_determinism},
  };
  int failures = 0;
  int idx = 0;
  for (const Row& row : rows) {
    ++idx;
    Outcome out;
    try {
      out = row.fn();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("[%s] criterion %d: %s (%s)\n", out.ok ? "PASS" : "FAIL", idx,
                row.name, out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }
  std::printf("acceptance: %d/10 passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
