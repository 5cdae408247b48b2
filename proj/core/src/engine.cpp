#include "qcons/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qcons/codec.hpp"

namespace qcons {

namespace {

// Uniform draw on [lo, hi] from the top 53 bits, identical across platforms
// for a given seed.
double uniform_draw(std::mt19937_64& rng, double lo, double hi) {
  double u = (rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

struct AgentRt {
  const AgentModel* model = nullptr;
  Vec state;  // [rho | z | rho_hat], rho_hat present in observer mode only
  EncoderState enc;
  std::vector<DecoderState> dec;  // aligned with graph.neighbors[i]
  double neighbor_sum = 0.0;      // held over the sampling interval
  Vec k1, k2, k3, k4, tmp;
};

struct Loop {
  const SimConfig& cfg;
  const bool linear;  // reference chain instead of the nonlinear plant
  const bool observer_mode;
  const int r;
  const int zero_dim;
  const int state_dim;
  LinearCounterpart lc;

  Loop(const SimConfig& c, bool lin)
      : cfg(c),
        linear(lin),
        observer_mode(!lin && c.mode == RunMode::EsoOutputFeedback),
        r(c.agents.at(0).r),
        zero_dim(lin ? 0 : c.agents.at(0).zero_dim),
        state_dim(r + zero_dim + (observer_mode ? r + 1 : 0)) {
    lc.r = r;
    lc.k_gains = c.protocol.k_gains;
  }

  std::span<const double> rho(const AgentRt& a) const {
    return {a.state.data(), static_cast<std::size_t>(r)};
  }
  std::span<const double> zpart(const AgentRt& a) const {
    return {a.state.data() + r, static_cast<std::size_t>(zero_dim)};
  }
  std::span<const double> rho_hat(const AgentRt& a) const {
    return {a.state.data() + r + zero_dim, static_cast<std::size_t>(r + 1)};
  }

  // Control is re-evaluated at every stage state, which keeps the held
  // neighbor sum exact: in full information mode d s / d t == neighbor_sum.
  void derivative(const AgentRt& a, std::span<const double> y, double t,
                  std::span<double> dy) const {
    std::span<const double> rho_v{y.data(), static_cast<std::size_t>(r)};
    if (linear) {
      linear_counterpart_rhs(lc, rho_v, a.neighbor_sum, dy);
      return;
    }
    std::span<const double> z_v{y.data() + r,
                                static_cast<std::size_t>(zero_dim)};
    std::span<double> drho{dy.data(), static_cast<std::size_t>(r)};
    std::span<double> dz{dy.data() + r, static_cast<std::size_t>(zero_dim)};
    double u;
    if (observer_mode) {
      std::span<const double> hat{y.data() + r + zero_dim,
                                  static_cast<std::size_t>(r + 1)};
      Vec bar = saturate(*cfg.observer, hat);
      u = control(theta_eso(bar, cfg.protocol.k_gains), a.neighbor_sum);
      std::span<double> dhat{dy.data() + r + zero_dim,
                             static_cast<std::size_t>(r + 1)};
      eso_rhs(*cfg.observer, hat, rho_v[0], u, dhat);
    } else {
      u = control(theta_full(*a.model, rho_v, z_v, t, cfg.protocol.k_gains),
                  a.neighbor_sum);
    }
    canonical_rhs(*a.model, rho_v, z_v, t, u, drho, dz);
  }

  void rk4_step(AgentRt& a, double t, double h) const {
    const int n = state_dim;
    derivative(a, a.state, t, a.k1);
    for (int i = 0; i < n; ++i) a.tmp[i] = a.state[i] + 0.5 * h * a.k1[i];
    derivative(a, a.tmp, t + 0.5 * h, a.k2);
    for (int i = 0; i < n; ++i) a.tmp[i] = a.state[i] + 0.5 * h * a.k2[i];
    derivative(a, a.tmp, t + 0.5 * h, a.k3);
    for (int i = 0; i < n; ++i) a.tmp[i] = a.state[i] + h * a.k3[i];
    derivative(a, a.tmp, t + h, a.k4);
    for (int i = 0; i < n; ++i)
      a.state[i] +=
          h / 6.0 * (a.k1[i] + 2.0 * a.k2[i] + 2.0 * a.k3[i] + a.k4[i]);
  }

  // What the encoder quantizes for this agent.
  double transmitted_s(const AgentRt& a) const {
    if (observer_mode) {
      Vec bar = saturate(*cfg.observer, rho_hat(a));
      return composite_s(
          std::span<const double>{bar.data(), static_cast<std::size_t>(r)},
          cfg.protocol.k_gains);
    }
    return composite_s(rho(a), cfg.protocol.k_gains);
  }

  double current_u(const AgentRt& a, double t) const {
    if (linear) return a.neighbor_sum;
    if (observer_mode) {
      Vec bar = saturate(*cfg.observer, rho_hat(a));
      return control(theta_eso(bar, cfg.protocol.k_gains), a.neighbor_sum);
    }
    return control(
        theta_full(*a.model, rho(a), zpart(a), t, cfg.protocol.k_gains),
        a.neighbor_sum);
  }
};

void validate_shapes(const SimConfig& cfg, bool linear) {
  const int n = cfg.graph.n;
  if (n < 1) throw std::invalid_argument("engine: empty graph");
  if (static_cast<int>(cfg.agents.size()) != n)
    throw std::invalid_argument("engine: need one agent model per node");
  int r = cfg.agents[0].r;
  int zd = cfg.agents[0].zero_dim;
  if (r < 1)
    throw std::invalid_argument("engine: relative degree must be >= 1");
  for (const auto& m : cfg.agents) {
    if (m.r != r || m.zero_dim != zd)
      throw std::invalid_argument(
          "engine: all agents need equal r and zero_dim");
    if (!linear && !m.F)
      throw std::invalid_argument("engine: agent model lacks F");
    if (!linear && zd > 0 && !m.Z)
      throw std::invalid_argument("engine: zero dynamics need Z");
  }
  if (static_cast<int>(cfg.protocol.k_gains.size()) != r - 1)
    throw std::invalid_argument("engine: need r-1 protocol gains");
  validate(cfg.protocol);
  if (!linear && cfg.mode == RunMode::EsoOutputFeedback) {
    if (!cfg.observer)
      throw std::invalid_argument("engine: observer mode needs an EsoConfig");
    if (cfg.observer->r != r)
      throw std::invalid_argument("engine: observer r mismatch");
    validate(*cfg.observer);
  }
  if (!(cfg.duration >= 0.0))
    throw std::invalid_argument("engine: duration must be >= 0");
  double rounds = cfg.duration / cfg.protocol.T;
  if (std::abs(rounds - std::round(rounds)) > 1e-9 * std::max(1.0, rounds))
    throw std::invalid_argument(
        "engine: duration must be an integer multiple of T");
  if (!(cfg.init_high >= cfg.init_low))
    throw std::invalid_argument("engine: empty initial box");
}

// Initial draws in original coordinates, agent major order. Shared by both
// run flavours so equal seeds start from the same physical states.
std::vector<Vec> draw_initials(const SimConfig& cfg, int per_agent) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<Vec> out(cfg.graph.n);
  for (int i = 0; i < cfg.graph.n; ++i) {
    out[i].resize(per_agent);
    for (int c = 0; c < per_agent; ++c)
      out[i][c] = uniform_draw(rng, cfg.init_low, cfg.init_high);
  }
  return out;
}

SimResult simulate(const SimConfig& cfg, bool linear) {
  validate_shapes(cfg, linear);
  const int n = cfg.graph.n;
  const int r = cfg.agents[0].r;
  const int zero_dim = linear ? 0 : cfg.agents[0].zero_dim;

  SimConfig effective = cfg;
  if (linear) effective.protocol.schedule.mode = ScalingMode::Geometric;
  const ProtocolParams& proto = effective.protocol;

  SimResult res;
  res.n_agents = n;
  res.T = proto.T;
  res.seed = cfg.seed;
  res.label = cfg.label;

  // Certification gate. A single node has nothing to certify.
  if (n >= 2) {
    SpectralData spec = spectral(cfg.graph);
    double eps_obs = cfg.observer ? cfg.observer->epsilon : 0.0;
    cert::TheoremMode mode =
        linear ? cert::TheoremMode::Theorem1 : cfg.cert_mode;
    res.cert = cert::validate(proto, spec, mode, eps_obs, cfg.eps0, proto.C_s);
    if (!res.cert.feasible && !cfg.force) {
      std::string names;
      for (const auto& v : res.cert.violated())
        names += (names.empty() ? "" : ", ") + v;
      throw CertificationError("certificate failed: " + names);
    }
  } else {
    res.cert.feasible = true;
  }

  Loop loop(effective, linear);

  std::vector<Vec> draws = draw_initials(cfg, r + cfg.agents[0].zero_dim);
  std::vector<AgentRt> agents(n);
  for (int i = 0; i < n; ++i) {
    AgentRt& a = agents[i];
    a.model = &cfg.agents[i];
    a.state.assign(loop.state_dim, 0.0);
    Vec x(draws[i].begin(), draws[i].begin() + r);
    Vec rho0 = a.model->to_canonical ? a.model->to_canonical(x) : x;
    if (static_cast<int>(rho0.size()) != r)
      throw std::invalid_argument("engine: to_canonical changed dimension");
    std::copy(rho0.begin(), rho0.end(), a.state.begin());
    for (int c = 0; c < zero_dim; ++c) a.state[r + c] = draws[i][r + c];
    a.dec.resize(cfg.graph.neighbors[i].size());
    a.k1.assign(loop.state_dim, 0.0);
    a.k2 = a.k1;
    a.k3 = a.k1;
    a.k4 = a.k1;
    a.tmp = a.k1;
  }

  // The transmission bound is a premise, not a conclusion; refuse to start
  // outside it unless forced.
  double worst_s0 = 0.0;
  for (const auto& a : agents)
    worst_s0 = std::max(worst_s0,
                        std::abs(composite_s(loop.rho(a), proto.k_gains)));
  if (worst_s0 > proto.C_s && !cfg.force)
    throw CertificationError(
        "initial |s| exceeds C_s: max |s(0)| = " + std::to_string(worst_s0) +
        ", C_s = " + std::to_string(proto.C_s));

  const double T = proto.T;
  const long n_rounds = std::lround(cfg.duration / T);
  const double eps_obs = cfg.observer ? cfg.observer->epsilon : 0.0;
  double h_req = cfg.substep;
  if (!(h_req > 0.0)) {
    h_req = T / 10.0;
    if (loop.observer_mode && eps_obs > 0.0)
      h_req = std::min(h_req, eps_obs / 20.0);
  }
  const long n_sub =
      std::max(1L, static_cast<long>(std::ceil(T / h_req - 1e-12)));
  const double h = T / static_cast<double>(n_sub);

  Quantizer qz(proto.K);
  const int symbol_bits = bits_per_symbol(qz);
  std::vector<int> symbols(n, 0);

  res.times.reserve(n_rounds + 1);
  res.samples.reserve(n_rounds + 1);
  res.metrics.reserve(n_rounds + 1);

  std::vector<double> y_now(n), s_now(n);

  auto record = [&](double t, int saturated_this_round) {
    std::vector<AgentSample> row(n);
    for (int i = 0; i < n; ++i) {
      AgentRt& a = agents[i];
      AgentSample& smp = row[i];
      smp.y = a.state[0];
      smp.s = composite_s(loop.rho(a), proto.k_gains);
      smp.sbar = loop.transmitted_s(a);
      smp.xi = a.enc.xi;
      smp.u = loop.current_u(a, t);
      smp.rho.assign(loop.rho(a).begin(), loop.rho(a).end());
      if (!linear) {
        double omega = a.model->disturbance ? a.model->disturbance(t) : 0.0;
        smp.f_true =
            a.model->F ? a.model->F(loop.rho(a), loop.zpart(a), omega, t)
                       : 0.0;
        if (loop.observer_mode) {
          smp.rho_hat.assign(loop.rho_hat(a).begin(), loop.rho_hat(a).end());
          smp.rho_hat_last = smp.rho_hat[r];
        }
      }
      smp.symbol = symbols[i];
      smp.bits = symbols[i] != 0 ? symbol_bits : 0;
      res.bits_total += smp.bits;
      y_now[i] = smp.y;
      s_now[i] = smp.s;
    }
    RoundMetrics m;
    m.max_pairwise_y = disagreement(y_now).first;
    m.delta_norm_s = disagreement(s_now).second;
    m.saturated_count = saturated_this_round;
    res.times.push_back(t);
    res.samples.push_back(std::move(row));
    res.metrics.push_back(m);
  };

  record(0.0, 0);

  for (long k = 1; k <= n_rounds; ++k) {
    const double t0 = (k - 1) * T;
    for (auto& a : agents) {
      for (long s = 0; s < n_sub; ++s) loop.rk4_step(a, t0 + s * h, h);
      res.total_substeps += n_sub;
    }
    const double t = k * T;
    for (const auto& a : agents)
      for (double v : a.state)
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os << "simulation diverged at round " << k << " (t=" << t << ")";
          throw std::runtime_error(os.str());
        }

    // Lockstep codec update: every channel uses the same beta this round.
    const double beta_k = scaling_at(proto.schedule, k - 1);
    int saturated_this_round = 0;
    for (int i = 0; i < n; ++i) {
      AgentRt& a = agents[i];
      EncodeResult er = encode_step(a.enc, loop.transmitted_s(a), beta_k, qz);
      symbols[i] = er.symbol;
      if (er.saturated) {
        ++saturated_this_round;
        res.audit.push_back({k, i + 1, std::abs(er.scaled_innovation)});
      }
    }
    for (int i = 0; i < n; ++i) {
      AgentRt& a = agents[i];
      double sum = 0.0;
      for (std::size_t idx = 0; idx < a.dec.size(); ++idx) {
        int j = cfg.graph.neighbors[i][idx];
        decode_step(a.dec[idx], symbols[j], beta_k, qz);
        if (a.dec[idx].s_hat != agents[j].enc.xi)
          throw std::logic_error(
              "engine: decoder state diverged from encoder state");
        sum += a.dec[idx].s_hat - a.enc.xi;
      }
      a.neighbor_sum = sum;
    }
    record(t, saturated_this_round);
  }
  return res;
}

}  // namespace

SimResult run(const SimConfig& cfg) { return simulate(cfg, false); }

SimResult run_linear_counterpart(const SimConfig& cfg) {
  return simulate(cfg, true);
}

double default_C_s(const SimConfig& cfg) {
  validate_shapes(cfg, true);
  const int r = cfg.agents[0].r;
  SimConfig probe = cfg;
  double worst = 0.0;
  for (int d = 0; d < 100; ++d) {
    probe.seed = cfg.seed + static_cast<std::uint64_t>(d);
    std::vector<Vec> draws =
        draw_initials(probe, r + cfg.agents[0].zero_dim);
    for (int i = 0; i < cfg.graph.n; ++i) {
      Vec x(draws[i].begin(), draws[i].begin() + r);
      Vec rho0 =
          cfg.agents[i].to_canonical ? cfg.agents[i].to_canonical(x) : x;
      worst =
          std::max(worst, std::abs(composite_s(rho0, cfg.protocol.k_gains)));
    }
  }
  return 1.25 * worst;
}

std::vector<double> default_sat_bounds(const SimConfig& cfg,
                                       double extended_bound) {
  if (!(extended_bound > 0.0))
    throw std::invalid_argument("engine: extended bound must be > 0");
  const int r = cfg.agents[0].r;
  SimConfig probe = cfg;
  probe.force = true;  // trajectory envelope only, certificates do not apply
  std::vector<double> peak(r, 0.0);
  for (int d = 0; d < 100; ++d) {
    probe.seed = cfg.seed + static_cast<std::uint64_t>(d);
    SimResult res = simulate(probe, true);
    for (const auto& row : res.samples)
      for (const auto& smp : row)
        for (int m = 0; m < r; ++m)
          peak[m] = std::max(peak[m], std::abs(smp.rho[m]));
  }
  std::vector<double> out(r + 1, extended_bound);
  for (int m = 0; m < r; ++m) out[m] = 1.25 * peak[m];
  return out;
}

std::pair<double, double> disagreement(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {*hi - *lo, std::sqrt(ss)};
}

double recovery_gap(const SimResult& nonlinear, const SimResult& linear) {
  if (nonlinear.n_agents != linear.n_agents)
    throw std::invalid_argument("recovery_gap: agent counts differ");
  if (std::abs(nonlinear.T - linear.T) > 1e-12)
    throw std::invalid_argument("recovery_gap: sampling periods differ");
  std::size_t rounds =
      std::min(nonlinear.samples.size(), linear.samples.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < rounds; ++k)
    for (int i = 0; i < nonlinear.n_agents; ++i)
      worst = std::max(worst, std::abs(nonlinear.samples[k][i].y -
                                       linear.samples[k][i].y));
  return worst;
}

double steady_state_disagreement(const SimResult& r) {
  if (r.metrics.empty())
    throw std::invalid_argument("steady_state_disagreement: empty run");
  std::size_t total = r.metrics.size();
  std::size_t start = total - std::max<std::size_t>(1, total / 5);
  double worst = 0.0;
  for (std::size_t k = start; k < total; ++k)
    worst = std::max(worst, r.metrics[k].max_pairwise_y);
  return worst;
}

}  // namespace qcons
