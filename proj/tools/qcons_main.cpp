// Command line front end: run one experiment, audit a parameter set, sweep a
// parameter list, or compare against the linear reference loop.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "qcons/config.hpp"
#include "qcons/emit.hpp"
#include "qcons/engine.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  bool force = false;
  std::optional<double> duration;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_out = true) {
  auto* cfg = cmd->add_option("-c,--config", o.config_path,
                              "Config file (sectioned key = value)");
  auto* pre = cmd->add_option("-p,--preset", o.preset,
                              "Built-in preset (pendulum5, onebit)");
  cfg->excludes(pre);
  if (with_out)
    cmd->add_option("-o,--out", o.out_dir,
                    "Directory for timeseries.csv, metrics.csv, summary.txt");
  cmd->add_flag("-f,--force", o.force,
                "Run even when the certificate or the C_s premise fails");
  cmd->add_option("--duration", o.duration, "Override run length in seconds");
  cmd->add_option("--epsilon", o.epsilon, "Override observer epsilon");
  cmd->add_option("--seed", o.seed, "Override the initial condition seed");
}

qcons::RunSpec resolve_spec(const CommonOpts& o) {
  qcons::RunSpec spec;
  if (!o.config_path.empty())
    spec = qcons::parse_config_file(o.config_path);
  else if (!o.preset.empty())
    spec = qcons::make_preset(o.preset);
  else
    throw qcons::ConfigError("need --config or --preset");
  if (o.duration) {
    spec.duration = *o.duration;
    spec.provenance["sim.duration"] = qcons::ValueSource::Explicit;
  }
  if (o.epsilon) {
    spec.epsilon = *o.epsilon;
    spec.provenance["observer.epsilon"] = qcons::ValueSource::Explicit;
  }
  if (o.seed) {
    spec.seed = *o.seed;
    spec.provenance["sim.seed"] = qcons::ValueSource::Explicit;
  }
  return spec;
}

void print_run_summary(const qcons::SimResult& res) {
  std::printf("run '%s': %d agents, %zu rounds, T=%g\n", res.label.c_str(),
              res.n_agents, res.times.empty() ? 0 : res.times.size() - 1,
              res.T);
  if (!res.metrics.empty()) {
    std::printf("  initial spread      = %.6g\n",
                res.metrics.front().max_pairwise_y);
    std::printf("  steady state spread = %.6g\n",
                qcons::steady_state_disagreement(res));
  }
  std::printf("  total bits          = %lld\n", res.bits_total);
  std::printf("  saturation events   = %zu\n", res.audit.size());
  std::printf("  certificate         = %s\n",
              res.cert.feasible ? "feasible" : "infeasible (forced)");
}

int cmd_run(const CommonOpts& o) {
  qcons::RunSpec spec = resolve_spec(o);
  qcons::SimConfig cfg = qcons::build_sim_config(spec);
  cfg.force = o.force;
  qcons::SimResult res = qcons::run(cfg);
  print_run_summary(res);
  if (!o.out_dir.empty()) {
    auto paths = qcons::emit_outputs(res, o.out_dir);
    for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
  }
  return 0;
}

int cmd_certify(const CommonOpts& o, bool key_value,
                const std::optional<double>& T_override,
                const std::optional<double>& gamma_override,
                const std::optional<int>& K_override,
                const std::optional<double>& beta0_override) {
  qcons::RunSpec spec = resolve_spec(o);
  if (T_override) spec.T = *T_override;
  if (gamma_override) spec.gamma = *gamma_override;
  if (K_override) spec.K = *K_override;
  if (beta0_override) spec.beta0 = *beta0_override;
  qcons::SimConfig cfg = qcons::build_sim_config(spec);
  qcons::SpectralData s = qcons::spectral(cfg.graph);
  double eps = cfg.observer ? cfg.observer->epsilon : 0.0;
  qcons::cert::CertReport rep = qcons::cert::validate(
      cfg.protocol, s, cfg.cert_mode, eps, cfg.eps0, cfg.protocol.C_s);
  std::fputs(qcons::cert::format_report(rep, key_value).c_str(), stdout);
  return 0;
}

int cmd_sweep(const CommonOpts& o, const std::vector<double>& eps_list,
              const std::vector<int>& K_list) {
  qcons::RunSpec base = resolve_spec(o);
  std::vector<double> eps_values =
      eps_list.empty() ? std::vector<double>{base.epsilon} : eps_list;
  std::vector<int> K_values =
      K_list.empty() ? std::vector<int>{base.K} : K_list;

  struct Cell {
    double eps;
    int K;
    qcons::RunSpec spec;
    std::future<qcons::SimResult> fut;
  };
  std::vector<Cell> cells;
  for (double e : eps_values)
    for (int K : K_values) {
      qcons::RunSpec spec = base;
      spec.epsilon = e;
      spec.K = K;
      char tag[64];
      std::snprintf(tag, sizeof(tag), "_eps%g_K%d", e, K);
      spec.label += tag;
      cells.push_back({e, K, spec, {}});
    }
  for (auto& c : cells) {
    c.fut = std::async(std::launch::async, [&o](qcons::RunSpec spec) {
      qcons::SimConfig cfg = qcons::build_sim_config(spec);
      cfg.force = o.force;
      return qcons::run(cfg);
    }, c.spec);
  }

  std::printf("%-12s %-6s %-16s %-12s %-10s %s\n", "epsilon", "K",
              "steady_spread", "total_bits", "saturated", "certificate");
  std::string csv =
      "epsilon,K,steady_state_disagreement,total_bits,saturation_events,"
      "feasible\n";
  int failures = 0;
  for (auto& c : cells) {
    try {
      qcons::SimResult res = c.fut.get();
      double sd = qcons::steady_state_disagreement(res);
      std::printf("%-12g %-6d %-16.6g %-12lld %-10zu %s\n", c.eps, c.K, sd,
                  res.bits_total, res.audit.size(),
                  res.cert.feasible ? "feasible" : "infeasible");
      char row[160];
      std::snprintf(row, sizeof(row), "%.12g,%d,%.12g,%lld,%zu,%d\n", c.eps,
                    c.K, sd, res.bits_total, res.audit.size(),
                    res.cert.feasible ? 1 : 0);
      csv += row;
      if (!o.out_dir.empty()) {
        auto dir = std::filesystem::path(o.out_dir) / c.spec.label;
        qcons::emit_outputs(res, dir.string());
      }
    } catch (const std::exception& ex) {
      std::printf("%-12g %-6d failed: %s\n", c.eps, c.K, ex.what());
      ++failures;
    }
  }
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    auto path = std::filesystem::path(o.out_dir) / "sweep_summary.csv";
    std::ofstream f(path, std::ios::binary);
    f << csv;
    std::printf("wrote %s\n", path.string().c_str());
  }
  return failures == 0 ? 0 : 1;
}

int cmd_compare(const CommonOpts& o) {
  qcons::RunSpec spec = resolve_spec(o);
  qcons::SimConfig cfg = qcons::build_sim_config(spec);
  cfg.force = o.force;
  qcons::SimResult nl = qcons::run(cfg);
  qcons::SimResult lin = qcons::run_linear_counterpart(cfg);
  double gap = qcons::recovery_gap(nl, lin);
  std::printf("nonlinear loop:\n");
  print_run_summary(nl);
  std::printf("linear reference:\n");
  print_run_summary(lin);
  std::printf("recovery_gap = %.12g\n", gap);
  if (!o.out_dir.empty()) {
    auto base = std::filesystem::path(o.out_dir);
    qcons::emit_outputs(nl, (base / "nonlinear").string());
    qcons::emit_outputs(lin, (base / "linear").string());
    std::printf("wrote %s and %s\n", (base / "nonlinear").string().c_str(),
                (base / "linear").string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized sampled-data output consensus toolbox"};
  app.require_subcommand(1);

  CommonOpts run_o, cert_o, sweep_o, cmp_o;

  CLI::App* run = app.add_subcommand("run", "Simulate one closed loop run");
  add_common(run, run_o);

  CLI::App* certify = app.add_subcommand(
      "certify", "Audit parameters against the design conditions");
  add_common(certify, cert_o, false);
  bool kv = false;
  certify->add_flag("--kv", kv, "Machine readable key=value output");
  std::optional<double> cT, cgamma, cbeta0;
  std::optional<int> cK;
  certify->add_option("--T", cT, "Override sampling period");
  certify->add_option("--gamma", cgamma, "Override contraction rate");
  certify->add_option("--K", cK, "Override quantizer levels");
  certify->add_option("--beta0", cbeta0, "Override initial scaling");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a grid over epsilon and/or K and tabulate results");
  add_common(sweep, sweep_o);
  std::vector<double> eps_list;
  std::vector<int> K_list;
  sweep->add_option("--epsilon-list", eps_list, "Comma separated epsilons")
      ->delimiter(',');
  sweep->add_option("--K-list", K_list, "Comma separated quantizer sizes")
      ->delimiter(',');

  CLI::App* compare = app.add_subcommand(
      "compare", "Run the loop and its linear reference on the same draws");
  add_common(compare, cmp_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_o);
    if (certify->parsed())
      return cmd_certify(cert_o, kv, cT, cgamma, cK, cbeta0);
    if (sweep->parsed()) return cmd_sweep(sweep_o, eps_list, K_list);
    if (compare->parsed()) return cmd_compare(cmp_o);
  } catch (const qcons::CertificationError& ex) {
    std::fprintf(stderr, "certification: %s\n(use --force to run anyway)\n",
                 ex.what());
    return 2;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
