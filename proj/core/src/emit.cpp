#include "qcons/emit.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcons {

namespace {

// 12 significant digits everywhere keeps reruns byte identical while staying
// well inside double round trip territory for plotting and diffing.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot write '" + path + "'");
  out << content;
}

}  // namespace

std::string render_timeseries_csv(const SimResult& res) {
  std::ostringstream os;
  os << "t,agent,y,s,sbar,xi,u,symbol,bits\n";
  for (std::size_t k = 0; k < res.samples.size(); ++k) {
    for (int i = 0; i < res.n_agents; ++i) {
      const AgentSample& s = res.samples[k][i];
      os << num(res.times[k]) << ',' << (i + 1) << ',' << num(s.y) << ','
         << num(s.s) << ',' << num(s.sbar) << ',' << num(s.xi) << ','
         << num(s.u) << ',' << s.symbol << ',' << s.bits << "\n";
    }
  }
  return os.str();
}

std::string render_metrics_csv(const SimResult& res) {
  std::ostringstream os;
  os << "round,max_pairwise,delta_norm,saturated_count\n";
  for (std::size_t k = 0; k < res.metrics.size(); ++k) {
    const RoundMetrics& m = res.metrics[k];
    os << k << ',' << num(m.max_pairwise_y) << ',' << num(m.delta_norm_s)
       << ',' << m.saturated_count << "\n";
  }
  return os.str();
}

std::string render_summary(const SimResult& res) {
  std::ostringstream os;
  long rounds = static_cast<long>(res.times.size()) - 1;
  os << "label = " << res.label << "\n";
  os << "agents = " << res.n_agents << "\n";
  os << "T = " << num(res.T) << "\n";
  os << "seed = " << res.seed << "\n";
  os << "rounds = " << (rounds < 0 ? 0 : rounds) << "\n";
  if (!res.metrics.empty())
    os << "steady_state_disagreement = "
       << num(steady_state_disagreement(res)) << "\n";
  os << "total_bits = " << res.bits_total << "\n";
  if (rounds > 0 && res.n_agents > 0)
    os << "bits_per_agent_per_round = "
       << num(static_cast<double>(res.bits_total) /
              (static_cast<double>(rounds) * res.n_agents))
       << "\n";
  os << "saturation_events = " << res.audit.size() << "\n";
  os << "audit = " << (res.audit.empty() ? "clean" : "saturated") << "\n";
  for (std::size_t e = 0; e < res.audit.size() && e < 20; ++e) {
    const SaturationEvent& ev = res.audit[e];
    os << "  saturated round=" << ev.round << " agent=" << ev.agent
       << " |innovation|=" << num(ev.magnitude) << "\n";
  }
  os << "certificate = " << (res.cert.feasible ? "feasible" : "infeasible")
     << "\n";
  for (const auto& c : res.cert.checks) {
    std::string slug = c.name;
    for (char& ch : slug)
      if (ch == ' ') ch = '_';
    os << "cert." << slug << " = " << (c.ok ? "ok" : "FAIL")
       << " margin=" << num(c.margin) << "\n";
  }
  return os.str();
}

std::vector<std::string> emit_outputs(const SimResult& res,
                                      const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  auto emit = [&](const char* name, const std::string& content) {
    std::string p = (std::filesystem::path(dir) / name).string();
    write_file(p, content);
    paths.push_back(p);
  };
  emit("timeseries.csv", render_timeseries_csv(res));
  emit("metrics.csv", render_metrics_csv(res));
  emit("summary.txt", render_summary(res));
  return paths;
}

}  // namespace qcons
