#include "qcons/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace qcons {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

double parse_double(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'", line);
  }
  if (pos != v.size())
    throw ConfigError(key + ": trailing characters in '" + v + "'", line);
  return out;
}

long long parse_int(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'", line);
  }
  if (pos != v.size())
    throw ConfigError(key + ": trailing characters in '" + v + "'", line);
  return out;
}

std::vector<double> parse_doubles(const std::string& v, const std::string& key,
                                  int line) {
  std::vector<double> out;
  for (const auto& tok : split_list(v)) {
    if (tok.empty())
      throw ConfigError(key + ": empty list entry", line);
    out.push_back(parse_double(tok, key, line));
  }
  return out;
}

std::vector<std::pair<int, int>> parse_edges(const std::string& v,
                                             const std::string& key,
                                             int line) {
  static const std::regex edge_re(R"(^\s*(\d+)\s*-\s*(\d+)\s*$)");
  std::vector<std::pair<int, int>> out;
  for (const auto& tok : split_list(v)) {
    std::smatch m;
    if (!std::regex_match(tok, m, edge_re))
      throw ConfigError(key + ": bad edge '" + tok + "', want a-b", line);
    out.emplace_back(std::stoi(m[1]), std::stoi(m[2]));
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "graph.n",          "graph.edges",      "agents.model",
      "protocol.T",       "protocol.gamma",   "protocol.K",
      "protocol.beta0",   "protocol.k_gains", "protocol.C_s",
      "protocol.schedule", "observer.epsilon", "observer.pole",
      "observer.gains",   "observer.M",       "observer.M_ext",
      "sim.mode",         "sim.certify",      "sim.eps0",
      "sim.duration",     "sim.substep",      "sim.init_low",
      "sim.init_high",    "sim.seed",         "sim.label"};
  return keys;
}

struct Entry {
  std::string key;  // "section.key"
  std::string value;
  int line = 0;
};

void apply_entry(RunSpec& spec, const Entry& e) {
  const std::string& k = e.key;
  const std::string& v = e.value;
  const int ln = e.line;
  if (k == "graph.n") {
    long long n = parse_int(v, k, ln);
    if (n < 1) throw ConfigError("graph.n: must be >= 1", ln);
    spec.n = static_cast<int>(n);
  } else if (k == "graph.edges") {
    spec.edges = parse_edges(v, k, ln);
  } else if (k == "agents.model") {
    if (v != "pendulum")
      throw ConfigError("agents.model: unknown model '" + v + "'", ln);
    spec.model = v;
  } else if (k == "protocol.T") {
    spec.T = parse_double(v, k, ln);
    if (!(spec.T > 0.0)) throw ConfigError("protocol.T: must be > 0", ln);
  } else if (k == "protocol.gamma") {
    spec.gamma = parse_double(v, k, ln);
    if (!(spec.gamma > 0.0 && spec.gamma < 1.0))
      throw ConfigError("protocol.gamma: must lie in (0, 1)", ln);
  } else if (k == "protocol.K") {
    long long kk = parse_int(v, k, ln);
    if (kk < 1) throw ConfigError("protocol.K: must be >= 1", ln);
    spec.K = static_cast<int>(kk);
  } else if (k == "protocol.beta0") {
    spec.beta0 = parse_double(v, k, ln);
    if (!(spec.beta0 > 0.0))
      throw ConfigError("protocol.beta0: must be > 0", ln);
  } else if (k == "protocol.k_gains") {
    spec.k_gains = parse_doubles(v, k, ln);
  } else if (k == "protocol.C_s") {
    spec.C_s = parse_double(v, k, ln);
    if (!(spec.C_s > 0.0)) throw ConfigError("protocol.C_s: must be > 0", ln);
  } else if (k == "protocol.schedule") {
    if (v != "geometric" && v != "floored")
      throw ConfigError(
          "protocol.schedule: want 'geometric' or 'floored', got '" + v + "'",
          ln);
    spec.schedule = v;
  } else if (k == "observer.epsilon") {
    spec.epsilon = parse_double(v, k, ln);
    if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
      throw ConfigError("observer.epsilon: must lie in (0, 1)", ln);
  } else if (k == "observer.pole") {
    spec.pole = parse_double(v, k, ln);
    if (!(spec.pole < 0.0))
      throw ConfigError("observer.pole: must be negative", ln);
  } else if (k == "observer.gains") {
    spec.eso_gains = parse_doubles(v, k, ln);
  } else if (k == "observer.M") {
    spec.sat_bounds = parse_doubles(v, k, ln);
    for (double m : spec.sat_bounds)
      if (!(m > 0.0))
        throw ConfigError("observer.M: bounds must be positive", ln);
  } else if (k == "sim.mode") {
    if (v != "eso" && v != "full_info")
      throw ConfigError("sim.mode: want 'eso' or 'full_info', got '" + v + "'",
                        ln);
    spec.mode = v;
  } else if (k == "sim.certify") {
    if (v != "theorem1" && v != "theorem2" && v != "theorem3")
      throw ConfigError("sim.certify: want theorem1, theorem2 or theorem3",
                        ln);
    spec.cert_mode = v;
  } else if (k == "sim.eps0") {
    spec.eps0 = parse_double(v, k, ln);
    if (!(spec.eps0 > 0.0 && spec.eps0 < 1.0))
      throw ConfigError("sim.eps0: must lie in (0, 1)", ln);
  } else if (k == "sim.duration") {
    spec.duration = parse_double(v, k, ln);
    if (!(spec.duration >= 0.0))
      throw ConfigError("sim.duration: must be >= 0", ln);
  } else if (k == "sim.substep") {
    spec.substep = parse_double(v, k, ln);
    if (!(spec.substep >= 0.0))
      throw ConfigError("sim.substep: must be >= 0 (0 selects automatically)",
                        ln);
  } else if (k == "sim.init_low") {
    spec.init_low = parse_double(v, k, ln);
  } else if (k == "sim.init_high") {
    spec.init_high = parse_double(v, k, ln);
  } else if (k == "sim.seed") {
    long long s = parse_int(v, k, ln);
    if (s < 0) throw ConfigError("sim.seed: must be >= 0", ln);
    spec.seed = static_cast<std::uint64_t>(s);
  } else if (k == "sim.label") {
    spec.label = v;
  } else {
    throw ConfigError("unknown key '" + k + "'", ln);
  }
  spec.provenance[k] = ValueSource::Explicit;
}

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt_num(xs[i]);
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& msg, int line_no)
    : std::runtime_error(line_no > 0
                             ? "config line " + std::to_string(line_no) +
                                   ": " + msg
                             : "config: " + msg),
      line(line_no) {}

bool operator==(const RunSpec& a, const RunSpec& b) {
  return a.n == b.n && a.edges == b.edges && a.model == b.model &&
         a.T == b.T && a.gamma == b.gamma && a.K == b.K &&
         a.beta0 == b.beta0 && a.k_gains == b.k_gains && a.C_s == b.C_s &&
         a.schedule == b.schedule && a.epsilon == b.epsilon &&
         a.pole == b.pole && a.eso_gains == b.eso_gains &&
         a.sat_bounds == b.sat_bounds && a.mode == b.mode &&
         a.cert_mode == b.cert_mode && a.eps0 == b.eps0 &&
         a.duration == b.duration && a.substep == b.substep &&
         a.init_low == b.init_low && a.init_high == b.init_high &&
         a.seed == b.seed && a.label == b.label;
  // provenance intentionally ignored
}

std::vector<std::string> preset_names() { return {"pendulum5", "onebit"}; }

RunSpec make_preset(const std::string& name) {
  RunSpec spec;
  spec.n = 5;
  spec.edges = {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}};
  spec.model = "pendulum";
  spec.k_gains = {4.0, 4.0};
  spec.C_s = 40.0;
  spec.epsilon = 0.01;
  spec.pole = -1.0;
  spec.sat_bounds = {5.0, 5.0, 15.0, 25.0};
  spec.mode = "eso";
  spec.eps0 = 0.5;
  spec.duration = 30.0;
  spec.substep = 0.0;
  spec.init_low = -4.5;
  spec.init_high = 4.5;
  // This draw keeps every |s_i(0)| well under C_s and the consensus point
  // inside the estimate clamp box, so the saturation stays a transient guard.
  spec.seed = 11906;
  if (name == "pendulum5") {
    spec.T = 0.05;
    spec.gamma = 0.93;
    spec.K = 10;
    spec.beta0 = 10.0;
    spec.schedule = "floored";
    spec.cert_mode = "theorem2";
    spec.label = "pendulum5";
  } else if (name == "onebit") {
    spec.T = 0.015;
    spec.gamma = 0.9881;
    spec.K = 1;
    spec.beta0 = 30.0;
    spec.schedule = "floored";
    spec.cert_mode = "theorem3";
    spec.eps0 = 0.5;
    spec.label = "onebit";
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  for (const auto& k : known_keys()) spec.provenance[k] = ValueSource::Preset;
  return spec;
}

RunSpec parse_config(const std::string& text) {
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  std::string section;
  std::vector<Entry> entries;
  std::string preset;
  int preset_line = 0;
  bool any_entry = false;

  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = raw;
    std::size_t cpos = line.find_first_of("#;");
    if (cpos != std::string::npos) line = line.substr(0, cpos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "graph" && section != "agents" && section != "protocol" &&
          section != "observer" && section != "sim")
        throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value", line_no);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (section.empty() && key == "preset") {
      if (any_entry || !preset.empty())
        throw ConfigError("preset must be the first setting", line_no);
      preset = value;
      preset_line = line_no;
      continue;
    }
    if (section.empty())
      throw ConfigError("key '" + key + "' outside any section", line_no);
    entries.push_back({section + "." + key, value, line_no});
    any_entry = true;
  }

  RunSpec spec;
  std::set<std::string> provided;
  if (!preset.empty()) {
    try {
      spec = make_preset(preset);
    } catch (const ConfigError&) {
      throw ConfigError("unknown preset '" + preset + "'", preset_line);
    }
    for (const auto& k : known_keys()) provided.insert(k);
  }
  int duration_line = 0;
  double m_ext = 25.0;  // extended-state clamp used when observer.M is derived
  int m_ext_line = 0;
  for (const auto& e : entries) {
    if (!known_keys().count(e.key))
      throw ConfigError("unknown key '" + e.key + "'", e.line);
    if (e.key == "observer.M_ext") {
      m_ext = parse_double(e.value, e.key, e.line);
      if (!(m_ext > 0.0))
        throw ConfigError("observer.M_ext: must be > 0", e.line);
      m_ext_line = e.line;
      provided.insert(e.key);
      spec.provenance[e.key] = ValueSource::Explicit;
      continue;
    }
    apply_entry(spec, e);
    provided.insert(e.key);
    if (e.key == "sim.duration") duration_line = e.line;
  }

  if (preset.empty()) {
    const char* required[] = {"graph.n",      "graph.edges",
                              "protocol.T",   "protocol.gamma",
                              "protocol.K",   "protocol.beta0",
                              "sim.duration"};
    for (const char* k : required)
      if (!provided.count(k))
        throw ConfigError(std::string("missing required key '") + k + "'");
    if (spec.mode == "eso" && !provided.count("observer.epsilon"))
      throw ConfigError(
          "missing required key 'observer.epsilon' (observer feedback mode)");
  }
  if (m_ext_line > 0 && provided.count("observer.M"))
    throw ConfigError("observer.M_ext: unused when observer.M is given",
                      m_ext_line);

  if (spec.init_high < spec.init_low)
    throw ConfigError("sim.init_high must be >= sim.init_low");
  double rounds = spec.duration / spec.T;
  if (std::abs(rounds - std::round(rounds)) > 1e-9 * std::max(1.0, rounds))
    throw ConfigError("sim.duration must be an integer multiple of protocol.T",
                      duration_line);

  // Bounds the text may omit are measured, not guessed: C_s from the worst
  // initial composite over 100 seeded draws, the clamp box from linear
  // counterpart trajectory maxima over the same draws. Presets pin both.
  const bool need_cs = !provided.count("protocol.C_s");
  const bool need_m = spec.mode == "eso" && !provided.count("observer.M");
  if (need_cs || need_m) {
    SimConfig probe = build_sim_config(spec);
    if (need_cs) {
      spec.C_s = default_C_s(probe);
      spec.provenance["protocol.C_s"] = ValueSource::Default;
      probe.protocol.C_s = spec.C_s;
    }
    if (need_m) {
      spec.sat_bounds = default_sat_bounds(probe, m_ext);
      spec.provenance["observer.M"] = ValueSource::Default;
    }
  }
  return spec;
}

RunSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunSpec& spec) {
  std::ostringstream os;
  os << "[graph]\n";
  os << "n = " << spec.n << "\n";
  os << "edges = ";
  for (std::size_t i = 0; i < spec.edges.size(); ++i) {
    if (i) os << ", ";
    os << spec.edges[i].first << "-" << spec.edges[i].second;
  }
  os << "\n\n[agents]\n";
  os << "model = " << spec.model << "\n";
  os << "\n[protocol]\n";
  os << "T = " << fmt_num(spec.T) << "\n";
  os << "gamma = " << fmt_num(spec.gamma) << "\n";
  os << "K = " << spec.K << "\n";
  os << "beta0 = " << fmt_num(spec.beta0) << "\n";
  os << "k_gains = " << fmt_list(spec.k_gains) << "\n";
  os << "C_s = " << fmt_num(spec.C_s) << "\n";
  os << "schedule = " << spec.schedule << "\n";
  os << "\n[observer]\n";
  os << "epsilon = " << fmt_num(spec.epsilon) << "\n";
  os << "pole = " << fmt_num(spec.pole) << "\n";
  if (!spec.eso_gains.empty())
    os << "gains = " << fmt_list(spec.eso_gains) << "\n";
  os << "M = " << fmt_list(spec.sat_bounds) << "\n";
  os << "\n[sim]\n";
  os << "mode = " << spec.mode << "\n";
  if (!spec.cert_mode.empty()) os << "certify = " << spec.cert_mode << "\n";
  os << "eps0 = " << fmt_num(spec.eps0) << "\n";
  os << "duration = " << fmt_num(spec.duration) << "\n";
  os << "substep = " << fmt_num(spec.substep) << "\n";
  os << "init_low = " << fmt_num(spec.init_low) << "\n";
  os << "init_high = " << fmt_num(spec.init_high) << "\n";
  os << "seed = " << spec.seed << "\n";
  os << "label = " << spec.label << "\n";
  return os.str();
}

SimConfig build_sim_config(const RunSpec& spec) {
  if (spec.n < 1) throw ConfigError("graph.n must be >= 1");
  SimConfig cfg;
  cfg.graph = from_edge_list(spec.n, spec.edges);

  if (spec.model != "pendulum")
    throw ConfigError("unknown agent model '" + spec.model + "'");
  for (int i = 1; i <= spec.n; ++i) cfg.agents.push_back(pendulum_model(i));
  const int r = cfg.agents[0].r;

  if (static_cast<int>(spec.k_gains.size()) != r - 1)
    throw ConfigError("protocol.k_gains: model needs " + std::to_string(r - 1) +
                      " gains");
  cfg.protocol.T = spec.T;
  cfg.protocol.k_gains = spec.k_gains;
  cfg.protocol.K = spec.K;
  cfg.protocol.C_s = spec.C_s;
  cfg.protocol.schedule.beta0 = spec.beta0;
  cfg.protocol.schedule.gamma = spec.gamma;
  if (spec.schedule == "floored") {
    cfg.protocol.schedule.mode = ScalingMode::Floored;
    cfg.protocol.schedule.floor = std::sqrt(spec.epsilon);
  } else {
    cfg.protocol.schedule.mode = ScalingMode::Geometric;
    cfg.protocol.schedule.floor = 0.0;
  }

  if (spec.mode == "eso") {
    cfg.mode = RunMode::EsoOutputFeedback;
    EsoConfig eso;
    eso.r = r;
    eso.epsilon = spec.epsilon;
    eso.gains = spec.eso_gains.empty() ? gains_from_pole(r, spec.pole)
                                       : spec.eso_gains;
    eso.sat_bounds = spec.sat_bounds;
    if (static_cast<int>(eso.sat_bounds.size()) != r + 1)
      throw ConfigError("observer.M: need " + std::to_string(r + 1) +
                        " bounds");
    if (static_cast<int>(eso.gains.size()) != r + 1)
      throw ConfigError("observer.gains: need " + std::to_string(r + 1) +
                        " gains");
    cfg.observer = std::move(eso);
  } else {
    cfg.mode = RunMode::FullInfo;
    cfg.observer.reset();
  }

  std::string cm = spec.cert_mode;
  if (cm.empty()) cm = spec.mode == "eso" ? "theorem2" : "theorem1";
  if (cm == "theorem1") cfg.cert_mode = cert::TheoremMode::Theorem1;
  else if (cm == "theorem2") cfg.cert_mode = cert::TheoremMode::Theorem2;
  else if (cm == "theorem3") cfg.cert_mode = cert::TheoremMode::Theorem3;
  else throw ConfigError("unknown certify mode '" + cm + "'");

  cfg.eps0 = spec.eps0;
  cfg.duration = spec.duration;
  cfg.substep = spec.substep;
  cfg.init_low = spec.init_low;
  cfg.init_high = spec.init_high;
  cfg.seed = spec.seed;
  cfg.label = spec.label;
  return cfg;
}

}  // namespace qcons
