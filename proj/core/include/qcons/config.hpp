#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcons/engine.hpp"

namespace qcons {

struct ConfigError : std::runtime_error {
  int line = 0;  // 0 when not tied to a specific line

  ConfigError(const std::string& msg, int line_no = 0);
};

// Where a resolved value came from. Dump order and equality ignore this.
enum class ValueSource { Default, Preset, Explicit };

// Declarative run description, resolved from a preset and/or a config file.
// Pure data so that specs compare, copy and round trip cleanly.
struct RunSpec {
  // graph
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // 1-based

  // agents
  std::string model = "pendulum";

  // protocol
  double T = 0.05;
  double gamma = 0.93;
  int K = 10;
  double beta0 = 10.0;
  std::vector<double> k_gains{4.0, 4.0};
  double C_s = 40.0;
  std::string schedule = "floored";  // "geometric" or "floored"

  // observer
  double epsilon = 0.01;
  double pole = -1.0;               // used when gains is empty
  std::vector<double> eso_gains;    // explicit l_1..l_{r+1}, overrides pole
  std::vector<double> sat_bounds{5.0, 5.0, 15.0, 25.0};

  // sim
  std::string mode = "eso";  // "eso" or "full_info"
  std::string cert_mode;     // "theorem1/2/3"; empty picks by mode
  double eps0 = 0.5;
  double duration = 30.0;
  double substep = 0.0;
  double init_low = -4.5;
  double init_high = 4.5;
  std::uint64_t seed = 1;
  std::string label = "run";

  std::map<std::string, ValueSource> provenance;  // "section.key" -> source

  friend bool operator==(const RunSpec& a, const RunSpec& b);
};

std::vector<std::string> preset_names();
RunSpec make_preset(const std::string& name);  // throws on unknown name

// Sectioned key = value text. '#' and ';' start comments, a top level
// `preset` line seeds defaults, later keys override. Errors carry the line.
RunSpec parse_config(const std::string& text);
RunSpec parse_config_file(const std::string& path);

// Inverse of parse_config up to provenance: parse(dump(spec)) == spec.
std::string dump_config(const RunSpec& spec);

// Materialize the engine input: builds the graph, the agent models, the
// observer gains (from pole when not explicit) and the scaling schedule
// (floored mode floors at sqrt(epsilon)). Validates everything it builds.
SimConfig build_sim_config(const RunSpec& spec);

}  // namespace qcons
