#pragma once

#include <string>
#include <vector>

#include "qcons/engine.hpp"

namespace qcons {

// Writes timeseries.csv, metrics.csv and summary.txt into dir (created if
// missing). Numeric fields use 12 significant digits; nothing in the files
// depends on wall clock or machine, so a rerun is byte identical. Returns
// the paths written.
std::vector<std::string> emit_outputs(const SimResult& res,
                                      const std::string& dir);

std::string render_timeseries_csv(const SimResult& res);
std::string render_metrics_csv(const SimResult& res);
std::string render_summary(const SimResult& res);

}  // namespace qcons
