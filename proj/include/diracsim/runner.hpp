#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "diracsim/config.hpp"

namespace diracsim {

struct RunSummary {
    std::string out_dir;
    std::vector<std::string> files;
    int jobs = 0;
    double total_wall_ms = 0;
};

// Runs every sweep point under every requested tier, writes trajectory and
// analysis files plus a manifest, and returns what was written. The manifest
// is always the last file to land. workers_override > 0 beats the config
// value; the SIM_WORKERS environment variable beats both.
RunSummary run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                        int workers_override = 0);

// Verifies the recorded checksums of both output directories and reports
// file-by-file agreement. Returns true when the data files match exactly.
bool compare_outputs(const std::string& dir_a, const std::string& dir_b, std::ostream& report);

std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

} // namespace diracsim
