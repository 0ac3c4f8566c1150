#pragma once

#include <string>
#include <vector>

#include "diracsim/hamiltonians.hpp"
#include "diracsim/propagator.hpp"

namespace diracsim {

// Frequencies in the config file are plain MHz; the conversion to angular
// units happens exactly once, inside model_at().
struct ModeConfig {
    int truncation = 0;
    double chi_mhz = 0;
    double alpha = 0;
    std::vector<double> delta_alpha = {0.0};
    std::vector<double> omega_sb_mhz = {40.0};
    bool omega_sb_set = false;
    double delta_rad = 0;
    double gamma_mhz = 0;
    double kappa_mhz = 0;
    std::string initial = "vacuum";
};

struct GridConfig {
    double t1_us = 0;
    double dt_us = -1; // negative means automatic
    int stride = 1;
};

struct AnalysisConfig {
    double leak_bound = 1e-6;
    bool spectrum = false;
    std::string spectrum_column = "sz";
    std::string window = "hann";
    double min_prominence = 0.05;
    int peaks_max = 8;
    bool marginal = false;
    int marginal_mode = 1;
    int marginal_points = 512;
    double marginal_halfwidth = 8.0;
    bool transmission = false;
    bool deviation = false;
    std::string deviation_column = "X1";
};

struct ScenarioConfig {
    std::string name;
    Scenario scenario = Scenario::Free1D;
    std::vector<Tier> tiers;
    std::string method = "auto"; // auto | rk4 | eigen
    bool convergence_check = true;
    int workers = 1;

    std::string qubit_initial = "plus";
    std::vector<double> delta_omega_mhz = {0.0};

    std::vector<ModeConfig> modes;
    GridConfig grid;
    AnalysisConfig analysis;

    std::string raw_text;

    static ScenarioConfig parse(const std::string& text);
    static ScenarioConfig load(const std::string& path);

    void validate() const;

    // Sweep bookkeeping: at most one of the three list-valued keys may hold
    // more than one entry; points index into that list.
    std::string sweep_key() const;
    std::size_t n_points() const;
    double sweep_value(std::size_t point) const;

    ModelSpec model_at(std::size_t point, Tier tier) const;
    Vec initial_state(std::size_t point) const;
    TimeGrid grid_for(const ModelSpec& m, const std::string& resolved_method) const;
    std::string resolve_method(const ModelSpec& m) const;
};

std::string to_config_token(Scenario s);
std::string to_config_token(Tier t);
Scenario scenario_from_token(const std::string& token);
Tier tier_from_token(const std::string& token);

} // namespace diracsim
