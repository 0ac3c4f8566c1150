#pragma once

#include <string>
#include <vector>

#include "diracsim/fockspace.hpp"
#include "diracsim/hamiltonians.hpp"

namespace diracsim {

// Uniform integration grid starting at t = 0. dt is the stepper interval;
// observables are recorded every `stride` steps, endpoints included.
struct TimeGrid {
    double t1 = 0;
    double dt = 0;
    int stride = 1;

    void validate() const;
    long n_steps() const;
    long n_records() const;
    double record_dt() const { return dt * stride; }
    std::vector<double> record_times() const;
};

// Rejects steppers too coarse to resolve the sideband phase of a
// time-dependent model.
void check_grid_resolves(const TimeGrid& grid, const ModelSpec& m);

struct EvolveOptions {
    double leak_bound = 1e-6;
    double renorm_threshold = 1e-10;
    double max_drift = 1e-6;
    bool check_leak = true;
};

// Column-wise trajectory record. With a structured space the columns are
// X/P per mode plus the qubit block; without one only t and norm are kept.
struct ObservableSeries {
    int n_modes = 0;
    std::vector<double> t;
    std::vector<std::vector<double>> X, P;
    std::vector<double> sx, sy, sz, purity, norm, leak;

    std::size_t size() const { return t.size(); }
    std::vector<std::string> column_names() const;
    const std::vector<double>& column(const std::string& name) const;
    double record_dt() const;
};

struct EvolveResult {
    ObservableSeries series;
    Vec final_state;
    Mat final_rho;
    long steps = 0;
    double max_step_drift = 0;
    double cumulative_drift = 0;
    long renorm_count = 0;
};

EvolveResult evolve_unitary(const HamiltonianSource& src, const HilbertSpec& spec, const Vec& psi0,
                            const TimeGrid& grid, const EvolveOptions& opts = {});

// Norm-only recording for states without qubit/mode structure.
EvolveResult evolve_unitary(const HamiltonianSource& src, const Vec& psi0, const TimeGrid& grid,
                            const EvolveOptions& opts = {});

EvolveResult evolve_eigen(const Mat& h, const HilbertSpec& spec, const Vec& psi0,
                          const TimeGrid& grid, const EvolveOptions& opts = {});

EvolveResult evolve_eigen(const Mat& h, const Vec& psi0, const TimeGrid& grid,
                          const EvolveOptions& opts = {});

struct Collapse {
    Mat op;
    double rate = 0;
};

EvolveResult evolve_lindblad(const Mat& h, const HilbertSpec& spec, const Mat& rho0,
                             const std::vector<Collapse>& collapse, const TimeGrid& grid,
                             const EvolveOptions& opts = {});

} // namespace diracsim
