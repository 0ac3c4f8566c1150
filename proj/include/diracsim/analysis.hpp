#pragma once

#include <vector>

#include "diracsim/fockspace.hpp"
#include "diracsim/hamiltonians.hpp"
#include "diracsim/propagator.hpp"

namespace diracsim {

enum class WindowKind { None, Hann };

// Single-sided amplitude spectrum: a pure cosine of amplitude A sampled
// on-bin reports A at its frequency. Time in microseconds gives MHz bins.
struct Spectrum {
    std::vector<double> freq_mhz;
    std::vector<double> amplitude;
    double df_mhz = 0;
};

Spectrum fft_spectrum(const std::vector<double>& samples, double dt_us,
                      WindowKind window = WindowKind::Hann);

struct Peak {
    double freq_mhz = 0;
    double amplitude = 0;
};

// Local maxima above min_prominence times the strongest non-DC bin, refined
// by parabolic interpolation of the log amplitude. Strongest first.
std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence);

// Relativistic level spacings for the magnetically mapped model, in MHz.
std::vector<double> landau_levels_predicted(const ModelSpec& m, int n_max);

struct MarginalDensity {
    std::vector<double> x;
    std::vector<double> density;
    double mass = 0;
};

MarginalDensity quadrature_marginal(const Vec& state, int mode, const HilbertSpec& spec,
                                    int n_points = 512, double x_min = -8.0, double x_max = 8.0);

struct TransmissionResult {
    double probability = 0;
    bool indeterminate = false;
    double x_turn = 0;
    double lz = 0;
};

// Fraction of the marginal beyond the classical turning point of the tilted
// dispersion, flagged indeterminate when the lobes have not separated.
TransmissionResult transmission_probability(const MarginalDensity& md, const ModelSpec& m,
                                            double p0);

double lz_probability(double c_eff, double mc2, double g);

// Root-mean-square difference of one trajectory column across two runs
// recorded on exactly the same time grid.
double tier_deviation(const ObservableSeries& a, const ObservableSeries& b,
                      const std::string& column);

} // namespace diracsim
