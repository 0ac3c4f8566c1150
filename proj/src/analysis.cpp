#include "diracsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <unsupported/Eigen/FFT>

#include "diracsim/errors.hpp"

namespace diracsim {

namespace {

const double kPi = 3.14159265358979323846;
const double kTwoPi = 2 * kPi;

// Mode-reduced density matrix of a pure state, phase-rotated so that the
// X quadrature becomes the standard oscillator position axis.
Mat mode_density(const Vec& state, int mode, const HilbertSpec& spec) {
    spec.validate();
    if (mode < 1 || mode > spec.n_modes) throw ValidationError("marginal mode out of range");
    if (state.size() != spec.total_dim()) throw ValidationError("marginal state dimension mismatch");

    const int N = spec.trunc[mode - 1];
    Mat rho = Mat::Zero(N, N);
    const int n1 = spec.trunc[0];
    const int n2 = spec.n_modes == 2 ? spec.trunc[1] : 1;
    for (int q = 0; q < 2; ++q) {
        for (int a = 0; a < n1; ++a) {
            for (int b = 0; b < n2; ++b) {
                const cplx amp = state(q * n1 * n2 + a * n2 + b);
                if (amp == cplx(0, 0)) continue;
                const int n = mode == 1 ? a : b;
                for (int ap = 0; ap < n1; ++ap) {
                    if (mode == 2 && ap != a) continue;
                    for (int bp = 0; bp < n2; ++bp) {
                        if (mode == 1 && bp != b) continue;
                        const int np = mode == 1 ? ap : bp;
                        rho(n, np) += amp * std::conj(state(q * n1 * n2 + ap * n2 + bp));
                    }
                }
            }
        }
    }
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) rho(n, m) *= std::polar(1.0, kPi / 2 * (n - m));
    return rho;
}

} // namespace

Spectrum fft_spectrum(const std::vector<double>& samples, double dt_us, WindowKind window) {
    const std::size_t m = samples.size();
    if (m < 8) throw AnalysisError("spectrum needs at least 8 samples");
    if (!(dt_us > 0)) throw AnalysisError("spectrum needs a positive sampling interval");

    std::vector<double> buf(m);
    double wsum = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double w = window == WindowKind::Hann
                             ? 0.5 * (1 - std::cos(kTwoPi * k / (m - 1)))
                             : 1.0;
        buf[k] = samples[k] * w;
        wsum += w;
    }

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> bins;
    fft.fwd(bins, buf);

    Spectrum s;
    s.df_mhz = 1.0 / (m * dt_us);
    const std::size_t half = m / 2;
    s.freq_mhz.reserve(half + 1);
    s.amplitude.reserve(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        s.freq_mhz.push_back(k * s.df_mhz);
        const double scale = k == 0 ? 1.0 / wsum : 2.0 / wsum;
        s.amplitude.push_back(std::abs(bins[k]) * scale);
    }
    return s;
}

std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence) {
    // The first bins carry the zero-frequency lobe of the window; they are
    // excluded both as candidates and from the prominence reference.
    const std::size_t kmin = 3;
    if (s.amplitude.size() < kmin + 2) throw AnalysisError("spectrum too short for peak search");
    if (!(min_prominence > 0) || min_prominence >= 1)
        throw AnalysisError("peak prominence must lie in (0, 1)");

    double amax = 0;
    for (std::size_t k = kmin; k < s.amplitude.size(); ++k) amax = std::max(amax, s.amplitude[k]);
    const double threshold = min_prominence * amax;

    std::vector<Peak> peaks;
    for (std::size_t k = kmin; k + 1 < s.amplitude.size(); ++k) {
        const double c = s.amplitude[k];
        if (c <= threshold || c <= s.amplitude[k - 1] || c < s.amplitude[k + 1]) continue;
        const double tiny = 1e-300;
        const double lo = std::log(s.amplitude[k - 1] + tiny);
        const double mid = std::log(c + tiny);
        const double hi = std::log(s.amplitude[k + 1] + tiny);
        const double denom = lo - 2 * mid + hi;
        double shift = denom == 0 ? 0 : 0.5 * (lo - hi) / denom;
        shift = std::clamp(shift, -0.5, 0.5);
        peaks.push_back({(k + shift) * s.df_mhz,
                         std::exp(mid - 0.25 * (lo - hi) * shift)});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.amplitude > b.amplitude; });
    return peaks;
}

std::vector<double> landau_levels_predicted(const ModelSpec& m, int n_max) {
    if (m.scenario != Scenario::Magnetic1D && m.scenario != Scenario::Magnetic2D)
        throw ValidationError("level prediction requires a magnetically mapped model");
    if (n_max < 1) throw ValidationError("level prediction needs at least one level");
    const double coupling = m.chi[0] * m.drives[0].alpha / 4;
    const double mass = m.delta_omega / 2;
    std::vector<double> f;
    f.reserve(n_max);
    for (int n = 1; n <= n_max; ++n)
        f.push_back(2 * std::sqrt(coupling * coupling * n + mass * mass) / kTwoPi);
    return f;
}

MarginalDensity quadrature_marginal(const Vec& state, int mode, const HilbertSpec& spec,
                                    int n_points, double x_min, double x_max) {
    if (n_points < 16) throw AnalysisError("marginal grid needs at least 16 points");
    if (!(x_max > x_min)) throw AnalysisError("marginal range is empty");

    const Mat rho = mode_density(state, mode, spec);
    const int N = static_cast<int>(rho.rows());

    MarginalDensity md;
    md.x.resize(n_points);
    md.density.resize(n_points);
    const double dx = (x_max - x_min) / (n_points - 1);

    Eigen::MatrixXd phi(N, n_points);
    for (int p = 0; p < n_points; ++p) {
        const double x = x_min + p * dx;
        md.x[p] = x;
        const double xi = std::sqrt(2.0) * x;
        phi(0, p) = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
        if (N > 1) phi(1, p) = std::sqrt(2.0) * xi * phi(0, p);
        for (int n = 2; n < N; ++n)
            phi(n, p) = std::sqrt(2.0 / n) * xi * phi(n - 1, p) -
                        std::sqrt((n - 1.0) / n) * phi(n - 2, p);
        phi.col(p) *= std::pow(2.0, 0.25);
    }

    const Mat prod = rho * phi.cast<cplx>();
    for (int p = 0; p < n_points; ++p) {
        double val = 0;
        for (int n = 0; n < N; ++n) val += (std::conj(cplx(phi(n, p), 0)) * prod(n, p)).real();
        md.density[p] = val;
    }

    for (int p = 0; p + 1 < n_points; ++p)
        md.mass += 0.5 * (md.density[p] + md.density[p + 1]) * dx;
    if (std::abs(md.mass - 1.0) > 1e-3)
        throw AnalysisError("marginal mass " + std::to_string(md.mass) +
                            " is not unity; widen the grid or raise the truncation");
    return md;
}

TransmissionResult transmission_probability(const MarginalDensity& md, const ModelSpec& m,
                                            double p0) {
    const MappedConstants mc = dirac_mapping(m);
    if (!(mc.g > 0)) throw ValidationError("transmission extraction needs a positive tilt");
    if (!(p0 > 0)) throw ValidationError("transmission extraction needs forward launch momentum");

    TransmissionResult r;
    const double energy = std::sqrt(mc.c_eff * p0 * mc.c_eff * p0 + mc.mc2 * mc.mc2);
    r.x_turn = (energy - mc.mc2) / mc.g;
    r.lz = mc.mc2 == 0 ? 1.0 : lz_probability(mc.c_eff, mc.mc2, mc.g);

    const std::size_t n = md.x.size();
    if (n < 3 || md.density.size() != n) throw AnalysisError("transmission needs a marginal");
    const double dx = md.x[1] - md.x[0];

    double beyond = 0, total = 0, peak_left = 0, peak_right = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        const double cell = 0.5 * (md.density[p] + md.density[p + 1]) * dx;
        total += cell;
        const double mid = 0.5 * (md.x[p] + md.x[p + 1]);
        if (mid > r.x_turn) beyond += cell;
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (md.x[p] <= r.x_turn)
            peak_left = std::max(peak_left, md.density[p]);
        else
            peak_right = std::max(peak_right, md.density[p]);
    }
    if (total <= 0) throw AnalysisError("transmission marginal carries no mass");
    r.probability = beyond / total;

    double valley = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < n; ++p)
        if (std::abs(md.x[p] - r.x_turn) <= 1.0) valley = std::min(valley, md.density[p]);

    const double lesser = std::min(r.probability, 1 - r.probability);
    const bool one_sided = lesser < 0.02;
    const bool split = std::isfinite(valley) && valley < 0.25 * std::min(peak_left, peak_right);
    r.indeterminate = !(one_sided || split);
    return r;
}

double lz_probability(double c_eff, double mc2, double g) {
    if (!(c_eff > 0)) throw ValidationError("avoided-crossing rate needs a positive velocity");
    if (g == 0) throw ValidationError("avoided-crossing rate needs a nonzero sweep");
    const double gamma = mc2 * mc2 / (2 * c_eff * std::abs(g));
    return std::exp(-kTwoPi * gamma);
}

double tier_deviation(const ObservableSeries& a, const ObservableSeries& b,
                      const std::string& column) {
    if (a.size() != b.size() || a.size() == 0)
        throw AnalysisError("deviation needs two series of equal length");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::abs(a.t[k] - b.t[k]) > 1e-12)
            throw AnalysisError("deviation needs identical record times");
    const std::vector<double>& ca = a.column(column);
    const std::vector<double>& cb = b.column(column);
    double acc = 0;
    for (std::size_t k = 0; k < ca.size(); ++k) {
        const double d = ca[k] - cb[k];
        acc += d * d;
    }
    return std::sqrt(acc / ca.size());
}

} // namespace diracsim
