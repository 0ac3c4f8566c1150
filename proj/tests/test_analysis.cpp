#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "diracsim/analysis.hpp"

using namespace diracsim;

namespace {

const double kPi = 3.14159265358979323846;
const double kTwoPi = 2 * kPi;

std::vector<double> sampled(double dt, int m, double dc, std::vector<std::pair<double, double>> tones) {
    std::vector<double> out(m);
    for (int k = 0; k < m; ++k) {
        double v = dc;
        for (auto [amp, f] : tones) v += amp * std::cos(kTwoPi * f * k * dt);
        out[k] = v;
    }
    return out;
}

ModelSpec magnetic_model(double mass_mhz, int N = 8) {
    ModelSpec m;
    m.scenario = Scenario::Magnetic1D;
    m.tier = Tier::Ideal;
    m.chi = {kTwoPi * 0.1};
    SidebandDrive d;
    d.alpha = 1.0;
    d.delta_alpha = -1.0;
    d.omega_sb = kTwoPi * 40;
    m.drives = {d};
    m.delta_omega = kTwoPi * mass_mhz;
    m.space = HilbertSpec(1, {N});
    return m;
}

ModelSpec electro_model(double mass_mhz, double gamma_mhz = -0.05, int N = 12) {
    ModelSpec m;
    m.scenario = Scenario::Electro1D;
    m.tier = Tier::Ideal;
    m.chi = {kTwoPi * 0.1};
    SidebandDrive d;
    d.alpha = 1.0;
    d.gamma = kTwoPi * gamma_mhz;
    d.omega_sb = kTwoPi * 40;
    m.drives = {d};
    m.delta_omega = kTwoPi * mass_mhz;
    m.space = HilbertSpec(1, {N});
    return m;
}

MarginalDensity synthetic_marginal(const std::vector<std::pair<double, double>>& lobes,
                                   const std::vector<double>& masses, double sigma,
                                   int n = 1024) {
    MarginalDensity md;
    md.x.resize(n);
    md.density.assign(n, 0.0);
    const double dx = 16.0 / (n - 1);
    for (int p = 0; p < n; ++p) {
        md.x[p] = -8.0 + p * dx;
        for (std::size_t j = 0; j < lobes.size(); ++j) {
            const double mu = lobes[j].first;
            const double s = lobes[j].second > 0 ? lobes[j].second : sigma;
            md.density[p] += masses[j] / (s * std::sqrt(kTwoPi)) *
                             std::exp(-0.5 * (md.x[p] - mu) * (md.x[p] - mu) / (s * s));
        }
    }
    for (int p = 0; p + 1 < n; ++p)
        md.mass += 0.5 * (md.density[p] + md.density[p + 1]) * dx;
    return md;
}

} // namespace

TEST_CASE("unwindowed spectrum reports single-sided cosine amplitudes") {
    const int m = 256;
    const double dt = 0.01;
    const double df = 1.0 / (m * dt);
    auto x = sampled(dt, m, 0.3, {{0.5, 20 * df}, {0.2, 45 * df}});
    Spectrum s = fft_spectrum(x, dt, WindowKind::None);

    CHECK(s.df_mhz == doctest::Approx(df).epsilon(1e-12));
    CHECK(s.amplitude[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(s.amplitude[20] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.amplitude[45] == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(s.amplitude[33] < 1e-10);

    // Mean power decomposes over the single-sided bins.
    double power = 0;
    for (double v : x) power += v * v / m;
    double from_bins = s.amplitude[0] * s.amplitude[0];
    for (std::size_t k = 1; k < s.amplitude.size(); ++k)
        from_bins += 0.5 * s.amplitude[k] * s.amplitude[k];
    CHECK(power == doctest::Approx(from_bins).epsilon(1e-9));
}

TEST_CASE("windowed peak interpolation recovers off-bin tones") {
    const int m = 2000;
    const double dt = 0.05;
    const double f0 = 0.7937;
    auto x = sampled(dt, m, 0.0, {{0.8, f0}});
    Spectrum s = fft_spectrum(x, dt);
    auto peaks = find_peaks(s, 0.1);
    REQUIRE(!peaks.empty());
    CHECK(peaks[0].freq_mhz == doctest::Approx(f0).epsilon(2e-4));
    CHECK(peaks[0].amplitude == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("peak search ranks by amplitude and honors the prominence floor") {
    const int m = 4000;
    const double dt = 0.02;
    auto x = sampled(dt, m, 5.0, {{1.0, 3.1}, {0.3, 7.4}});
    Spectrum s = fft_spectrum(x, dt);

    auto both = find_peaks(s, 0.1);
    REQUIRE(both.size() >= 2);
    CHECK(both[0].freq_mhz == doctest::Approx(3.1).epsilon(1e-3));
    CHECK(both[1].freq_mhz == doctest::Approx(7.4).epsilon(1e-3));
    CHECK(both[0].amplitude > both[1].amplitude);

    auto strong = find_peaks(s, 0.5);
    REQUIRE(strong.size() == 1);
    CHECK(strong[0].freq_mhz == doctest::Approx(3.1).epsilon(1e-3));

    CHECK_THROWS_AS(find_peaks(s, 0.0), AnalysisError);
    CHECK_THROWS_AS(find_peaks(s, 1.5), AnalysisError);
}

TEST_CASE("spectrum input validation") {
    CHECK_THROWS_AS(fft_spectrum({1, 2, 3}, 0.1), AnalysisError);
    CHECK_THROWS_AS(fft_spectrum(std::vector<double>(64, 0.0), 0.0), AnalysisError);
}

TEST_CASE("predicted level spacings scale with the square root of the index") {
    ModelSpec m = magnetic_model(0.0);
    auto f = landau_levels_predicted(m, 4);
    REQUIRE(f.size() == 4);
    for (int n = 1; n <= 4; ++n)
        CHECK(f[n - 1] == doctest::Approx(0.05 * std::sqrt(double(n))).epsilon(1e-12));

    ModelSpec massive = magnetic_model(0.1);
    auto fm = landau_levels_predicted(massive, 2);
    CHECK(fm[0] == doctest::Approx(2 * std::sqrt(0.025 * 0.025 + 0.05 * 0.05)).epsilon(1e-12));

    ModelSpec wrong = electro_model(0.0);
    CHECK_THROWS_AS(landau_levels_predicted(wrong, 3), ValidationError);
    CHECK_THROWS_AS(landau_levels_predicted(m, 0), ValidationError);
}

TEST_CASE("vacuum marginal is the ground Gaussian") {
    HilbertSpec spec(1, {12});
    Vec psi = product_state(ground_state(), {vacuum_state(12)}, spec);
    auto md = quadrature_marginal(psi, 1, spec);
    CHECK(md.mass == doctest::Approx(1.0).epsilon(1e-6));

    double mean = 0, var = 0;
    const double dx = md.x[1] - md.x[0];
    for (std::size_t p = 0; p < md.x.size(); ++p) mean += md.x[p] * md.density[p] * dx;
    for (std::size_t p = 0; p < md.x.size(); ++p)
        var += (md.x[p] - mean) * (md.x[p] - mean) * md.density[p] * dx;
    CHECK(std::abs(mean) < 1e-9);
    CHECK(var == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(md.density[256] == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-3));
}

TEST_CASE("displaced state marginal pins the quadrature sign convention") {
    const int N = 24;
    HilbertSpec spec(1, {N});
    Vec psi = product_state(ground_state(), {coherent_state(cplx(0, 0.5), N)}, spec);
    auto md = quadrature_marginal(psi, 1, spec);

    double mean = 0;
    const double dx = md.x[1] - md.x[0];
    for (std::size_t p = 0; p < md.x.size(); ++p) mean += md.x[p] * md.density[p] * dx;
    CHECK(mean == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("single quantum marginal vanishes at the origin") {
    const int N = 8;
    HilbertSpec spec(1, {N});
    Vec psi = product_state(ground_state(), {fock_state(1, N)}, spec);
    auto md = quadrature_marginal(psi, 1, spec, 513);
    CHECK(md.mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(md.density[256] < 1e-12);
    CHECK(md.density[200] > 0.01);
}

TEST_CASE("marginal of each mode in a two-mode product state") {
    HilbertSpec spec(2, {16, 16});
    Vec psi = product_state(ground_state(),
                            {coherent_state(cplx(0, 1.0), 16), coherent_state(cplx(0, -0.7), 16)},
                            spec);
    auto md1 = quadrature_marginal(psi, 1, spec);
    auto md2 = quadrature_marginal(psi, 2, spec);
    const double dx = md1.x[1] - md1.x[0];
    double mean1 = 0, mean2 = 0;
    for (std::size_t p = 0; p < md1.x.size(); ++p) {
        mean1 += md1.x[p] * md1.density[p] * dx;
        mean2 += md2.x[p] * md2.density[p] * dx;
    }
    CHECK(mean1 == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(mean2 == doctest::Approx(0.7).epsilon(1e-5));
}

TEST_CASE("marginal errors on a clipped grid") {
    HilbertSpec spec(1, {8});
    Vec psi = product_state(ground_state(), {vacuum_state(8)}, spec);
    CHECK_THROWS_AS(quadrature_marginal(psi, 1, spec, 64, -0.5, 0.5), AnalysisError);
    CHECK_THROWS_AS(quadrature_marginal(psi, 2, spec), ValidationError);
    CHECK_THROWS_AS(quadrature_marginal(psi, 1, spec, 4), AnalysisError);
}

TEST_CASE("transmission splits mass at the turning point") {
    ModelSpec m = electro_model(0.0);
    auto md = synthetic_marginal({{-2.0, 0.4}, {3.0, 0.4}}, {0.3, 0.7}, 0.4);
    auto r = transmission_probability(md, m, 1.0);
    CHECK(r.x_turn == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.lz == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.probability == doctest::Approx(0.7).epsilon(1e-3));
    CHECK_FALSE(r.indeterminate);
}

TEST_CASE("massive transmission reports the avoided-crossing asymptote") {
    ModelSpec m = electro_model(0.1);
    auto md = synthetic_marginal({{-2.0, 0.4}, {3.0, 0.4}}, {0.6, 0.4}, 0.4);
    auto r = transmission_probability(md, m, 1.0);
    const double expected_turn = (std::sqrt(std::pow(kTwoPi * 0.025, 2) + std::pow(kTwoPi * 0.05, 2)) -
                                  kTwoPi * 0.05) / (kTwoPi * 0.1);
    CHECK(r.x_turn == doctest::Approx(expected_turn).epsilon(1e-12));
    CHECK(r.lz == doctest::Approx(std::exp(-kPi)).epsilon(1e-12));
    CHECK(r.probability == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("unsplit packets are flagged indeterminate") {
    ModelSpec m = electro_model(0.0);
    auto md = synthetic_marginal({{0.25, 0.0}}, {1.0}, 1.0);
    auto r = transmission_probability(md, m, 1.0);
    CHECK(r.indeterminate);
    CHECK(r.probability == doctest::Approx(0.5).epsilon(0.01));

    auto gone = synthetic_marginal({{3.0, 0.0}}, {1.0}, 0.5);
    auto rt = transmission_probability(gone, m, 1.0);
    CHECK_FALSE(rt.indeterminate);
    CHECK(rt.probability > 0.99);
}

TEST_CASE("avoided-crossing probability formula and guards") {
    CHECK(lz_probability(kTwoPi * 0.025, kTwoPi * 0.025, kTwoPi * 0.1) ==
          doctest::Approx(std::exp(-kTwoPi * 0.125)).epsilon(1e-12));
    CHECK(lz_probability(kTwoPi * 0.025, 0.0, kTwoPi * 0.1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lz_probability(0.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(lz_probability(1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("trajectory deviation is the root mean square gap") {
    ObservableSeries a, b;
    a.n_modes = b.n_modes = 1;
    a.t = {0, 1, 2, 3};
    b.t = a.t;
    a.X = {{0, 1, 2, 3}};
    b.X = {{0, 1.1, 1.9, 3.2}};
    a.P = b.P = {{0, 0, 0, 0}};
    const double rms = std::sqrt((0.01 + 0.01 + 0.04) / 4);
    CHECK(tier_deviation(a, b, "X1") == doctest::Approx(rms).epsilon(1e-12));
    CHECK(tier_deviation(a, b, "P1") == 0.0);

    ObservableSeries c = b;
    c.t = {0, 1, 2, 3.5};
    CHECK_THROWS_AS(tier_deviation(a, c, "X1"), AnalysisError);
    CHECK_THROWS_AS(tier_deviation(a, b, "Q7"), AnalysisError);
}

TEST_CASE("vacuum oscillation spectroscopy finds the split line") {
    ModelSpec m = magnetic_model(0.05);
    Vec psi0 = product_state(ground_state(), {vacuum_state(8)}, m.space);
    auto res = evolve_eigen(ideal_hamiltonian(m), m.space, psi0, TimeGrid{400.0, 0.2, 1});
    Spectrum s = fft_spectrum(res.series.sz, res.series.record_dt());
    auto peaks = find_peaks(s, 0.05);
    REQUIRE(!peaks.empty());
    CHECK(peaks[0].freq_mhz == doctest::Approx(0.05 * std::sqrt(2.0)).epsilon(5e-3));
}
