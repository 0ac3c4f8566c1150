#ifndef DIRACSIM_DRIVES_HPP
#define DIRACSIM_DRIVES_HPP

// Sideband and resonant drive waveforms in the cavity rotating frame, the
// classical displacement they produce, and the qubit detuning that cancels
// the static dispersive shift. Frequencies are rad/us, times are us; the
// MHz-to-rad/us conversion happens at the config boundary, never here.

#include <complex>

#include "diracsim/errors.hpp"

namespace diracsim {

struct SidebandDrive {
    double alpha = 0;        // symmetric sideband amplitude, dimensionless
    double delta_alpha = 0;  // sideband asymmetry, dimensionless
    double omega_sb = 0;     // sideband frequency, rad/us
    double delta = 0;        // relative sideband phase, rad
    double gamma = 0;        // resonant-drive amplitude, rad/us
    double kappa = 0;        // cavity damping, rad/us

    void validate() const;
};

struct RabiDrive {
    double omega_r = 0;  // Rabi amplitude, rad/us
    double phase = 0;    // drive phase, rad
    double omega_d = 0;  // drive frequency offset from the bare qubit, rad/us

    void validate() const;
};

// Rotating-frame drive envelope of a symmetric sideband pair:
// -i alpha Omega sin(Omega t + delta); with kappa > 0 the amplitude grows to
// alpha sqrt(Omega^2 + kappa^2/4) and the phase shifts by arctan(kappa/2Omega)
// so the cavity response below stays exactly alpha cos(Omega t + delta).
std::complex<double> symmetric_eps(double t, const SidebandDrive& d);

// Asymmetric pair: Omega ( -(dalpha/2) e^{i(Omega t+delta)} - i alpha sin(Omega t+delta) ).
std::complex<double> asymmetric_eps(double t, const SidebandDrive& d);

// Symmetric pair plus a constant resonant drive i gamma.
std::complex<double> electro_eps(double t, const SidebandDrive& d);

// Envelope with every configured term active; the three named forms above are
// its special cases.
std::complex<double> combined_eps(double t, const SidebandDrive& d);

// Classical cavity response alpha cos(Omega t+delta) + (dalpha/2) e^{i(Omega t+delta)};
// solves a_dot = -i eps - (kappa/2) a for the matching envelope.
std::complex<double> classical_displacement(double t, const SidebandDrive& d);

enum class ScenarioKind { Free, Magnetic, Electro };

// Qubit-drive detuning omega_q - omega_d that cancels the static dispersive
// shift: -chi alpha^2/2 for symmetric drives, with the asymmetry cross terms
// added for magnetic scenarios. Multi-mode setups sum the per-mode values.
double resonant_rabi_condition(ScenarioKind kind, double chi, const SidebandDrive& d);

} // namespace diracsim

#endif
