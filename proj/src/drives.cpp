#include "diracsim/drives.hpp"

#include <cmath>
#include <string>

namespace diracsim {

using cplxd = std::complex<double>;

void SidebandDrive::validate() const {
    if (!(omega_sb > 0))
        throw ValidationError("SidebandDrive: omega_sb must be positive, got " + std::to_string(omega_sb));
    if (kappa < 0)
        throw ValidationError("SidebandDrive: kappa must be non-negative, got " + std::to_string(kappa));
    if (kappa > 0 && !(kappa < omega_sb / 100))
        throw ValidationError("SidebandDrive: kappa = " + std::to_string(kappa) +
                              " is not small against omega_sb/100 = " + std::to_string(omega_sb / 100));
}

void RabiDrive::validate() const {
    if (omega_r < 0)
        throw ValidationError("RabiDrive: omega_r must be non-negative, got " + std::to_string(omega_r));
}

namespace {

cplxd symmetric_part(double t, const SidebandDrive& d) {
    if (d.kappa == 0)
        return cplxd(0, -1) * d.alpha * d.omega_sb * std::sin(d.omega_sb * t + d.delta);
    const double amp = d.alpha * std::sqrt(d.omega_sb * d.omega_sb + d.kappa * d.kappa / 4);
    const double shift = std::atan2(d.kappa / 2, d.omega_sb);
    return cplxd(0, -1) * amp * std::sin(d.omega_sb * t + d.delta - shift);
}

} // namespace

cplxd symmetric_eps(double t, const SidebandDrive& d) {
    d.validate();
    if (d.delta_alpha != 0 || d.gamma != 0)
        throw ValidationError("symmetric_eps: drive has delta_alpha or gamma set; "
                              "use asymmetric_eps or electro_eps");
    return symmetric_part(t, d);
}

cplxd asymmetric_eps(double t, const SidebandDrive& d) {
    d.validate();
    const double theta = d.omega_sb * t + d.delta;
    return d.omega_sb * (-(d.delta_alpha / 2) * std::polar(1.0, theta)
                         + cplxd(0, -1) * d.alpha * std::sin(theta));
}

cplxd electro_eps(double t, const SidebandDrive& d) {
    d.validate();
    if (d.delta_alpha != 0)
        throw ValidationError("electro_eps: drive has delta_alpha set; sidebands must be symmetric");
    return symmetric_part(t, d) + cplxd(0, 1) * d.gamma;
}

cplxd combined_eps(double t, const SidebandDrive& d) {
    d.validate();
    const double theta = d.omega_sb * t + d.delta;
    return symmetric_part(t, d) - d.omega_sb * (d.delta_alpha / 2) * std::polar(1.0, theta)
           + cplxd(0, 1) * d.gamma;
}

cplxd classical_displacement(double t, const SidebandDrive& d) {
    const double theta = d.omega_sb * t + d.delta;
    return d.alpha * std::cos(theta) + (d.delta_alpha / 2) * std::polar(1.0, theta);
}

double resonant_rabi_condition(ScenarioKind kind, double chi, const SidebandDrive& d) {
    const double a = d.alpha, da = d.delta_alpha;
    switch (kind) {
        case ScenarioKind::Free:
        case ScenarioKind::Electro:
            return -chi * a * a / 2;
        case ScenarioKind::Magnetic:
            return -chi * (a * a / 2 + a * da / 2 + da * da / 4);
    }
    throw ValidationError("resonant_rabi_condition: unknown scenario kind");
}

} // namespace diracsim
