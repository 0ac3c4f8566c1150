#ifndef DIRACSIM_HAMILTONIANS_HPP
#define DIRACSIM_HAMILTONIANS_HPP

// Hamiltonian builders for the emulated Dirac dynamics. The ideal tier is the
// time-independent post-RWA operator; the full tier keeps every term that
// oscillates at the sideband frequency and its harmonics, in the frame where
// only MHz-scale dynamics remain. Averaging the full Hamiltonian over one
// sideband period recovers the ideal one, which the tests enforce.

#include <functional>
#include <memory>
#include <vector>

#include "diracsim/drives.hpp"
#include "diracsim/fockspace.hpp"

namespace diracsim {

enum class Scenario { Free1D, Free2D, Magnetic1D, Magnetic2D, Electro1D };
enum class Tier { Ideal, Full, IdealPlusMagnus };

const char* to_string(Scenario s);
const char* to_string(Tier t);
ScenarioKind scenario_kind(Scenario s);
int scenario_modes(Scenario s);

struct ModelSpec {
    Scenario scenario = Scenario::Free1D;
    Tier tier = Tier::Ideal;
    std::vector<double> chi;           // per-mode dispersive shift, rad/us
    std::vector<SidebandDrive> drives; // per-mode sideband drives
    double delta_omega = 0;            // Omega_R - Omega_SB, rad/us; mass term is delta_omega/2
    HilbertSpec space;

    void validate() const;
};

struct MappedConstants {
    double c_eff = 0;  // emulated speed of light, rad/us
    double mc2 = 0;    // rest energy, rad/us
    double eB = 0;     // magnetic coupling, dimensionless
    double g = 0;      // potential slope, rad/us
};

// Time-independent post-RWA Hamiltonian for the Ideal and IdealPlusMagnus
// tiers; the Magnus term is not included here (see magnus_correction).
Mat ideal_hamiltonian(const ModelSpec& m);

// Pre-RWA Hamiltonian at time t, Hermitian for every t.
Mat full_hamiltonian(double t, const ModelSpec& m);

// Second-order static correction (chi^2/4 Omega_SB)(d^dag d)^2 sigma_z per mode.
Mat magnus_correction(const ModelSpec& m);

// Single-mode pre-displacement Hamiltonian: dispersive coupling, explicit
// cavity drive, and the qubit drive at the resonant Rabi condition.
Mat lab_frame_h2(double t, const ModelSpec& m);

// Single-mode Hamiltonian after shifting the cavity by the classical drive
// response: the explicit drive disappears and the dispersive coupling acts
// on the displaced ladder. Only undamped, untilted drives are supported.
Mat displaced_frame_h3(double t, const ModelSpec& m);

MappedConstants dirac_mapping(const ModelSpec& m);

// Unitary displacement operator exp(beta a^dag - conj(beta) a) on one mode.
Mat displacement_operator(cplx beta, int N);

// Evolution-facing view of a Hamiltonian: out = H(t) psi without forcing an
// explicit matrix build on the hot path.
struct HamiltonianSource {
    virtual ~HamiltonianSource() = default;
    virtual int dim() const = 0;
    virtual void apply(double t, const Vec& psi, Vec& out) const = 0;
    virtual Mat matrix(double t) const = 0;
    virtual bool time_dependent() const = 0;
};

class StaticHamiltonian : public HamiltonianSource {
  public:
    explicit StaticHamiltonian(Mat h);
    int dim() const override;
    void apply(double t, const Vec& psi, Vec& out) const override;
    Mat matrix(double t) const override;
    bool time_dependent() const override { return false; }

  private:
    Mat h_;
};

class CallbackHamiltonian : public HamiltonianSource {
  public:
    CallbackHamiltonian(std::function<Mat(double)> f, int dim);
    int dim() const override;
    void apply(double t, const Vec& psi, Vec& out) const override;
    Mat matrix(double t) const override;
    bool time_dependent() const override { return true; }

  private:
    std::function<Mat(double)> f_;
    int dim_;
};

// Structured evaluation for a ModelSpec: static matrix for ideal tiers, a
// block-wise application of the sideband-oscillating terms for the full tier.
class ModelHamiltonian : public HamiltonianSource {
  public:
    explicit ModelHamiltonian(const ModelSpec& m);
    int dim() const override;
    void apply(double t, const Vec& psi, Vec& out) const override;
    Mat matrix(double t) const override;
    bool time_dependent() const override;

  private:
    void cavity_coefficient(double t, int mode, Mat& out) const;
    void apply_cavity(const Mat& c1, const Mat* c2, const Eigen::Ref<const Vec>& x,
                      Eigen::Ref<Vec> y) const;

    ModelSpec m_;
    Mat static_h_;                 // ideal tiers only
    std::vector<Mat> pmat_, bmat_; // per-mode d^dag + d and i(d^dag - d)
    std::vector<Eigen::VectorXd> nvec_;
    Mat electro_b_;                // gamma * i(d^dag - d) on mode 1, full tier
    bool has_electro_ = false;
};

std::unique_ptr<HamiltonianSource> make_source(const ModelSpec& m);

} // namespace diracsim

#endif
