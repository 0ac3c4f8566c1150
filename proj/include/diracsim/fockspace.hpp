#ifndef DIRACSIM_FOCKSPACE_HPP
#define DIRACSIM_FOCKSPACE_HPP

// Operator algebra and state construction on a truncated qubit (x) cavity-mode
// product space. Slot ordering is fixed as qubit (x) mode1 (x) mode2, so the
// basis index is q*(N1*N2) + n1*N2 + n2. Quadratures follow X = i(d - d^dag)/2
// and P = d^dag + d, giving vacuum variances 1/4 and 1 and [X, P] = i.

#include <array>
#include <complex>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "diracsim/errors.hpp"

namespace diracsim {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct HilbertSpec {
    int n_modes = 1;
    std::vector<int> trunc;

    HilbertSpec() = default;
    HilbertSpec(int modes, std::vector<int> dims);

    int total_dim() const;
    int cavity_dim() const;
    void validate() const;
};

// Slot indices for embed(): 0 is the qubit, modes are 1-based.
inline constexpr int kQubitSlot = 0;

Mat annihilator(int N);
Mat number_operator(int N);

Mat sigma_x();
Mat sigma_y();
Mat sigma_z();
Mat sigma_minus();  // lowers e0 -> e1, so sigma_z e0 = +e0 is the upper spinor component
Mat sigma_plus();

// Kronecker placement of a single-slot operator with identities elsewhere.
Mat embed(const Mat& op, int slot, const HilbertSpec& spec);

// sigma e^{i delta} + sigma^dag e^{-i delta}, embedded; delta=0 gives sigma_x,
// delta=pi/2 gives sigma_y.
Mat pauli_delta(double delta, const HilbertSpec& spec);

Mat position_op(int mode, const HilbertSpec& spec);   // X = i(d - d^dag)/2
Mat momentum_op(int mode, const HilbertSpec& spec);   // P = d^dag + d

// Coherent-state Fock amplitudes, renormalized after truncation. The guard
// |beta|^2 <= N/4 keeps the Poisson tail far from the truncation edge;
// allow_marginal=true downgrades a violation from an error to a pass-through.
Vec coherent_state(cplx beta, int N, bool allow_marginal = false);

Vec vacuum_state(int N);
Vec fock_state(int n, int N);

// Qubit amplitudes cos(theta/2) e0 + e^{i phi} sin(theta/2) e1.
Eigen::Vector2cd bloch_state(double theta, double phi);
Eigen::Vector2cd plus_state();
Eigen::Vector2cd ground_state();   // sigma_z = -1 eigenstate

// Product state psi_qubit (x) psi_mode1 [(x) psi_mode2] in slot order.
Vec product_state(const Eigen::Vector2cd& qubit, const std::vector<Vec>& modes,
                  const HilbertSpec& spec);

struct QubitReduced {
    Eigen::Matrix2cd rho;
    double sx = 0, sy = 0, sz = 0;
    double purity = 0;
};

QubitReduced qubit_reduced(const Vec& state, const HilbertSpec& spec);
QubitReduced qubit_reduced_rho(const Mat& rho, const HilbertSpec& spec);

cplx expectation(const Vec& state, const Mat& op);

// Real part of a Hermitian expectation; rejects imaginary residue >= 1e-9.
double expectation_real(const Vec& state, const Mat& op);

// Expectation of a single-mode operator, contracted without embedding.
cplx mode_expectation(const Vec& state, const Mat& op, int mode, const HilbertSpec& spec);

// Summed population of the top two Fock levels, maximized over modes.
double top_fock_leak(const Vec& state, const HilbertSpec& spec);
double top_fock_leak_rho(const Mat& rho, const HilbertSpec& spec);

void check_hermitian(const Mat& op, double tol, const std::string& what);

// Debug dump, one entry per line: "row col re im".
void dump_operator(std::ostream& os, const Mat& op);
void dump_state(std::ostream& os, const Vec& state);

} // namespace diracsim

#endif
