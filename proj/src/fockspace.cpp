#include "diracsim/fockspace.hpp"

#include <cmath>
#include <sstream>

namespace diracsim {

namespace {

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

HilbertSpec::HilbertSpec(int modes, std::vector<int> dims) : n_modes(modes), trunc(std::move(dims)) {
    validate();
}

int HilbertSpec::cavity_dim() const {
    int d = 1;
    for (int n : trunc) d *= n;
    return d;
}

int HilbertSpec::total_dim() const { return 2 * cavity_dim(); }

void HilbertSpec::validate() const {
    if (n_modes != 1 && n_modes != 2)
        throw ValidationError("HilbertSpec: n_modes must be 1 or 2, got " + std::to_string(n_modes));
    if (static_cast<int>(trunc.size()) != n_modes)
        throw ValidationError("HilbertSpec: expected " + std::to_string(n_modes) +
                              " truncation entries, got " + std::to_string(trunc.size()));
    for (int n : trunc)
        if (n < 2)
            throw ValidationError("HilbertSpec: every truncation must be >= 2, got " + std::to_string(n));
}

Mat annihilator(int N) {
    if (N < 2) throw ValidationError("annihilator: truncation must be >= 2, got " + std::to_string(N));
    Mat a = Mat::Zero(N, N);
    for (int m = 1; m < N; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
    return a;
}

Mat number_operator(int N) {
    Mat n = Mat::Zero(N, N);
    for (int m = 0; m < N; ++m) n(m, m) = static_cast<double>(m);
    return n;
}

Mat sigma_x() {
    Mat s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

Mat sigma_y() {
    Mat s(2, 2);
    s << 0, cplx(0, -1), cplx(0, 1), 0;
    return s;
}

Mat sigma_z() {
    Mat s(2, 2);
    s << 1, 0, 0, -1;
    return s;
}

Mat sigma_minus() {
    Mat s = Mat::Zero(2, 2);
    s(1, 0) = 1;
    return s;
}

Mat sigma_plus() {
    Mat s = Mat::Zero(2, 2);
    s(0, 1) = 1;
    return s;
}

Mat embed(const Mat& op, int slot, const HilbertSpec& spec) {
    spec.validate();
    if (slot < 0 || slot > spec.n_modes)
        throw ValidationError("embed: slot " + std::to_string(slot) + " outside qubit+" +
                              std::to_string(spec.n_modes) + " modes");
    const int slot_dim = (slot == kQubitSlot) ? 2 : spec.trunc[slot - 1];
    if (op.rows() != slot_dim || op.cols() != slot_dim)
        throw ValidationError("embed: operator is " + std::to_string(op.rows()) + "x" +
                              std::to_string(op.cols()) + " but slot " + std::to_string(slot) +
                              " has dimension " + std::to_string(slot_dim));
    Mat out = (slot == kQubitSlot) ? op : Mat::Identity(2, 2);
    for (int m = 1; m <= spec.n_modes; ++m) {
        const int N = spec.trunc[m - 1];
        out = kron(out, (slot == m) ? op : Mat::Identity(N, N));
    }
    return out;
}

Mat pauli_delta(double delta, const HilbertSpec& spec) {
    const cplx ph = std::polar(1.0, delta);
    Mat s = sigma_minus() * ph + sigma_plus() * std::conj(ph);
    return embed(s, kQubitSlot, spec);
}

Mat position_op(int mode, const HilbertSpec& spec) {
    const Mat d = annihilator(spec.trunc.at(mode - 1));
    const Mat x = cplx(0, 0.5) * (d - d.adjoint());
    return embed(x, mode, spec);
}

Mat momentum_op(int mode, const HilbertSpec& spec) {
    const Mat d = annihilator(spec.trunc.at(mode - 1));
    const Mat p = d.adjoint() + d;
    return embed(p, mode, spec);
}

Vec coherent_state(cplx beta, int N, bool allow_marginal) {
    if (N < 2) throw ValidationError("coherent_state: truncation must be >= 2");
    const double nbar = std::norm(beta);
    if (nbar > N / 4.0 && !allow_marginal)
        throw ValidationError("coherent_state: |beta|^2 = " + std::to_string(nbar) +
                              " exceeds N/4 = " + std::to_string(N / 4.0) +
                              "; raise the truncation or allow marginal states");
    Vec v(N);
    v(0) = std::exp(-nbar / 2.0);
    for (int n = 1; n < N; ++n) v(n) = v(n - 1) * beta / std::sqrt(static_cast<double>(n));
    v.normalize();
    return v;
}

Vec vacuum_state(int N) {
    Vec v = Vec::Zero(N);
    v(0) = 1;
    return v;
}

Vec fock_state(int n, int N) {
    if (n < 0 || n >= N) throw ValidationError("fock_state: level outside truncation");
    Vec v = Vec::Zero(N);
    v(n) = 1;
    return v;
}

Eigen::Vector2cd bloch_state(double theta, double phi) {
    Eigen::Vector2cd q;
    q << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
    return q;
}

Eigen::Vector2cd plus_state() {
    Eigen::Vector2cd q;
    q << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return q;
}

Eigen::Vector2cd ground_state() {
    Eigen::Vector2cd q;
    q << 0, 1;
    return q;
}

Vec product_state(const Eigen::Vector2cd& qubit, const std::vector<Vec>& modes,
                  const HilbertSpec& spec) {
    spec.validate();
    if (static_cast<int>(modes.size()) != spec.n_modes)
        throw ValidationError("product_state: expected " + std::to_string(spec.n_modes) + " mode states");
    for (int m = 0; m < spec.n_modes; ++m)
        if (modes[m].size() != spec.trunc[m])
            throw ValidationError("product_state: mode " + std::to_string(m + 1) + " state has wrong dimension");
    Vec cav = modes[0];
    for (int m = 1; m < spec.n_modes; ++m) {
        Vec next(cav.size() * modes[m].size());
        for (Eigen::Index i = 0; i < cav.size(); ++i)
            next.segment(i * modes[m].size(), modes[m].size()) = cav(i) * modes[m];
        cav = std::move(next);
    }
    Vec psi(spec.total_dim());
    psi.head(cav.size()) = qubit(0) * cav;
    psi.tail(cav.size()) = qubit(1) * cav;
    const double nrm = psi.norm();
    if (std::abs(nrm * nrm - 1.0) >= 1e-8)
        throw ValidationError("product_state: input factors are not normalized");
    return psi;
}

QubitReduced qubit_reduced(const Vec& state, const HilbertSpec& spec) {
    const int nc = spec.cavity_dim();
    if (state.size() != 2 * nc) throw ValidationError("qubit_reduced: state dimension mismatch");
    const auto a = state.head(nc);
    const auto b = state.tail(nc);
    QubitReduced out;
    out.rho(0, 0) = a.squaredNorm();
    out.rho(1, 1) = b.squaredNorm();
    out.rho(0, 1) = b.dot(a);   // sum_c psi_{0c} conj(psi_{1c})
    out.rho(1, 0) = std::conj(out.rho(0, 1));
    out.sx = 2.0 * out.rho(0, 1).real();
    out.sy = -2.0 * out.rho(0, 1).imag();
    out.sz = out.rho(0, 0).real() - out.rho(1, 1).real();
    out.purity = (out.rho * out.rho).trace().real();
    return out;
}

QubitReduced qubit_reduced_rho(const Mat& rho, const HilbertSpec& spec) {
    const int nc = spec.cavity_dim();
    if (rho.rows() != 2 * nc || rho.cols() != 2 * nc)
        throw ValidationError("qubit_reduced_rho: density matrix dimension mismatch");
    QubitReduced out;
    out.rho.setZero();
    for (int q = 0; q < 2; ++q)
        for (int p = 0; p < 2; ++p)
            out.rho(q, p) = rho.block(q * nc, p * nc, nc, nc).trace();
    out.sx = 2.0 * out.rho(0, 1).real();
    out.sy = -2.0 * out.rho(0, 1).imag();
    out.sz = out.rho(0, 0).real() - out.rho(1, 1).real();
    out.purity = (out.rho * out.rho).trace().real();
    return out;
}

cplx expectation(const Vec& state, const Mat& op) {
    if (op.rows() != state.size() || op.cols() != state.size())
        throw ValidationError("expectation: operator/state dimension mismatch");
    return state.dot(op * state);
}

double expectation_real(const Vec& state, const Mat& op) {
    const cplx v = expectation(state, op);
    if (std::abs(v.imag()) >= 1e-9)
        throw ValidationError("expectation_real: imaginary residue " + std::to_string(v.imag()) +
                              " on a supposedly Hermitian operator");
    return v.real();
}

cplx mode_expectation(const Vec& state, const Mat& op, int mode, const HilbertSpec& spec) {
    spec.validate();
    if (mode < 1 || mode > spec.n_modes) throw ValidationError("mode_expectation: mode index out of range");
    const int N = spec.trunc[mode - 1];
    if (op.rows() != N || op.cols() != N) throw ValidationError("mode_expectation: operator dimension mismatch");
    const int nc = spec.cavity_dim();
    if (state.size() != 2 * nc) throw ValidationError("mode_expectation: state dimension mismatch");

    // Contract op into the chosen mode's index of the (2, N1[, N2]) tensor.
    cplx acc = 0;
    if (spec.n_modes == 1) {
        for (int q = 0; q < 2; ++q) {
            const auto seg = state.segment(q * N, N);
            acc += seg.dot(op * seg);
        }
        return acc;
    }
    const int N1 = spec.trunc[0], N2 = spec.trunc[1];
    for (int q = 0; q < 2; ++q) {
        Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            block(state.data() + q * N1 * N2, N1, N2);
        if (mode == 1)
            acc += (block.conjugate().cwiseProduct(op * block)).sum();
        else
            acc += (block.conjugate().cwiseProduct(block * op.transpose())).sum();
    }
    return acc;
}

double top_fock_leak(const Vec& state, const HilbertSpec& spec) {
    const int nc = spec.cavity_dim();
    if (state.size() != 2 * nc) throw ValidationError("top_fock_leak: state dimension mismatch");
    double worst = 0;
    for (int m = 1; m <= spec.n_modes; ++m) {
        const int N = spec.trunc[m - 1];
        Mat proj = Mat::Zero(N, N);
        for (int n = std::max(1, N - 2); n < N; ++n) proj(n, n) = 1;
        worst = std::max(worst, mode_expectation(state, proj, m, spec).real());
    }
    return worst;
}

double top_fock_leak_rho(const Mat& rho, const HilbertSpec& spec) {
    double worst = 0;
    for (int m = 1; m <= spec.n_modes; ++m) {
        const int N = spec.trunc[m - 1];
        Mat proj = Mat::Zero(N, N);
        for (int n = std::max(1, N - 2); n < N; ++n) proj(n, n) = 1;
        const Mat p = embed(proj, m, spec);
        worst = std::max(worst, (rho * p).trace().real());
    }
    return worst;
}

void check_hermitian(const Mat& op, double tol, const std::string& what) {
    const double dev = (op - op.adjoint()).cwiseAbs().maxCoeff();
    if (dev >= tol)
        throw ValidationError(what + ": hermiticity deviation " + std::to_string(dev) +
                              " exceeds " + std::to_string(tol));
}

void dump_operator(std::ostream& os, const Mat& op) {
    for (Eigen::Index i = 0; i < op.rows(); ++i)
        for (Eigen::Index j = 0; j < op.cols(); ++j)
            os << i << ' ' << j << ' ' << op(i, j).real() << ' ' << op(i, j).imag() << '\n';
}

void dump_state(std::ostream& os, const Vec& state) {
    for (Eigen::Index i = 0; i < state.size(); ++i)
        os << i << " 0 " << state(i).real() << ' ' << state(i).imag() << '\n';
}

} // namespace diracsim
