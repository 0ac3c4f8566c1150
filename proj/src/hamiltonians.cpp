#include "diracsim/hamiltonians.hpp"

#include <cmath>
#include <string>

namespace diracsim {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Qubit ladder factor shared by every sideband-coupled term in the full tier:
// sigma_minus e^{-i Omega t} + sigma_plus e^{+i Omega t}.
Mat qubit_sideband_factor(double omega, double t) {
    Mat s = Mat::Zero(2, 2);
    s(1, 0) = std::polar(1.0, -omega * t);
    s(0, 1) = std::polar(1.0, omega * t);
    return s;
}

} // namespace

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::Free1D: return "free-1d";
        case Scenario::Free2D: return "free-2d";
        case Scenario::Magnetic1D: return "magnetic-1d";
        case Scenario::Magnetic2D: return "magnetic-2d";
        case Scenario::Electro1D: return "electro-1d";
    }
    return "?";
}

const char* to_string(Tier t) {
    switch (t) {
        case Tier::Ideal: return "ideal";
        case Tier::Full: return "full";
        case Tier::IdealPlusMagnus: return "ideal+magnus";
    }
    return "?";
}

ScenarioKind scenario_kind(Scenario s) {
    switch (s) {
        case Scenario::Free1D:
        case Scenario::Free2D: return ScenarioKind::Free;
        case Scenario::Magnetic1D:
        case Scenario::Magnetic2D: return ScenarioKind::Magnetic;
        case Scenario::Electro1D: return ScenarioKind::Electro;
    }
    return ScenarioKind::Free;
}

int scenario_modes(Scenario s) {
    return (s == Scenario::Free2D || s == Scenario::Magnetic2D) ? 2 : 1;
}

void ModelSpec::validate() const {
    space.validate();
    const int want = scenario_modes(scenario);
    if (space.n_modes != want)
        throw ValidationError(std::string("ModelSpec: scenario ") + to_string(scenario) + " needs " +
                              std::to_string(want) + " mode(s), space has " + std::to_string(space.n_modes));
    if (static_cast<int>(chi.size()) != space.n_modes)
        throw ValidationError("ModelSpec: expected " + std::to_string(space.n_modes) + " chi entries");
    if (static_cast<int>(drives.size()) != space.n_modes)
        throw ValidationError("ModelSpec: expected " + std::to_string(space.n_modes) + " drives");
    for (const auto& d : drives) d.validate();

    const ScenarioKind kind = scenario_kind(scenario);
    for (int j = 0; j < space.n_modes; ++j) {
        const auto& d = drives[j];
        if (kind == ScenarioKind::Free && (d.delta_alpha != 0 || d.gamma != 0))
            throw ValidationError("ModelSpec: free scenario requires delta_alpha = 0 and gamma = 0 on mode " +
                                  std::to_string(j + 1));
        if (kind == ScenarioKind::Magnetic && d.gamma != 0)
            throw ValidationError("ModelSpec: magnetic scenario requires gamma = 0 on mode " +
                                  std::to_string(j + 1));
        if (kind == ScenarioKind::Electro && d.delta_alpha != 0)
            throw ValidationError("ModelSpec: electrostatic scenario requires delta_alpha = 0");
    }
    if (tier == Tier::Full && space.n_modes == 2 && drives[0].omega_sb != drives[1].omega_sb)
        throw ValidationError("ModelSpec: full tier with two modes requires equal omega_sb "
                              "(shared qubit rotating frame)");
}

Mat ideal_hamiltonian(const ModelSpec& m) {
    m.validate();
    if (m.tier == Tier::Full)
        throw ValidationError("ideal_hamiltonian: model is configured for the full tier");
    const HilbertSpec& sp = m.space;
    Mat h = (m.delta_omega / 2) * embed(sigma_z(), kQubitSlot, sp);
    for (int j = 1; j <= sp.n_modes; ++j) {
        const auto& d = m.drives[j - 1];
        const double chi = m.chi[j - 1];
        h += (chi * d.alpha / 4) * momentum_op(j, sp) * pauli_delta(d.delta, sp);
        if (d.delta_alpha != 0) {
            const Mat ddag = annihilator(sp.trunc[j - 1]).adjoint();
            const Mat cross = embed(sigma_minus(), kQubitSlot, sp) * embed(ddag, j, sp) *
                              std::polar(1.0, d.delta);
            h += (chi * d.delta_alpha / 4) * (cross + cross.adjoint());
        }
        if (d.gamma != 0) {
            const Mat dj = annihilator(sp.trunc[j - 1]);
            h += d.gamma * embed(cplx(0, 1) * (dj.adjoint() - dj), j, sp);
        }
    }
    return h;
}

Mat full_hamiltonian(double t, const ModelSpec& m) {
    m.validate();
    if (m.tier != Tier::Full)
        throw ValidationError("full_hamiltonian: model is configured for an ideal tier");
    const HilbertSpec& sp = m.space;
    const double omega = m.drives[0].omega_sb;
    const Mat sideband = embed(qubit_sideband_factor(omega, t), kQubitSlot, sp);
    Mat h = (m.delta_omega / 2) * embed(sigma_z(), kQubitSlot, sp);
    for (int j = 1; j <= sp.n_modes; ++j) {
        const auto& d = m.drives[j - 1];
        const double chi = m.chi[j - 1];
        const int N = sp.trunc[j - 1];
        const double theta = omega * t + d.delta;
        const Mat dj = annihilator(N);
        const Mat I = Mat::Identity(N, N);
        Mat coeff = d.alpha * std::cos(theta) * (dj.adjoint() + dj);
        coeff += (d.alpha * d.alpha / 2 + d.alpha * d.delta_alpha / 2) * std::cos(2 * theta) * I;
        coeff += (d.delta_alpha / 2) *
                 (std::polar(1.0, theta) * dj.adjoint() + std::polar(1.0, -theta) * dj);
        coeff += dj.adjoint() * dj;
        h += (chi / 2) * embed(coeff, j, sp) * sideband;
        if (d.gamma != 0)
            h += d.gamma * embed(cplx(0, 1) * (dj.adjoint() - dj), j, sp);
    }
    return h;
}

Mat magnus_correction(const ModelSpec& m) {
    m.validate();
    const HilbertSpec& sp = m.space;
    Mat h = Mat::Zero(sp.total_dim(), sp.total_dim());
    const Mat sz = embed(sigma_z(), kQubitSlot, sp);
    for (int j = 1; j <= sp.n_modes; ++j) {
        const double chi = m.chi[j - 1];
        const double omega = m.drives[j - 1].omega_sb;
        const Mat n = number_operator(sp.trunc[j - 1]);
        h += (chi * chi / (4 * omega)) * embed(n * n, j, sp) * sz;
    }
    return h;
}

Mat lab_frame_h2(double t, const ModelSpec& m) {
    m.validate();
    if (m.space.n_modes != 1)
        throw ValidationError("lab_frame_h2: defined for a single mode");
    const HilbertSpec& sp = m.space;
    const auto& d = m.drives[0];
    const double chi = m.chi[0];
    const double detuning = resonant_rabi_condition(scenario_kind(m.scenario), chi, d);
    const double omega_r = d.omega_sb + m.delta_omega;

    const Mat a = annihilator(sp.trunc[0]);
    Mat h = (chi / 2) * embed(a.adjoint() * a, 1, sp) * embed(sigma_z(), kQubitSlot, sp);
    h += (detuning / 2) * embed(sigma_z(), kQubitSlot, sp);
    h += (omega_r / 2) * embed(sigma_x(), kQubitSlot, sp);
    const cplx eps = combined_eps(t, d);
    h += embed(eps * a.adjoint() + std::conj(eps) * a, 1, sp);
    return h;
}

Mat displaced_frame_h3(double t, const ModelSpec& m) {
    m.validate();
    if (m.space.n_modes != 1)
        throw ValidationError("displaced_frame_h3: defined for a single mode");
    const auto& d = m.drives[0];
    if (d.kappa != 0 || d.gamma != 0)
        throw ValidationError("displaced_frame_h3: damped or tilted drives are not supported");
    const HilbertSpec& sp = m.space;
    const double chi = m.chi[0];
    const double detuning = resonant_rabi_condition(scenario_kind(m.scenario), chi, d);
    const double omega_r = d.omega_sb + m.delta_omega;

    const int N = sp.trunc[0];
    const Mat a = annihilator(N);
    const cplx cd = classical_displacement(t, d);
    const Mat shifted = (a.adjoint() + std::conj(cd) * Mat::Identity(N, N)) *
                        (a + cd * Mat::Identity(N, N));
    Mat h = (chi / 2) * embed(shifted, 1, sp) * embed(sigma_z(), kQubitSlot, sp);
    h += (detuning / 2) * embed(sigma_z(), kQubitSlot, sp);
    h += (omega_r / 2) * embed(sigma_x(), kQubitSlot, sp);
    return h;
}

MappedConstants dirac_mapping(const ModelSpec& m) {
    m.validate();
    MappedConstants out;
    out.c_eff = m.chi[0] * m.drives[0].alpha / 4;
    if (out.c_eff <= 0)
        throw ValidationError("dirac_mapping: chi_1 alpha_1 must be positive for a runnable scenario");
    out.mc2 = m.delta_omega / 2;
    if (scenario_kind(m.scenario) == ScenarioKind::Magnetic) {
        const double denom = 2 * m.drives[0].alpha + m.drives[0].delta_alpha;
        if (std::abs(denom) < 1e-12)
            throw ValidationError("dirac_mapping: 2 alpha_1 + delta_alpha_1 = 0 makes eB singular");
        out.eB = 2 * m.drives[0].delta_alpha / denom;
    }
    if (scenario_kind(m.scenario) == ScenarioKind::Electro) out.g = -2 * m.drives[0].gamma;
    return out;
}

Mat displacement_operator(cplx beta, int N) {
    // beta a^dag - conj(beta) a is i times a Hermitian matrix; exponentiate
    // through its eigendecomposition.
    const Mat a = annihilator(N);
    const Mat k = cplx(0, -1) * (beta * a.adjoint() - std::conj(beta) * a);
    Eigen::SelfAdjointEigenSolver<Mat> es(k);
    if (es.info() != Eigen::Success)
        throw IntegrationError("displacement_operator: eigendecomposition failed");
    Vec phases(N);
    for (int i = 0; i < N; ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

StaticHamiltonian::StaticHamiltonian(Mat h) : h_(std::move(h)) {
    if (h_.rows() != h_.cols()) throw ValidationError("StaticHamiltonian: matrix must be square");
}

int StaticHamiltonian::dim() const { return static_cast<int>(h_.rows()); }

void StaticHamiltonian::apply(double, const Vec& psi, Vec& out) const { out.noalias() = h_ * psi; }

Mat StaticHamiltonian::matrix(double) const { return h_; }

CallbackHamiltonian::CallbackHamiltonian(std::function<Mat(double)> f, int dim)
    : f_(std::move(f)), dim_(dim) {}

int CallbackHamiltonian::dim() const { return dim_; }

void CallbackHamiltonian::apply(double t, const Vec& psi, Vec& out) const {
    out.noalias() = f_(t) * psi;
}

Mat CallbackHamiltonian::matrix(double t) const { return f_(t); }

ModelHamiltonian::ModelHamiltonian(const ModelSpec& m) : m_(m) {
    m_.validate();
    if (m_.tier != Tier::Full) {
        static_h_ = ideal_hamiltonian(m_);
        if (m_.tier == Tier::IdealPlusMagnus) static_h_ += magnus_correction(m_);
        return;
    }
    for (int j = 0; j < m_.space.n_modes; ++j) {
        const int N = m_.space.trunc[j];
        const Mat d = annihilator(N);
        pmat_.push_back(d.adjoint() + d);
        bmat_.push_back(cplx(0, 1) * (d.adjoint() - d));
        Eigen::VectorXd n(N);
        for (int k = 0; k < N; ++k) n(k) = k;
        nvec_.push_back(n);
        if (j == 0 && m_.drives[0].gamma != 0) {
            electro_b_ = m_.drives[0].gamma * bmat_.back();
            has_electro_ = true;
        }
    }
}

int ModelHamiltonian::dim() const { return m_.space.total_dim(); }

bool ModelHamiltonian::time_dependent() const { return m_.tier == Tier::Full; }

void ModelHamiltonian::cavity_coefficient(double t, int mode, Mat& out) const {
    const auto& d = m_.drives[mode];
    const double chi = m_.chi[mode];
    const double theta = d.omega_sb * t + d.delta;
    const double c1 = (d.alpha + d.delta_alpha / 2) * std::cos(theta);
    const double c2 = (d.delta_alpha / 2) * std::sin(theta);
    const double c3 = (d.alpha * d.alpha / 2 + d.alpha * d.delta_alpha / 2) * std::cos(2 * theta);
    out = c1 * pmat_[mode];
    if (c2 != 0) out += c2 * bmat_[mode];
    out.diagonal().array() += c3;
    out.diagonal() += nvec_[mode].cast<cplx>();
    out *= chi / 2;
}

void ModelHamiltonian::apply_cavity(const Mat& c1, const Mat* c2, const Eigen::Ref<const Vec>& x,
                                    Eigen::Ref<Vec> y) const {
    if (m_.space.n_modes == 1) {
        y.noalias() = c1 * x;
        return;
    }
    const int N1 = m_.space.trunc[0], N2 = m_.space.trunc[1];
    Eigen::Map<const RowMat> xm(x.data(), N1, N2);
    Eigen::Map<RowMat> ym(y.data(), N1, N2);
    ym.noalias() = c1 * xm;
    ym.noalias() += xm * c2->transpose();
}

void ModelHamiltonian::apply(double t, const Vec& psi, Vec& out) const {
    if (psi.size() != dim()) throw ValidationError("ModelHamiltonian: state dimension mismatch");
    out.resize(dim());
    if (m_.tier != Tier::Full) {
        out.noalias() = static_h_ * psi;
        return;
    }
    const int nc = m_.space.cavity_dim();
    const double omega = m_.drives[0].omega_sb;
    Mat c1, c2;
    cavity_coefficient(t, 0, c1);
    if (m_.space.n_modes == 2) cavity_coefficient(t, 1, c2);

    Vec upper(nc), lower(nc);
    apply_cavity(c1, m_.space.n_modes == 2 ? &c2 : nullptr, psi.head(nc), upper);
    apply_cavity(c1, m_.space.n_modes == 2 ? &c2 : nullptr, psi.tail(nc), lower);

    const cplx up = std::polar(1.0, omega * t);
    out.head(nc) = up * lower + (m_.delta_omega / 2) * psi.head(nc);
    out.tail(nc) = std::conj(up) * upper - (m_.delta_omega / 2) * psi.tail(nc);
    if (has_electro_) {
        out.head(nc).noalias() += electro_b_ * psi.head(nc);
        out.tail(nc).noalias() += electro_b_ * psi.tail(nc);
    }
}

Mat ModelHamiltonian::matrix(double t) const {
    return m_.tier == Tier::Full ? full_hamiltonian(t, m_) : static_h_;
}

std::unique_ptr<HamiltonianSource> make_source(const ModelSpec& m) {
    return std::make_unique<ModelHamiltonian>(m);
}

} // namespace diracsim
