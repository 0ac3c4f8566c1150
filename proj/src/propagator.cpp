#include "diracsim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "diracsim/errors.hpp"

namespace diracsim {

namespace {

const double kTwoPi = 6.28318530717958647692;

// Precomputed mode-local quadrature operators so per-sample recording stays
// a contraction instead of a full-dimension matrix product.
struct RecordPlan {
    const HilbertSpec* spec = nullptr;
    std::vector<Mat> xloc, ploc;

    explicit RecordPlan(const HilbertSpec* s) : spec(s) {
        if (!spec) return;
        spec->validate();
        for (int j = 0; j < spec->n_modes; ++j) {
            Mat d = annihilator(spec->trunc[j]);
            xloc.push_back(cplx(0, 0.5) * (d - d.adjoint()));
            ploc.push_back(d.adjoint() + d);
        }
    }

    void init(ObservableSeries& s, long n_records) const {
        s.n_modes = spec ? spec->n_modes : 0;
        s.t.reserve(n_records);
        s.norm.reserve(n_records);
        if (!spec) return;
        s.X.assign(s.n_modes, {});
        s.P.assign(s.n_modes, {});
        for (auto* col : {&s.sx, &s.sy, &s.sz, &s.purity, &s.leak}) col->reserve(n_records);
        for (int j = 0; j < s.n_modes; ++j) {
            s.X[j].reserve(n_records);
            s.P[j].reserve(n_records);
        }
    }

    void record(ObservableSeries& s, double t, const Vec& psi) const {
        s.t.push_back(t);
        s.norm.push_back(psi.norm());
        if (!spec) return;
        for (int j = 0; j < spec->n_modes; ++j) {
            s.X[j].push_back(mode_expectation(psi, xloc[j], j + 1, *spec).real());
            s.P[j].push_back(mode_expectation(psi, ploc[j], j + 1, *spec).real());
        }
        QubitReduced q = qubit_reduced(psi, *spec);
        s.sx.push_back(q.sx);
        s.sy.push_back(q.sy);
        s.sz.push_back(q.sz);
        s.purity.push_back(q.purity);
        s.leak.push_back(top_fock_leak(psi, *spec));
    }

    void record_rho(ObservableSeries& s, double t, const Mat& rho, const std::vector<Mat>& xemb,
                    const std::vector<Mat>& pemb) const {
        s.t.push_back(t);
        s.norm.push_back(rho.trace().real());
        if (!spec) return;
        for (int j = 0; j < spec->n_modes; ++j) {
            s.X[j].push_back((rho * xemb[j]).trace().real());
            s.P[j].push_back((rho * pemb[j]).trace().real());
        }
        QubitReduced q = qubit_reduced_rho(rho, *spec);
        s.sx.push_back(q.sx);
        s.sy.push_back(q.sy);
        s.sz.push_back(q.sz);
        s.purity.push_back(q.purity);
        s.leak.push_back(top_fock_leak_rho(rho, *spec));
    }
};

void check_leak_at(const ObservableSeries& s, const EvolveOptions& opts) {
    if (!opts.check_leak || s.leak.empty()) return;
    if (s.leak.back() > opts.leak_bound) {
        std::ostringstream msg;
        msg << "truncation leak " << s.leak.back() << " exceeds bound " << opts.leak_bound
            << " at t = " << s.t.back();
        throw IntegrationError(msg.str());
    }
}

EvolveResult evolve_unitary_impl(const HamiltonianSource& src, const HilbertSpec* spec,
                                 const Vec& psi0, const TimeGrid& grid,
                                 const EvolveOptions& opts) {
    grid.validate();
    if (psi0.size() != src.dim()) throw ValidationError("initial state dimension mismatch");
    if (spec && spec->total_dim() != src.dim())
        throw ValidationError("state space dimension mismatch");

    RecordPlan plan(spec);
    EvolveResult res;
    plan.init(res.series, grid.n_records());

    const long n = grid.n_steps();
    const double dt = grid.dt;
    Vec psi = psi0;
    Vec k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());

    for (long k = 0; k <= n; ++k) {
        if (k % grid.stride == 0) {
            plan.record(res.series, k * dt, psi);
            check_leak_at(res.series, opts);
        }
        if (k == n) break;

        const double t = k * dt;
        src.apply(t, psi, k1);
        tmp = psi - cplx(0, 0.5 * dt) * k1;
        src.apply(t + 0.5 * dt, tmp, k2);
        tmp = psi - cplx(0, 0.5 * dt) * k2;
        src.apply(t + 0.5 * dt, tmp, k3);
        tmp = psi - cplx(0, dt) * k3;
        src.apply(t + dt, tmp, k4);
        psi -= cplx(0, dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++res.steps;

        const double norm = psi.norm();
        const double drift = std::abs(norm - 1.0);
        res.max_step_drift = std::max(res.max_step_drift, drift);
        if (drift > opts.renorm_threshold) {
            psi /= norm;
            ++res.renorm_count;
            res.cumulative_drift += drift;
            if (res.cumulative_drift > opts.max_drift) {
                std::ostringstream msg;
                msg << "norm drift " << res.cumulative_drift << " exceeds " << opts.max_drift
                    << " after " << res.steps << " steps; reduce dt";
                throw IntegrationError(msg.str());
            }
        }
    }

    res.final_state = std::move(psi);
    return res;
}

EvolveResult evolve_eigen_impl(const Mat& h, const HilbertSpec* spec, const Vec& psi0,
                               const TimeGrid& grid, const EvolveOptions& opts) {
    grid.validate();
    if (psi0.size() != h.rows()) throw ValidationError("initial state dimension mismatch");
    if (spec && spec->total_dim() != h.rows())
        throw ValidationError("state space dimension mismatch");
    check_hermitian(h, 1e-12, "spectral evolution input");

    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) throw IntegrationError("eigendecomposition failed");
    const Eigen::VectorXd lam = es.eigenvalues();
    const Mat& v = es.eigenvectors();
    const Vec c = v.adjoint() * psi0;

    RecordPlan plan(spec);
    EvolveResult res;
    const std::vector<double> times = grid.record_times();
    const long n_rec = static_cast<long>(times.size());
    plan.init(res.series, n_rec);
    res.steps = n_rec - 1;

    const int dim = static_cast<int>(h.rows());
    const long chunk = 256;
    Mat modes(dim, std::min(chunk, n_rec));
    Vec psi(dim);
    for (long start = 0; start < n_rec; start += chunk) {
        const long m = std::min(chunk, n_rec - start);
        for (long j = 0; j < m; ++j) {
            const double t = times[start + j];
            for (int i = 0; i < dim; ++i) modes(i, j) = std::polar(1.0, -lam(i) * t) * c(i);
        }
        Mat block = v * modes.leftCols(m);
        for (long j = 0; j < m; ++j) {
            psi = block.col(j);
            plan.record(res.series, times[start + j], psi);
            check_leak_at(res.series, opts);
        }
        if (start + m == n_rec) res.final_state = std::move(psi);
    }
    return res;
}

} // namespace

void TimeGrid::validate() const {
    if (!(t1 > 0)) throw ValidationError("time grid span must be positive");
    if (!(dt > 0)) throw ValidationError("time grid step must be positive");
    if (stride < 1) throw ValidationError("record stride must be at least 1");
    const double steps = t1 / dt;
    const double rounded = std::round(steps);
    if (rounded < 1 || std::abs(steps - rounded) > 1e-6 * std::max(1.0, rounded))
        throw ValidationError("time span must be an integer number of steps");
    if (static_cast<long>(rounded) % stride != 0)
        throw ValidationError("record stride must divide the step count");
}

long TimeGrid::n_steps() const { return static_cast<long>(std::round(t1 / dt)); }

long TimeGrid::n_records() const { return n_steps() / stride + 1; }

std::vector<double> TimeGrid::record_times() const {
    validate();
    std::vector<double> out;
    const long n = n_records();
    out.reserve(n);
    for (long k = 0; k < n - 1; ++k) out.push_back(k * stride * dt);
    out.push_back(t1);
    return out;
}

void check_grid_resolves(const TimeGrid& grid, const ModelSpec& m) {
    grid.validate();
    if (m.tier != Tier::Full) return;
    for (const auto& d : m.drives) {
        if (grid.dt * d.omega_sb >= kTwoPi / 20) {
            std::ostringstream msg;
            msg << "step " << grid.dt << " resolves less than 20 points per sideband period "
                << kTwoPi / d.omega_sb;
            throw ValidationError(msg.str());
        }
    }
}

std::vector<std::string> ObservableSeries::column_names() const {
    std::vector<std::string> names = {"t_us"};
    for (int j = 0; j < n_modes; ++j) {
        names.push_back("X" + std::to_string(j + 1));
        names.push_back("P" + std::to_string(j + 1));
    }
    if (n_modes > 0)
        for (const char* s : {"sx", "sy", "sz", "purity"}) names.push_back(s);
    names.push_back("norm");
    if (n_modes > 0) names.push_back("leak");
    return names;
}

const std::vector<double>& ObservableSeries::column(const std::string& name) const {
    if (name == "t_us") return t;
    if (name == "sx") return sx;
    if (name == "sy") return sy;
    if (name == "sz") return sz;
    if (name == "purity") return purity;
    if (name == "norm") return norm;
    if (name == "leak") return leak;
    if (name.size() == 2 && (name[0] == 'X' || name[0] == 'P')) {
        const int j = name[1] - '1';
        if (j >= 0 && j < n_modes) return name[0] == 'X' ? X[j] : P[j];
    }
    throw AnalysisError("unknown trajectory column: " + name);
}

double ObservableSeries::record_dt() const {
    if (t.size() < 2) throw AnalysisError("series too short to define a sampling interval");
    const double dt0 = t[1] - t[0];
    for (std::size_t k = 1; k + 1 < t.size(); ++k)
        if (std::abs((t[k + 1] - t[k]) - dt0) > 1e-9 * std::max(1.0, dt0))
            throw AnalysisError("series is not uniformly sampled");
    return dt0;
}

EvolveResult evolve_unitary(const HamiltonianSource& src, const HilbertSpec& spec, const Vec& psi0,
                            const TimeGrid& grid, const EvolveOptions& opts) {
    return evolve_unitary_impl(src, &spec, psi0, grid, opts);
}

EvolveResult evolve_unitary(const HamiltonianSource& src, const Vec& psi0, const TimeGrid& grid,
                            const EvolveOptions& opts) {
    return evolve_unitary_impl(src, nullptr, psi0, grid, opts);
}

EvolveResult evolve_eigen(const Mat& h, const HilbertSpec& spec, const Vec& psi0,
                          const TimeGrid& grid, const EvolveOptions& opts) {
    return evolve_eigen_impl(h, &spec, psi0, grid, opts);
}

EvolveResult evolve_eigen(const Mat& h, const Vec& psi0, const TimeGrid& grid,
                          const EvolveOptions& opts) {
    return evolve_eigen_impl(h, nullptr, psi0, grid, opts);
}

EvolveResult evolve_lindblad(const Mat& h, const HilbertSpec& spec, const Mat& rho0,
                             const std::vector<Collapse>& collapse, const TimeGrid& grid,
                             const EvolveOptions& opts) {
    grid.validate();
    const int dim = static_cast<int>(h.rows());
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw ValidationError("density matrix dimension mismatch");
    if (spec.total_dim() != dim) throw ValidationError("state space dimension mismatch");
    check_hermitian(h, 1e-12, "dissipative evolution input");
    for (const auto& c : collapse) {
        if (c.op.rows() != dim || c.op.cols() != dim)
            throw ValidationError("collapse operator dimension mismatch");
        if (c.rate < 0) throw ValidationError("collapse rate must be nonnegative");
    }

    std::vector<Mat> ldl;
    for (const auto& c : collapse) ldl.push_back(c.op.adjoint() * c.op);

    auto deriv = [&](const Mat& rho, Mat& out) {
        out = cplx(0, -1) * (h * rho - rho * h);
        for (std::size_t j = 0; j < collapse.size(); ++j) {
            out += collapse[j].rate * (collapse[j].op * rho * collapse[j].op.adjoint() -
                                       0.5 * (ldl[j] * rho + rho * ldl[j]));
        }
    };

    RecordPlan plan(&spec);
    std::vector<Mat> xemb, pemb;
    for (int j = 0; j < spec.n_modes; ++j) {
        xemb.push_back(embed(plan.xloc[j], j + 1, spec));
        pemb.push_back(embed(plan.ploc[j], j + 1, spec));
    }

    EvolveResult res;
    plan.init(res.series, grid.n_records());

    const long n = grid.n_steps();
    const double dt = grid.dt;
    Mat rho = rho0;
    Mat k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);

    for (long k = 0; k <= n; ++k) {
        if (k % grid.stride == 0) {
            plan.record_rho(res.series, k * dt, rho, xemb, pemb);
            check_leak_at(res.series, opts);
            const double tr_drift = std::abs(res.series.norm.back() - 1.0);
            if (tr_drift > 1e-7) {
                std::ostringstream msg;
                msg << "density matrix trace drift " << tr_drift << " at t = " << k * dt;
                throw IntegrationError(msg.str());
            }
            Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
            if (es.eigenvalues().minCoeff() < -1e-7)
                throw IntegrationError("density matrix developed negative population");
        }
        if (k == n) break;

        deriv(rho, k1);
        tmp = rho + (0.5 * dt) * k1;
        deriv(tmp, k2);
        tmp = rho + (0.5 * dt) * k2;
        deriv(tmp, k3);
        tmp = rho + dt * k3;
        deriv(tmp, k4);
        rho += (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++res.steps;
    }

    res.final_rho = std::move(rho);
    return res;
}

} // namespace diracsim
