#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "diracsim/fockspace.hpp"

using namespace diracsim;

namespace {
const double kPi = 3.14159265358979323846;

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
}

TEST_CASE("annihilator matrix elements follow the sqrt rule") {
    Mat a2 = annihilator(2);
    CHECK(a2(0, 1).real() == doctest::Approx(1.0));
    CHECK(std::abs(a2(0, 0)) == 0.0);
    CHECK(std::abs(a2(1, 0)) == 0.0);
    CHECK(std::abs(a2(1, 1)) == 0.0);

    Mat a3 = annihilator(3);
    CHECK(a3(0, 1).real() == doctest::Approx(1.0));
    CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));

    Mat a4 = annihilator(4);
    Mat n = a4.adjoint() * a4;
    for (int m = 0; m < 4; ++m) CHECK(n(m, m).real() == doctest::Approx(m));
    CHECK(max_abs(n - number_operator(4)) < 1e-14);
}

TEST_CASE("annihilator rejects truncation below 2") {
    CHECK_THROWS_AS(annihilator(1), ValidationError);
    CHECK_THROWS_AS(annihilator(0), ValidationError);
}

TEST_CASE("canonical commutator holds away from the truncation edge") {
    const int N = 12;
    Mat a = annihilator(N);
    Mat comm = a * a.adjoint() - a.adjoint() * a;
    for (int i = 0; i < N - 1; ++i)
        for (int j = 0; j < N - 1; ++j)
            CHECK(std::abs(comm(i, j) - (i == j ? cplx(1) : cplx(0))) < 1e-13);

    HilbertSpec spec(1, {N});
    Mat X = position_op(1, spec), P = momentum_op(1, spec);
    Mat xp = X * P - P * X;
    for (int i = 0; i < 2 * N; ++i) {
        if ((i % N) >= N - 1) continue;
        for (int j = 0; j < 2 * N; ++j) {
            if ((j % N) >= N - 1) continue;
            CHECK(std::abs(xp(i, j) - (i == j ? cplx(0, 1) : cplx(0))) < 1e-13);
        }
    }
}

TEST_CASE("embed places operators qubit-major") {
    HilbertSpec spec(1, {2});
    Mat sz = embed(sigma_z(), kQubitSlot, spec);
    CHECK(sz.rows() == 4);
    CHECK(sz(0, 0).real() == doctest::Approx(1));
    CHECK(sz(1, 1).real() == doctest::Approx(1));
    CHECK(sz(2, 2).real() == doctest::Approx(-1));
    CHECK(sz(3, 3).real() == doctest::Approx(-1));

    Mat id = embed(Mat::Identity(2, 2), 1, spec);
    CHECK(max_abs(id - Mat::Identity(4, 4)) == 0.0);
}

TEST_CASE("operators on distinct slots commute") {
    HilbertSpec spec(2, {4, 3});
    Mat d1 = embed(annihilator(4), 1, spec);
    Mat d2dag = embed(annihilator(3).adjoint(), 2, spec);
    CHECK(max_abs(d1 * d2dag - d2dag * d1) < 1e-14);
}

TEST_CASE("embed rejects dimension mismatch and bad slots") {
    HilbertSpec spec(1, {5});
    CHECK_THROWS_AS(embed(annihilator(4), 1, spec), ValidationError);
    CHECK_THROWS_AS(embed(annihilator(4), 2, spec), ValidationError);
}

TEST_CASE("embed preserves hermiticity and spectral norm") {
    HilbertSpec spec(2, {5, 4});
    Mat op = momentum_op(1, spec);
    check_hermitian(op, 1e-12, "embedded P");
    Mat p_small = annihilator(5).adjoint() + annihilator(5);
    Eigen::SelfAdjointEigenSolver<Mat> small(p_small), big(op);
    CHECK(small.eigenvalues().cwiseAbs().maxCoeff() ==
          doctest::Approx(big.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-12));
}

TEST_CASE("pauli_delta interpolates between sigma_x and sigma_y") {
    HilbertSpec spec(1, {2});
    CHECK(max_abs(pauli_delta(0, spec) - embed(sigma_x(), 0, spec)) < 1e-15);
    CHECK(max_abs(pauli_delta(kPi / 2, spec) - embed(sigma_y(), 0, spec)) < 1e-15);
    Mat sq = pauli_delta(0.7, spec) * pauli_delta(0.7, spec);
    CHECK(max_abs(sq - Mat::Identity(4, 4)) < 1e-15);
}

TEST_CASE("vacuum quadrature moments vanish") {
    HilbertSpec spec(1, {8});
    Vec psi = product_state(plus_state(), {vacuum_state(8)}, spec);
    CHECK(std::abs(expectation(psi, position_op(1, spec))) < 1e-15);
    CHECK(std::abs(expectation(psi, momentum_op(1, spec))) < 1e-15);
}

TEST_CASE("coherent state quadrature sign convention") {
    const int N = 20;
    HilbertSpec spec(1, {N});
    Vec psi = product_state(plus_state(), {coherent_state(0.5, N)}, spec);
    CHECK(expectation_real(psi, momentum_op(1, spec)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(expectation(psi, position_op(1, spec))) < 1e-9);

    Vec psi_i = product_state(plus_state(), {coherent_state(cplx(0, 0.5), N)}, spec);
    CHECK(expectation_real(psi_i, position_op(1, spec)) == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("coherent state amplitudes, norm, and photon number") {
    Vec v = coherent_state(0, 6);
    CHECK(std::abs(v(0) - cplx(1)) < 1e-15);
    CHECK(v.tail(5).norm() < 1e-15);

    const int N = 20;
    Vec c = coherent_state(0.5, N);
    CHECK(std::abs(c.norm() - 1.0) < 1e-12);
    Mat n = number_operator(N);
    cplx nbar = c.dot(n * c);
    CHECK(nbar.real() == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("coherent state truncation guard") {
    CHECK_THROWS_AS(coherent_state(2.0, 10), ValidationError);
    Vec v = coherent_state(2.0, 10, true);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
}

TEST_CASE("qubit reduction of product and entangled states") {
    HilbertSpec spec(1, {4});
    Vec prod = product_state(plus_state(), {vacuum_state(4)}, spec);
    auto r = qubit_reduced(prod, spec);
    CHECK(r.purity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.sx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.sy) < 1e-12);
    CHECK(std::abs(r.sz) < 1e-12);

    // Bell-like state (|0>|0_c> + |1>|1_c>)/sqrt(2) has a maximally mixed qubit.
    Vec bell = Vec::Zero(8);
    bell(0) = 1.0 / std::sqrt(2.0);
    bell(5) = 1.0 / std::sqrt(2.0);
    auto rb = qubit_reduced(bell, spec);
    CHECK(rb.purity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(rb.sx) < 1e-12);
    CHECK(std::abs(rb.sy) < 1e-12);
    CHECK(std::abs(rb.sz) < 1e-12);
}

TEST_CASE("bloch vector is consistent and bounded") {
    HilbertSpec spec(1, {3});
    for (double theta : {0.3, 1.1, 2.7}) {
        for (double phi : {0.0, 0.9, 4.0}) {
            Vec psi = product_state(bloch_state(theta, phi), {vacuum_state(3)}, spec);
            auto r = qubit_reduced(psi, spec);
            CHECK(r.sx == doctest::Approx(std::sin(theta) * std::cos(phi)).epsilon(1e-12));
            CHECK(r.sy == doctest::Approx(std::sin(theta) * std::sin(phi)).epsilon(1e-12));
            CHECK(r.sz == doctest::Approx(std::cos(theta)).epsilon(1e-12));
            CHECK(r.sx * r.sx + r.sy * r.sy + r.sz * r.sz <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("expectation values match closed forms") {
    HilbertSpec spec(1, {16});
    Vec plus = product_state(plus_state(), {vacuum_state(16)}, spec);
    CHECK(expectation_real(plus, embed(sigma_x(), 0, spec)) == doctest::Approx(1.0));

    Vec vac = product_state(bloch_state(0, 0), {vacuum_state(16)}, spec);
    Mat n = embed(number_operator(16), 1, spec);
    CHECK(std::abs(expectation(vac, n)) < 1e-15);

    Vec coh = product_state(plus_state(), {coherent_state(cplx(0.4, -0.3), 16)}, spec);
    CHECK(expectation_real(coh, n) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("expectation rejects shape mismatch and imaginary residue") {
    HilbertSpec spec(1, {4});
    Vec psi = product_state(plus_state(), {vacuum_state(4)}, spec);
    CHECK_THROWS_AS(expectation(psi, Mat::Identity(6, 6)), ValidationError);
    Mat d = embed(annihilator(4), 1, spec);
    Vec coh = product_state(plus_state(), {coherent_state(cplx(0, 0.5), 4, true)}, spec);
    CHECK_THROWS_AS(expectation_real(coh, d), ValidationError);
}

TEST_CASE("mode expectation agrees with embedded operators on two modes") {
    HilbertSpec spec(2, {5, 4});
    Vec psi = product_state(bloch_state(1.0, 0.3),
                            {coherent_state(0.6, 5), coherent_state(cplx(0.2, 0.4), 4)}, spec);
    for (int mode : {1, 2}) {
        const int N = spec.trunc[mode - 1];
        Mat d = annihilator(N);
        Mat x = cplx(0, 0.5) * (d - d.adjoint());
        cplx via_embed = expectation(psi, position_op(mode, spec));
        cplx via_contract = mode_expectation(psi, x, mode, spec);
        CHECK(std::abs(via_embed - via_contract) < 1e-12);
    }
}

TEST_CASE("top Fock leak tracks boundary population") {
    HilbertSpec spec(1, {6});
    Vec psi = product_state(plus_state(), {vacuum_state(6)}, spec);
    CHECK(top_fock_leak(psi, spec) < 1e-15);

    Vec edge = product_state(plus_state(), {fock_state(5, 6)}, spec);
    CHECK(top_fock_leak(edge, spec) == doctest::Approx(1.0));

    HilbertSpec two(2, {4, 4});
    Vec mixed = product_state(plus_state(), {vacuum_state(4), fock_state(2, 4)}, two);
    CHECK(top_fock_leak(mixed, two) == doctest::Approx(1.0));
}

TEST_CASE("operator construction is deterministic") {
    HilbertSpec spec(2, {6, 5});
    Mat a = pauli_delta(0.37, spec), b = pauli_delta(0.37, spec);
    CHECK(max_abs(a - b) == 0.0);
    Mat x1 = position_op(2, spec), x2 = position_op(2, spec);
    CHECK(max_abs(x1 - x2) == 0.0);
}

TEST_CASE("state and operator dumps use row col re im lines") {
    std::ostringstream os;
    dump_operator(os, sigma_y());
    CHECK(os.str() == "0 0 0 0\n0 1 0 -1\n1 0 0 1\n1 1 0 0\n");

    std::ostringstream ss;
    dump_state(ss, vacuum_state(2));
    CHECK(ss.str() == "0 0 1 0\n1 0 0 0\n");
}

TEST_CASE("hilbert spec validation") {
    CHECK_THROWS_AS(HilbertSpec(3, {2, 2, 2}).validate(), ValidationError);
    CHECK_THROWS_AS(HilbertSpec(1, {1}).validate(), ValidationError);
    CHECK_THROWS_AS(HilbertSpec(2, {4}).validate(), ValidationError);
    HilbertSpec ok(2, {3, 4});
    CHECK(ok.total_dim() == 24);
}
