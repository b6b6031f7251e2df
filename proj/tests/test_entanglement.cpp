#include <doctest.h>

#include <cmath>
#include <random>

#include <varbound/entanglement.hpp>
#include <varbound/rng.hpp>
#include <varbound/types.hpp>
#include <varbound/variance_qp.hpp>

using namespace varbound;

namespace {

CMatrix pauli(int k) {
    CMatrix s = CMatrix::Zero(2, 2);
    switch (k) {
        case 1: s(0, 1) = s(1, 0) = 1.0; break;
        case 2: s(0, 1) = Complex(0, -1); s(1, 0) = Complex(0, 1); break;
        default: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
    }
    return s;
}

CVector bell_phi_plus() {
    CVector v = CVector::Zero(4);
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
    return v;
}

CVector bell_singlet() {
    CVector v = CVector::Zero(4);
    v[1] = 1.0 / std::sqrt(2.0);
    v[2] = -1.0 / std::sqrt(2.0);
    return v;
}

BipartiteState pure_22(const CVector& psi) {
    return {2, 2, psi * psi.adjoint()};
}

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = Complex(gauss(rng), gauss(rng));
    return 0.5 * (M + CMatrix(M.adjoint()));
}

}  // namespace

TEST_SUITE("entanglement") {

TEST_CASE("composite_observable assembles A x 1 + 1 x B") {
    const CMatrix M = composite_observable(pauli(3), pauli(3), 2, 2);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 2.0;
    expected(3, 3) = -2.0;
    CHECK((M - expected).cwiseAbs().maxCoeff() < 1e-15);

    const CMatrix only_b = composite_observable(CMatrix::Zero(2, 2), pauli(1), 2, 2);
    CMatrix ib = CMatrix::Zero(4, 4);
    ib(0, 1) = ib(1, 0) = ib(2, 3) = ib(3, 2) = 1.0;
    CHECK((only_b - ib).cwiseAbs().maxCoeff() < 1e-15);

    // The singlet is annihilated by every total-component observable.
    const CVector s = bell_singlet();
    for (int k = 1; k <= 3; ++k) {
        const CMatrix Mk = composite_observable(pauli(k), pauli(k), 2, 2);
        CHECK((Mk * s).norm() < 1e-14);
    }

    CHECK_THROWS_AS(composite_observable(pauli(1), CMatrix::Zero(3, 3), 2, 2),
                    std::invalid_argument);
}

TEST_CASE("state validation") {
    CHECK_NOTHROW(validate_bipartite_state(pure_22(bell_singlet())));

    BipartiteState wrong_size{2, 2, CMatrix::Identity(3, 3) / 3.0};
    CHECK_THROWS_AS(validate_bipartite_state(wrong_size), std::invalid_argument);

    BipartiteState bad_trace{2, 2, CMatrix::Identity(4, 4)};
    CHECK_THROWS_AS(validate_bipartite_state(bad_trace), std::invalid_argument);

    CMatrix indefinite = CMatrix::Identity(4, 4) / 2.0;
    indefinite(3, 3) = -0.5;
    CHECK_THROWS_AS(validate_bipartite_state(BipartiteState{2, 2, indefinite}),
                    std::invalid_argument);
}

TEST_CASE("partial transpose") {
    auto rng = make_rng(41, 0);

    // Product states transpose factor-wise and stay positive.
    CMatrix a = random_hermitian(2, rng);
    a = a * a.adjoint();
    a /= a.trace().real();
    CMatrix b = random_hermitian(2, rng);
    b = b * b.adjoint();
    b /= b.trace().real();
    const BipartiteState prod{2, 2, kron(a, b)};
    const CMatrix pt2 = partial_transpose(prod, Subsystem::second);
    CHECK((pt2 - kron(a, CMatrix(b.transpose()))).cwiseAbs().maxCoeff() < 1e-15);
    const CMatrix pt1 = partial_transpose(prod, Subsystem::first);
    CHECK((pt1 - kron(CMatrix(a.transpose()), b)).cwiseAbs().maxCoeff() < 1e-15);

    // The maximally entangled state maps to half the swap: eigenvalues 1/2 (x3), -1/2.
    const BipartiteState phi = pure_22(bell_phi_plus());
    const CMatrix ptphi = partial_transpose(phi, Subsystem::second);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(ptphi);
    CHECK(es.eigenvalues()[0] == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(es.eigenvalues()[3] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(ptphi.trace().real() == doctest::Approx(1.0).epsilon(1e-14));

    // The maximally mixed state is a fixed point, and transposing twice is the
    // identity, entry for entry.
    const BipartiteState mixed{2, 2, CMatrix::Identity(4, 4) / 4.0};
    CHECK((partial_transpose(mixed, Subsystem::second) - mixed.rho).cwiseAbs().maxCoeff() ==
          0.0);
    for (int trial = 0; trial < 5; ++trial) {
        BipartiteState s = random_separable_state(2, 3, rng);
        const BipartiteState once{2, 3, partial_transpose(s, Subsystem::second)};
        const CMatrix twice = partial_transpose(once, Subsystem::second);
        CHECK((twice - s.rho).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("local-variance criterion flags the Bell states") {
    SolverConfig cfg;
    cfg.seed = 2;

    const Verdict singlet = test_separability_violation(
        pure_22(bell_singlet()), {pauli(1), pauli(1)}, {pauli(3), pauli(3)}, cfg);
    CHECK(singlet.entangled);
    CHECK(singlet.bound == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(singlet.variance_sum == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(singlet.margin == doctest::Approx(2.0).epsilon(1e-9));

    // Phi+ has flipped correlations; the matching quadrature uses opposite signs on
    // the second side.
    const Verdict phi = test_separability_violation(
        pure_22(bell_phi_plus()), {pauli(1), CMatrix(-pauli(1))},
        {pauli(3), CMatrix(-pauli(3))}, cfg);
    CHECK(phi.entangled);
    CHECK(phi.margin == doctest::Approx(2.0).epsilon(1e-9));

    // The same test is inconclusive for the maximally mixed state...
    const Verdict mixed = test_separability_violation(
        BipartiteState{2, 2, CMatrix::Identity(4, 4) / 4.0}, {pauli(1), pauli(1)},
        {pauli(3), pauli(3)}, cfg);
    CHECK(!mixed.entangled);
    CHECK(mixed.variance_sum == doctest::Approx(4.0).epsilon(1e-12));

    // ...and for Phi+ probed with the mismatched signs.
    const Verdict blind = test_separability_violation(
        pure_22(bell_phi_plus()), {pauli(1), pauli(1)}, {pauli(3), pauli(3)}, cfg);
    CHECK(!blind.entangled);
}

TEST_CASE("PPT-variance criterion flags Phi+") {
    SolverConfig cfg;
    cfg.seed = 3;
    cfg.restarts = 16;

    const CVector s = bell_singlet();
    const CMatrix P = s * s.adjoint();
    const CMatrix Q = CMatrix::Identity(4, 4) - P;

    const Verdict v = test_ppt_variance(pure_22(bell_phi_plus()), P, Q, cfg);
    CHECK(v.entangled);
    // Both formal variances equal -3/4 on the transposed matrix, and the projector
    // pair commutes, so the bound is zero: margin 3/2.
    CHECK(v.variance_sum == doctest::Approx(-1.5).epsilon(1e-10));
    CHECK(v.bound == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(v.margin == doctest::Approx(1.5).epsilon(1e-8));

    const Verdict mixed =
        test_ppt_variance(BipartiteState{2, 2, CMatrix::Identity(4, 4) / 4.0}, P, Q, cfg);
    CHECK(!mixed.entangled);

    CHECK_THROWS_AS(
        test_ppt_variance(pure_22(bell_phi_plus()), pauli(1), pauli(3), cfg),
        std::invalid_argument);
}

TEST_CASE("random separable states are valid and PPT") {
    auto rng = make_rng(41, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const BipartiteState s = random_separable_state(2, 2, rng);
        CHECK_NOTHROW(validate_bipartite_state(s));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(partial_transpose(s, Subsystem::second),
                                                  Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
    }
    CHECK_THROWS_AS(random_separable_state(1, 2, rng), std::invalid_argument);
}

TEST_CASE("no false positives on a small separable scan") {
    auto rng = make_rng(41, 2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SolverConfig cfg;
    cfg.seed = 4;
    cfg.restarts = 8;

    const CVector s = bell_singlet();
    const CMatrix P = s * s.adjoint();
    const CMatrix Q0 = composite_observable(pauli(1), pauli(2), 2, 2);

    for (int trial = 0; trial < 25; ++trial) {
        const BipartiteState state = random_separable_state(2, 2, rng);

        auto rand_obs = [&] {
            Eigen::Vector3d v;
            for (int i = 0; i < 3; ++i) v[i] = gauss(rng);
            return CMatrix(v[0] * pauli(1) + v[1] * pauli(2) + v[2] * pauli(3));
        };
        const Verdict sum = test_separability_violation(
            state, {rand_obs(), rand_obs()}, {rand_obs(), rand_obs()}, cfg);
        CHECK(!sum.entangled);
        CHECK(sum.margin <= 1e-6);

        const Verdict ppt = test_ppt_variance(state, P, Q0, cfg);
        CHECK(!ppt.entangled);
        CHECK(ppt.margin <= 1e-6);
    }
}

TEST_CASE("verdicts are reproducible") {
    auto rng1 = make_rng(41, 3);
    auto rng2 = make_rng(41, 3);
    const BipartiteState s1 = random_separable_state(2, 2, rng1);
    const BipartiteState s2 = random_separable_state(2, 2, rng2);
    CHECK((s1.rho - s2.rho).cwiseAbs().maxCoeff() == 0.0);

    SolverConfig cfg;
    cfg.seed = 5;
    cfg.restarts = 8;
    const CMatrix A = composite_observable(pauli(1), pauli(1), 2, 2);
    const CMatrix B = composite_observable(pauli(3), pauli(3), 2, 2);
    const Verdict v1 = test_ppt_variance(s1, A, B, cfg);
    const Verdict v2 = test_ppt_variance(s2, A, B, cfg);
    CHECK(v1.variance_sum == v2.variance_sum);
    CHECK(v1.bound == v2.bound);
    CHECK(v1.margin == v2.margin);
}

}  // TEST_SUITE
