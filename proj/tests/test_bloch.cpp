#include <doctest.h>

#include <cmath>
#include <random>

#include <varbound/bloch.hpp>
#include <varbound/rng.hpp>
#include <varbound/su_generators.hpp>
#include <varbound/types.hpp>

using namespace varbound;

namespace {

const double kRoot3 = std::sqrt(3.0);

Vector unit8(int k) {
    Vector e = Vector::Zero(8);
    e[k] = 1.0;
    return e;
}

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = Complex(gauss(rng), gauss(rng));
    return 0.5 * (M + CMatrix(M.adjoint()));
}

Eigen::Vector4d random_quadruple(double R, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Vector4d q;
    do {
        for (int i = 0; i < 4; ++i) q[i] = gauss(rng);
    } while (q.norm() < 1e-12);
    return (R / q.norm()) * q;
}

// The reduced extremality system in the free-quadruple parametrization: eight
// polynomial relations plus the unit norm.
Eigen::Matrix<double, 9, 1> extremality_residuals(const Vector& r) {
    Eigen::Matrix<double, 9, 1> res;
    const double r1 = r[0], r2 = r[1], r3 = r[2], r4 = r[3], r5 = r[4], r6 = r[5],
                 r7 = r[6], r8 = r[7];
    res[0] = kRoot3 * (r4 * r6 + r5 * r7) + r1 * (2 * r8 - 1);
    res[1] = kRoot3 * (r5 * r6 - r4 * r7) + r2 * (2 * r8 - 1);
    res[2] = kRoot3 * (r4 * r4 + r5 * r5 - r6 * r6 - r7 * r7) + 2 * r3 * (2 * r8 - 1);
    res[3] = kRoot3 * (r1 * r6 - r2 * r7) + r4 * (kRoot3 * r3 - r8 - 1);
    res[4] = kRoot3 * (r2 * r6 + r1 * r7) + r5 * (kRoot3 * r3 - r8 - 1);
    res[5] = kRoot3 * (r1 * r4 + r2 * r5) - r6 * (kRoot3 * r3 + r8 + 1);
    res[6] = kRoot3 * (r2 * r4 - r1 * r5) + r7 * (kRoot3 * r3 + r8 + 1);
    res[7] = 2 * (r1 * r1 + r2 * r2 + r3 * r3) - (r4 * r4 + r5 * r5 + r6 * r6 + r7 * r7) -
             2 * r8 * (r8 + 1);
    res[8] = r.squaredNorm() - 1.0;
    return res;
}

}  // namespace

TEST_SUITE("bloch") {

TEST_CASE("decompose splits off the trace and recovers the coefficients") {
    const GeneratorSet& g = qutrit_generators();
    CMatrix A = CMatrix::Zero(3, 3);
    A(0, 0) = -1.0;
    A(2, 2) = 1.0;
    const CoherenceDecomposition dec = decompose(A, g);
    CHECK(dec.a0 == doctest::Approx(0.0).epsilon(1e-15));
    Vector expected = Vector::Zero(8);
    expected[2] = -0.5;
    expected[7] = -kRoot3 / 2;
    CHECK((dec.a - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("decompose rejects non-Hermitian input") {
    CMatrix M = CMatrix::Zero(3, 3);
    M(0, 1) = 1.0;  // no conjugate partner
    CHECK_THROWS_AS(decompose(M, qutrit_generators()), HermiticityError);
}

TEST_CASE("decompose / reconstruction round trip") {
    auto rng = make_rng(11, 0);
    for (int n : {2, 3, 4}) {
        CAPTURE(n);
        const GeneratorSet g = build_generators(n);
        for (int trial = 0; trial < 20; ++trial) {
            const CMatrix A = random_hermitian(n, rng);
            const CoherenceDecomposition dec = decompose(A, g);
            CMatrix back = dec.a0 * CMatrix::Identity(n, n);
            for (int k = 0; k < g.dim(); ++k) back += dec.a[k] * g.generators[k];
            CHECK((A - back).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("state_from_vector hits the expected pure state") {
    Vector r = Vector::Zero(8);
    r[2] = kRoot3 / 2;
    r[7] = 0.5;
    const CMatrix rho = state_from_vector(r, qutrit_generators());
    CMatrix expected = CMatrix::Zero(3, 3);
    expected(0, 0) = 1.0;
    CHECK((rho - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("state_from_vector / vector_from_state round trip") {
    auto rng = make_rng(11, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const GeneratorSet& g = qutrit_generators();
    for (int trial = 0; trial < 50; ++trial) {
        Vector r(8);
        for (int k = 0; k < 8; ++k) r[k] = 0.4 * gauss(rng);
        const Vector back = vector_from_state(state_from_vector(r, g), g);
        CHECK((r - back).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("star product basics") {
    const StarTensor& st = qutrit_star_tensor();
    CHECK((star(unit8(2), unit8(2), st) - unit8(7)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((star(unit8(7), unit8(7), st) + unit8(7)).cwiseAbs().maxCoeff() < 1e-13);

    auto rng = make_rng(11, 2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vector x(8), y(8);
        for (int k = 0; k < 8; ++k) {
            x[k] = gauss(rng);
            y[k] = gauss(rng);
        }
        // Commutativity and the norm identity |x*x| = |x|^2.
        CHECK((star(x, y, st) - star(y, x, st)).cwiseAbs().maxCoeff() < 1e-12);
        const double lhs = star(x, x, st).norm();
        const double rhs = x.squaredNorm();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("squared star norm identity across dimensions") {
    // |x*x|^2 = n(n-1)/(4(n-2)^2) [ Tr((x.G)^4) - (4/n) <x,x>^2 ].
    auto rng = make_rng(11, 3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int n : {3, 4, 5}) {
        CAPTURE(n);
        const GeneratorSet g = build_generators(n);
        const StarTensor st = build_star_tensor(g);
        for (int trial = 0; trial < 10; ++trial) {
            Vector x(g.dim());
            for (int k = 0; k < g.dim(); ++k) x[k] = gauss(rng);
            CMatrix xg = CMatrix::Zero(n, n);
            for (int k = 0; k < g.dim(); ++k) xg += x[k] * g.generators[k];
            const double tr4 = ((xg * xg) * (xg * xg)).trace().real();
            const double coeff = n * (n - 1.0) / (4.0 * (n - 2.0) * (n - 2.0));
            const double rhs = coeff * (tr4 - (4.0 / n) * std::pow(x.squaredNorm(), 2));
            const double lhs = star(x, x, st).squaredNorm();
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }
    }
}

TEST_CASE("the two qutrit membership predicates agree") {
    auto rng = make_rng(11, 4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.0, 1.2);
    int inside = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Vector r(8);
        for (int k = 0; k < 8; ++k) r[k] = gauss(rng);
        r *= radius(rng) / r.norm();
        const bool alg = is_density_qutrit(r);
        const bool trig = is_density_qutrit_trig(r);
        CHECK(alg == trig);
        inside += alg;
    }
    CHECK(inside > 0);
    CHECK(inside < 10000);
}

TEST_CASE("trigonometric spectrum matches a dense eigensolve") {
    auto rng = make_rng(11, 5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const GeneratorSet& g = qutrit_generators();
    int tested = 0;
    while (tested < 50) {
        Vector r(8);
        for (int k = 0; k < 8; ++k) r[k] = 0.5 * gauss(rng);
        if (!is_density_qutrit(r)) continue;
        ++tested;
        const Eigen::Vector3d closed = qutrit_spectrum_trig(r);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(state_from_vector(r, g));
        for (int i = 0; i < 3; ++i)
            CHECK(closed[i] == doctest::Approx(es.eigenvalues()[2 - i]).epsilon(1e-10));
    }
    const Eigen::Vector3d flat = qutrit_spectrum_trig(Vector::Zero(8));
    for (int i = 0; i < 3; ++i) CHECK(flat[i] == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("determinant and purity formulas of the parametrized matrix") {
    // For rho(r) = (1/3)(1 + sqrt(3) r.G), whether or not r is inside the state body:
    //   Tr rho^2 = (1 + 2|r|^2)/3,   det rho = (1 + 2<r,r*r> - 3<r,r>)/27.
    auto rng = make_rng(11, 6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const GeneratorSet& g = qutrit_generators();
    const StarTensor& st = qutrit_star_tensor();
    for (int trial = 0; trial < 30; ++trial) {
        Vector r(8);
        for (int k = 0; k < 8; ++k) r[k] = 0.6 * gauss(rng);
        const CMatrix rho = state_from_vector(r, g);
        const double tr2 = (rho * rho).trace().real();
        const double det = rho.determinant().real();
        CHECK(tr2 == doctest::Approx((1 + 2 * r.squaredNorm()) / 3.0).epsilon(1e-12));
        const double det_closed =
            (1 + 2 * r.dot(star(r, r, st)) - 3 * r.squaredNorm()) / 27.0;
        CHECK(det == doctest::Approx(det_closed).epsilon(1e-10));
    }
}

TEST_CASE("purity equivalence: r*r = r and unit norm iff rho is a projector") {
    const GeneratorSet& g = qutrit_generators();
    const StarTensor& st = qutrit_star_tensor();
    auto rng = make_rng(11, 7);

    std::uniform_real_distribution<double> radius(0.05, 0.85);
    for (int trial = 0; trial < 25; ++trial) {
        const double R = radius(rng);
        const int eps = (trial % 2 == 0) ? 1 : -1;
        const Vector r = lift_ext3(R, eps, random_quadruple(R, rng));
        CHECK(is_pure(r, st));
        const CMatrix rho = state_from_vector(r, g);
        CHECK((rho * rho - rho).cwiseAbs().maxCoeff() < 1e-10);
    }

    // Interior vector: neither side holds.
    Vector mixed = Vector::Zero(8);
    mixed[7] = 0.3;
    CHECK(!is_pure(mixed, st));
    const CMatrix rho_mixed = state_from_vector(mixed, g);
    CHECK((rho_mixed * rho_mixed - rho_mixed).cwiseAbs().maxCoeff() > 1e-3);

    // Unit norm alone is not enough: e1 * e1 = e8 != e1.
    const Vector e1 = unit8(0);
    CHECK(!is_pure(e1, st));
    const CMatrix rho_e1 = state_from_vector(e1, g);
    CHECK((rho_e1 * rho_e1 - rho_e1).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("lifted vectors satisfy the reduced extremality system") {
    auto rng = make_rng(11, 8);
    std::uniform_real_distribution<double> radius(0.02, 0.86);
    for (int trial = 0; trial < 40; ++trial) {
        const double R = radius(rng);
        const int eps = (trial % 2 == 0) ? 1 : -1;
        const Vector r = lift_ext3(R, eps, random_quadruple(R, rng));
        CHECK(extremality_residuals(r).cwiseAbs().maxCoeff() < 1e-10);
    }
    // Boundary radius, both branches coincide there.
    const Vector top = lift_ext3(kRoot3 / 2, 1, random_quadruple(kRoot3 / 2, rng));
    CHECK(extremality_residuals(top).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("classify inverts lift") {
    auto rng = make_rng(11, 9);
    std::uniform_real_distribution<double> radius(0.1, 0.8);
    for (int trial = 0; trial < 30; ++trial) {
        const double R = radius(rng);
        const int eps = (trial % 2 == 0) ? 1 : -1;
        const Eigen::Vector4d q = random_quadruple(R, rng);
        const ExtStratum s = classify_ext3(lift_ext3(R, eps, q));
        CHECK(s.tag == ExtTag::I3);
        CHECK(s.R == doctest::Approx(R).epsilon(1e-8));
        CHECK(s.epsilon == eps);
        CHECK((s.free - q).cwiseAbs().maxCoeff() < 1e-8);
    }

    Vector i1 = Vector::Zero(8);
    i1[7] = -1.0;
    CHECK(classify_ext3(i1).tag == ExtTag::I1);

    Vector i2 = Vector::Zero(8);
    i2[0] = kRoot3 / 2;
    i2[7] = 0.5;
    CHECK(classify_ext3(i2).tag == ExtTag::I2);

    Vector not_pure = Vector::Zero(8);
    not_pure[7] = 0.25;
    CHECK_THROWS_AS(classify_ext3(not_pure), std::invalid_argument);
}

TEST_CASE("lift reproduces the worked corner cases") {
    {
        // Top of the radius range with the free mass on r7.  3 - 4R^2 vanishes here,
        // so the square root in the lift turns rounding of R^2 into ~1e-8 noise.
        Eigen::Vector4d q(0.0, 0.0, 0.0, kRoot3 / 2);
        const Vector r = lift_ext3(kRoot3 / 2, 1, q);
        Vector expected = Vector::Zero(8);
        expected[2] = -kRoot3 / 4;
        expected[6] = kRoot3 / 2;
        expected[7] = -0.25;
        CHECK((r - expected).cwiseAbs().maxCoeff() < 1e-7);
    }
    {
        // R = 3 sqrt(5)/8 with the free mass on r4: the minimizer family of the
        // (G4, G6) bound at parameter zero.
        const double R = 3.0 * std::sqrt(5.0) / 8.0;
        Eigen::Vector4d q(R, 0.0, 0.0, 0.0);
        const Vector r = lift_ext3(R, 1, q);
        Vector expected = Vector::Zero(8);
        expected[2] = 5.0 * kRoot3 / 16.0;
        expected[3] = R;
        expected[7] = -1.0 / 16.0;
        CHECK((r - expected).cwiseAbs().maxCoeff() < 1e-12);
        const ExtStratum s = classify_ext3(r);
        CHECK(s.tag == ExtTag::I3);
        CHECK(s.R == doctest::Approx(R).epsilon(1e-12));
        CHECK(s.epsilon == 1);
    }
}

TEST_CASE("lift input validation") {
    CHECK_THROWS_AS(lift_ext3(1.2, 1, Eigen::Vector4d(1.2, 0, 0, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(lift_ext3(0.5, 0, Eigen::Vector4d(0.5, 0, 0, 0)),
                    std::invalid_argument);
    // Quadruple norm far from R.
    CHECK_THROWS_AS(lift_ext3(0.5, 1, Eigen::Vector4d(0.7, 0, 0, 0)),
                    std::invalid_argument);
}

}  // TEST_SUITE
