#include "varbound/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

#include "varbound/bloch.hpp"
#include "varbound/oracle.hpp"
#include "varbound/rng.hpp"
#include "varbound/su_generators.hpp"

namespace varbound {
namespace selftest {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Check make_check(std::string name, double expected, double computed, double tol,
                 double seconds = 0.0) {
    Check c;
    c.name = std::move(name);
    c.expected = expected;
    c.computed = computed;
    c.tol = tol;
    c.pass = std::isfinite(computed) && std::abs(computed - expected) <= tol;
    c.seconds = seconds;
    return c;
}

}  // namespace

bool Report::ok() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

double Report::total_seconds() const {
    double s = 0.0;
    for (const auto& c : checks) s += c.seconds;
    return s;
}

CMatrix ladder_diag() {
    CMatrix A = CMatrix::Zero(3, 3);
    A(0, 0) = -1.0;
    A(2, 2) = 1.0;
    return A;
}

CMatrix antisym_yz() {
    CMatrix B = CMatrix::Zero(3, 3);
    B(1, 2) = Complex(0.0, 1.0);
    B(2, 1) = Complex(0.0, -1.0);
    return B;
}

CMatrix offdiag_mix() {
    CMatrix B = CMatrix::Zero(3, 3);
    B(0, 1) = 1.0;
    B(1, 0) = 1.0;
    B(1, 2) = Complex(0.0, 1.0);
    B(2, 1) = Complex(0.0, -1.0);
    return B;
}

CMatrix shifted_ladder(double t) {
    CMatrix A = ladder_diag();
    A(0, 2) = t;
    A(2, 0) = t;
    return A;
}

CMatrix dense_a() {
    CMatrix A(3, 3);
    A << 1.0, 0.0, 1.0,                            //
        0.0, -1.0, Complex(0.0, -1.0),             //
        1.0, Complex(0.0, 1.0), 0.0;
    return A;
}

CMatrix dense_b() {
    CMatrix B(3, 3);
    B << 0.0, 1.0, Complex(0.0, -1.0),             //
        1.0, 0.0, 1.0,                             //
        Complex(0.0, 1.0), 1.0, 0.0;
    return B;
}

CMatrix spin1_x() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix L = CMatrix::Zero(3, 3);
    L(0, 1) = L(1, 0) = L(1, 2) = L(2, 1) = s;
    return L;
}

CMatrix spin1_y() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix L = CMatrix::Zero(3, 3);
    L(0, 1) = L(1, 2) = Complex(0.0, -s);
    L(1, 0) = L(2, 1) = Complex(0.0, s);
    return L;
}

CMatrix spin1_z() {
    CMatrix L = CMatrix::Zero(3, 3);
    L(0, 0) = 1.0;
    L(2, 2) = -1.0;
    return L;
}

Report qubit_suite(std::uint64_t seed, int count) {
    Report rep;
    rep.suite = "qubit";
    const GeneratorSet gens = build_generators(2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    char name[64];
    for (int i = 0; i < count; ++i) {
        auto rng = make_rng(seed, 40000 + static_cast<std::uint64_t>(i));
        Vector a(3), b(3);
        for (int k = 0; k < 3; ++k) a[k] = gauss(rng);
        for (int k = 0; k < 3; ++k) b[k] = gauss(rng);
        CMatrix A = CMatrix::Zero(2, 2);
        CMatrix B = CMatrix::Zero(2, 2);
        for (int k = 0; k < 3; ++k) {
            A += a[k] * gens.generators[k];
            B += b[k] * gens.generators[k];
        }
        auto t0 = Clock::now();
        const BoundResult res = solve_general({A, B});
        const double solve_s = seconds_since(t0);

        // Closed form recomputed from the raw coefficient vectors, independently of
        // the solver's internal decomposition.
        const Matrix O = a * a.transpose() + b * b.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> es(O);
        const double closed = O.trace() - es.eigenvalues().maxCoeff();
        std::snprintf(name, sizeof(name), "pair-%03d/closed-form", i);
        rep.checks.push_back(make_check(name, closed, res.m, 1e-12, solve_s));

        t0 = Clock::now();
        const OracleResult orc =
            oracle_min({A, B}, 16, substream_seed(seed, 41000 + static_cast<std::uint64_t>(i)));
        std::snprintf(name, sizeof(name), "pair-%03d/oracle", i);
        rep.checks.push_back(make_check(name, orc.value, res.m, 1e-8, seconds_since(t0)));
    }
    return rep;
}

Report qutrit_suite(const SolverConfig& cfg) {
    Report rep;
    rep.suite = "qutrit";
    {
        auto t0 = Clock::now();
        const BoundResult res = solve_general({ladder_diag(), antisym_yz()}, cfg);
        const double s = seconds_since(t0);
        rep.checks.push_back(make_check("ladder+antisym/m", 0.0, res.m, 1e-4, s));
        rep.checks.push_back(make_check("ladder+antisym/ell", -2.0, res.ell, 1e-4));
        CMatrix target = CMatrix::Zero(3, 3);
        target(0, 0) = 1.0;
        const double dev = (res.rho_min - target).cwiseAbs().maxCoeff();
        rep.checks.push_back(make_check("ladder+antisym/rho-min-dev", 0.0, dev, 1e-4));
    }
    {
        const auto& G = qutrit_generators().generators;
        auto t0 = Clock::now();
        const BoundResult res = solve_general({G[3], G[5]}, cfg);
        const double s = seconds_since(t0);
        rep.checks.push_back(make_check("g4+g6/m", 7.0 / 16.0, res.m, 1e-4, s));
        rep.checks.push_back(make_check("g4+g6/ell", -43.0 / 32.0, res.ell, 1e-4));
    }
    {
        auto t0 = Clock::now();
        const BoundResult res = solve_general({spin1_x(), spin1_y(), spin1_z()}, cfg);
        rep.checks.push_back(make_check("spin1/m", 1.0, res.m, 1e-4, seconds_since(t0)));
    }
    {
        auto t0 = Clock::now();
        const BoundResult res = solve_general({ladder_diag(), offdiag_mix()}, cfg);
        const double s = seconds_since(t0);
        rep.checks.push_back(make_check("ladder+mix/m", 15.0 / 32.0, res.m, 1e-3, s));
        rep.checks.push_back(make_check("ladder+mix/ell", -147.0 / 64.0, res.ell, 1e-3));
    }
    {
        auto t0 = Clock::now();
        const BoundResult res = solve_general({dense_a(), dense_b()}, cfg);
        const double s = seconds_since(t0);
        rep.checks.push_back(make_check("dense/m", kDenseMin, res.m, 1e-3, s));
        rep.checks.push_back(
            make_check("dense/attained", res.m, res.diag.direct_variance_sum, 1e-4));
    }
    return rep;
}

Report table_suite(const SolverConfig& cfg) {
    Report rep;
    rep.suite = "table";
    auto t0 = Clock::now();
    const Matrix tab = pairwise_gellmann_table(cfg);
    const double per_pair = seconds_since(t0) / 28.0;
    // 1-based index pairs whose bound is 7/16; the remaining 16 pairs give 0.
    static const std::pair<int, int> kNonzero[12] = {{1, 4}, {1, 5}, {1, 6}, {1, 7},
                                                     {2, 4}, {2, 5}, {2, 6}, {2, 7},
                                                     {4, 6}, {4, 7}, {5, 6}, {5, 7}};
    char name[32];
    for (int i = 1; i <= 8; ++i) {
        for (int j = i + 1; j <= 8; ++j) {
            double expected = 0.0;
            for (const auto& p : kNonzero)
                if (p.first == i && p.second == j) expected = 7.0 / 16.0;
            std::snprintf(name, sizeof(name), "m(%d,%d)", i, j);
            rep.checks.push_back(
                make_check(name, expected, tab(i - 1, j - 1), 1e-4, per_pair));
        }
    }
    return rep;
}

Report ht_suite(const SolverConfig& cfg) {
    Report rep;
    rep.suite = "ht";
    const CMatrix B = offdiag_mix();
    char name[32];
    for (int i = 0; i < 21; ++i) {
        const double t = -2.0 + 0.2 * i;
        auto t0 = Clock::now();
        const BoundResult res = solve_general({shifted_ladder(t), B}, cfg);
        std::snprintf(name, sizeof(name), "t=%+.1f", t);
        rep.checks.push_back(
            make_check(name, reference_ht(t), res.m, 2e-3, seconds_since(t0)));
    }
    return rep;
}

std::vector<Report> all_suites(const SolverConfig& cfg, std::uint64_t seed) {
    std::vector<Report> out;
    out.push_back(qubit_suite(seed));
    out.push_back(qutrit_suite(cfg));
    out.push_back(table_suite(cfg));
    out.push_back(ht_suite(cfg));
    return out;
}

}  // namespace selftest
}  // namespace varbound
