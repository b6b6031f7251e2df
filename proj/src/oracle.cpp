#include "varbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varbound/rng.hpp"

namespace varbound {

namespace {

// Variance sum and gradient share these per-call precomputations.
struct Problem {
    std::vector<CMatrix> A;   // symmetrized observables
    std::vector<CMatrix> A2;  // squares
    int n = 0;
};

Problem make_problem(const std::vector<CMatrix>& observables) {
    if (observables.empty()) throw std::invalid_argument("oracle: no observables given");
    Problem p;
    p.n = static_cast<int>(observables.front().rows());
    for (const auto& M : observables) {
        if (M.rows() != p.n || M.cols() != p.n)
            throw std::invalid_argument("oracle: observables must share one dimension");
        p.A.push_back(require_hermitian(M, 1e-10, "oracle"));
        p.A2.push_back(p.A.back() * p.A.back());
    }
    return p;
}

double objective(const Problem& p, const CVector& psi) {
    double total = 0.0;
    for (std::size_t mu = 0; mu < p.A.size(); ++mu) {
        const CVector Apsi = p.A[mu] * psi;
        const double mean = psi.dot(Apsi).real();
        total += (Apsi - mean * psi).squaredNorm();
    }
    return total;
}

// Unprojected Euclidean gradient 2 sum (A^2 - 2<A>A) psi + radial part.
CVector raw_gradient(const Problem& p, const CVector& psi) {
    CVector g = CVector::Zero(p.n);
    for (std::size_t mu = 0; mu < p.A.size(); ++mu) {
        const CVector Apsi = p.A[mu] * psi;
        const double mean = psi.dot(Apsi).real();
        g += 2.0 * (p.A2[mu] * psi - 2.0 * mean * Apsi + mean * mean * psi);
    }
    return g;
}

CVector project_tangent(const CVector& g, const CVector& psi) {
    return g - psi.dot(g).real() * psi;
}

struct RunResult {
    double value;
    CVector psi;
    bool grad_converged;
};

RunResult descend(const Problem& p, CVector psi) {
    psi.normalize();
    double f = objective(p, psi);
    bool grad_ok = false;
    double step = 0.5;
    for (int iter = 0; iter < 5000; ++iter) {
        const CVector gt = project_tangent(raw_gradient(p, psi), psi);
        const double gnorm = gt.norm();
        if (gnorm < 1e-10) {
            grad_ok = true;
            break;
        }
        // Sufficient-decrease (Armijo) acceptance.  Accepting any improvement is not
        // enough: on a degenerate valley the first backtracked step can land almost
        // exactly on the mirror point across the valley, "improving" by O(eps) and
        // blocking the halved step that would actually close the gap.
        const double gsq = gnorm * gnorm;
        step = std::min(0.5, 2.0 * step);
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            CVector trial = (psi - step * gt).normalized();
            double ft = objective(p, trial);
            if (ft < f - std::max(1e-18, 1e-4 * step * gsq)) {
                // A sufficient step can still be a near-reflection (step close to
                // 2/curvature); prefer the halved step from the same point while
                // it does strictly better, so the iterate drops to the valley
                // floor instead of hopping across it.
                while (step > 1e-16) {
                    const CVector half = (psi - 0.5 * step * gt).normalized();
                    const double fh = objective(p, half);
                    if (fh >= ft) break;
                    step *= 0.5;
                    trial = half;
                    ft = fh;
                }
                psi = trial;
                f = ft;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            // Out of representable decrease.  The value error is then of order
            // |g|^2 / curvature ~ machine epsilon, so a small-but-nonzero gradient
            // still counts as stationary for the convergence flag.
            grad_ok = gnorm < 1e-6;
            break;
        }
    }
    return {f, psi, grad_ok};
}

}  // namespace

double variance_pure(const CMatrix& A, const CVector& psi) {
    const CMatrix H = require_hermitian(A, 1e-10, "variance_pure");
    if (psi.size() != H.rows())
        throw std::invalid_argument("variance_pure: dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("variance_pure: psi must be normalized");
    const CVector Apsi = H * psi;
    const double mean = psi.dot(Apsi).real();
    return (Apsi - mean * psi).squaredNorm();
}

CVector variance_sum_gradient(const std::vector<CMatrix>& observables, const CVector& psi) {
    const Problem p = make_problem(observables);
    if (psi.size() != p.n)
        throw std::invalid_argument("variance_sum_gradient: dimension mismatch");
    return project_tangent(raw_gradient(p, psi), psi);
}

OracleResult oracle_min(const std::vector<CMatrix>& observables, int restarts,
                        std::uint64_t seed) {
    const Problem p = make_problem(observables);
    if (restarts < 1) restarts = 1;

    std::vector<double> values;
    OracleResult out;
    out.value = std::numeric_limits<double>::infinity();
    bool any_grad_ok = false;

    for (int run = 0; run < restarts; ++run) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(run));
        std::normal_distribution<double> gauss(0.0, 1.0);
        CVector init(p.n);
        for (int i = 0; i < p.n; ++i) init[i] = Complex(gauss(rng), gauss(rng));

        const RunResult r = descend(p, init);
        values.push_back(r.value);
        any_grad_ok = any_grad_ok || r.grad_converged;
        if (r.value < out.value) {
            out.value = r.value;
            out.psi = r.psi;
        }
    }

    out.restarts_used = restarts;
    std::sort(values.begin(), values.end());
    const bool agree = values.size() < 2 || (values[1] - values[0]) <= 1e-8;
    out.converged = any_grad_ok && agree;
    return out;
}

}  // namespace varbound
