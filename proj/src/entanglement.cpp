#include "varbound/entanglement.hpp"

#include <cmath>

namespace varbound {

namespace {

constexpr double kMargin = 1e-6;

Verdict make_verdict(double variance_sum, double bound) {
    Verdict v;
    v.variance_sum = variance_sum;
    v.bound = bound;
    v.margin = bound - variance_sum;
    v.entangled = v.margin > kMargin;
    return v;
}

}  // namespace

void validate_bipartite_state(const BipartiteState& state) {
    if (state.dim_a < 2 || state.dim_b < 2)
        throw std::invalid_argument("bipartite state: subsystem dimensions must be >= 2");
    const int d = state.dim_a * state.dim_b;
    if (state.rho.rows() != d || state.rho.cols() != d)
        throw std::invalid_argument("bipartite state: density matrix size does not match dims");
    CMatrix S;
    try {
        S = require_hermitian(state.rho, 1e-10, "bipartite state");
    } catch (const HermiticityError& e) {
        throw std::invalid_argument(e.what());
    }
    if (std::abs(S.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("bipartite state: trace differs from 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(S, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("bipartite state: negative eigenvalue beyond -1e-9");
}

CMatrix composite_observable(const CMatrix& A, const CMatrix& B, int dim_a, int dim_b) {
    if (A.rows() != dim_a || A.cols() != dim_a || B.rows() != dim_b || B.cols() != dim_b)
        throw std::invalid_argument("composite_observable: dimension mismatch");
    return kron(A, CMatrix::Identity(dim_b, dim_b)) +
           kron(CMatrix::Identity(dim_a, dim_a), B);
}

CMatrix partial_transpose(const BipartiteState& state, Subsystem which) {
    const int da = state.dim_a, db = state.dim_b;
    if (state.rho.rows() != da * db || state.rho.cols() != da * db)
        throw std::invalid_argument("partial_transpose: dimension mismatch");
    CMatrix out(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j)
            for (int k = 0; k < da; ++k)
                for (int l = 0; l < db; ++l) {
                    const auto src = (which == Subsystem::first)
                                         ? state.rho(k * db + j, i * db + l)
                                         : state.rho(i * db + l, k * db + j);
                    out(i * db + j, k * db + l) = src;
                }
    return out;
}

Verdict test_separability_violation(const BipartiteState& state, const ObservablePair& p1,
                                    const ObservablePair& p2, const SolverConfig& cfg) {
    validate_bipartite_state(state);
    const CMatrix M1 = composite_observable(p1.A, p1.B, state.dim_a, state.dim_b);
    const CMatrix M2 = composite_observable(p2.A, p2.B, state.dim_a, state.dim_b);
    const double v = variance(M1, state.rho) + variance(M2, state.rho);

    const double bound = solve_general({p1.A, p2.A}, cfg).m +
                         solve_general({p1.B, p2.B}, cfg).m;
    return make_verdict(v, bound);
}

Verdict test_ppt_variance(const BipartiteState& state, const CMatrix& A, const CMatrix& B,
                          const SolverConfig& cfg) {
    validate_bipartite_state(state);
    const int d = state.dim_a * state.dim_b;
    if (A.rows() != d || A.cols() != d || B.rows() != d || B.cols() != d)
        throw std::invalid_argument("test_ppt_variance: observables must act on the composite space");
    const CMatrix Ah = require_hermitian(A, 1e-10, "test_ppt_variance: A");
    const CMatrix Bh = require_hermitian(B, 1e-10, "test_ppt_variance: B");

    // The partial transpose of a state need not be positive; the criterion uses the
    // formal functional on purpose.
    const CMatrix gamma = partial_transpose(state, Subsystem::second);
    const double v = variance_functional(Ah, gamma) + variance_functional(Bh, gamma);

    const double bound = solve_general({Ah, Bh}, cfg).m;
    return make_verdict(v, bound);
}

BipartiteState random_separable_state(int dim_a, int dim_b, std::mt19937_64& rng,
                                      int max_terms) {
    if (dim_a < 2 || dim_b < 2 || max_terms < 1)
        throw std::invalid_argument("random_separable_state: bad arguments");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> term_count(1, max_terms);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int k = term_count(rng);
    // Flat Dirichlet weights via normalized exponentials.
    Vector w(k);
    for (int i = 0; i < k; ++i) w[i] = -std::log(1.0 - unit(rng));
    w /= w.sum();

    const auto haar_vector = [&](int dim) {
        CVector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = Complex(gauss(rng), gauss(rng));
        v.normalize();
        return v;
    };

    BipartiteState st;
    st.dim_a = dim_a;
    st.dim_b = dim_b;
    st.rho = CMatrix::Zero(dim_a * dim_b, dim_a * dim_b);
    for (int i = 0; i < k; ++i) {
        const CVector prod = kron(CMatrix(haar_vector(dim_a)), CMatrix(haar_vector(dim_b)));
        st.rho += w[i] * (prod * prod.adjoint());
    }
    st.rho = 0.5 * (st.rho + st.rho.adjoint());
    return st;
}

}  // namespace varbound
