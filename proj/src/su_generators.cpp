#include "varbound/su_generators.hpp"

#include <cmath>

namespace varbound {

GeneratorSet build_generators(int n) {
    if (n < 2) throw std::invalid_argument("build_generators: dimension must be >= 2");

    GeneratorSet gs;
    gs.n = n;
    gs.generators.reserve(static_cast<std::size_t>(n) * n - 1);
    const Complex i_unit(0.0, 1.0);

    for (int m = 2; m <= n; ++m) {
        for (int j = 1; j < m; ++j) {
            CMatrix sym = CMatrix::Zero(n, n);
            sym(j - 1, m - 1) = 1.0;
            sym(m - 1, j - 1) = 1.0;
            gs.generators.push_back(sym);

            CMatrix asym = CMatrix::Zero(n, n);
            asym(j - 1, m - 1) = -i_unit;
            asym(m - 1, j - 1) = i_unit;
            gs.generators.push_back(asym);
        }
        CMatrix diag = CMatrix::Zero(n, n);
        const double c = std::sqrt(2.0 / (static_cast<double>(m - 1) * m));
        for (int p = 0; p < m - 1; ++p) diag(p, p) = c;
        diag(m - 1, m - 1) = -c * (m - 1);
        gs.generators.push_back(diag);
    }

    // Structure constants via precomputed pair products: d_ijk + i f_ijk = (1/2) Tr(G_i G_j G_k).
    const int N = gs.dim();
    std::vector<CMatrix> prod(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            prod[static_cast<std::size_t>(i) * N + j] = gs.generators[i] * gs.generators[j];

    gs.d.assign(N, Matrix::Zero(N, N));
    gs.f.assign(N, Matrix::Zero(N, N));
    for (int k = 0; k < N; ++k) {
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                const Complex tr =
                    (prod[static_cast<std::size_t>(i) * N + j].transpose().cwiseProduct(gs.generators[k]))
                        .sum();
                gs.d[k](i, j) = 0.5 * tr.real();
                gs.f[k](i, j) = 0.5 * tr.imag();
            }
        }
    }
    return gs;
}

StarTensor build_star_tensor(const GeneratorSet& gens) {
    StarTensor st;
    st.n = gens.n;
    const int N = gens.dim();
    if (gens.n == 2) {
        st.D.assign(N, Matrix::Zero(N, N));
        return st;
    }
    const double scale =
        std::sqrt(gens.n * (gens.n - 1.0) / 2.0) / (gens.n - 2.0);
    st.D.reserve(N);
    for (int k = 0; k < N; ++k) st.D.push_back(scale * gens.d[k]);
    return st;
}

const GeneratorSet& qutrit_generators() {
    static const GeneratorSet gs = build_generators(3);
    return gs;
}

const StarTensor& qutrit_star_tensor() {
    static const StarTensor st = build_star_tensor(qutrit_generators());
    return st;
}

}  // namespace varbound
