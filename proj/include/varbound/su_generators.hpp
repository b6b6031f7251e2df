#pragma once

#include <vector>

#include "varbound/types.hpp"

namespace varbound {

// Orthogonal traceless Hermitian basis of su(n) ("generalized Gell-Mann" generators)
// together with its symmetric (d) and antisymmetric (f) structure constants.
//
// Normalization: <G_i, G_j> = Tr(G_i^dagger G_j) = 2 delta_ij.
// Ordering: for m = 2..n, for j = 1..m-1 emit symmetric(j,m) then antisymmetric(j,m);
// after the off-diagonal pairs of column m, emit the diagonal generator
// sqrt(2/((m-1)m)) * diag(1,..,1,-(m-1),0,..,0).  This reproduces the Pauli basis at
// n = 2 and the standard Gell-Mann basis at n = 3.
struct GeneratorSet {
    int n = 0;
    std::vector<CMatrix> generators;  // n^2 - 1 matrices, each n x n

    // Structure-constant slices: d[k](i,j) = d_ijk = (1/2) Re Tr(G_i G_j G_k),
    // f[k](i,j) = f_ijk = (1/2) Im Tr(G_i G_j G_k).  Both totally (anti)symmetric.
    std::vector<Matrix> d;
    std::vector<Matrix> f;

    int dim() const { return n * n - 1; }
    double d_at(int i, int j, int k) const { return d[k](i, j); }
    double f_at(int i, int j, int k) const { return f[k](i, j); }
};

// Star-product tensor: (D_k)_{ij} = (1/(n-2)) sqrt(n(n-1)/2) d_ijk for n > 2;
// identically zero for n = 2 (where the symmetric structure constants vanish).
struct StarTensor {
    int n = 0;
    std::vector<Matrix> D;  // n^2 - 1 symmetric matrices, each (n^2-1) x (n^2-1)

    int dim() const { return n * n - 1; }
};

// Builds the full generator set for dimension n >= 2.  Throws std::invalid_argument
// for n < 2.
GeneratorSet build_generators(int n);

// Builds the star tensor from an already-built generator set.
StarTensor build_star_tensor(const GeneratorSet& gens);

// Cached qutrit instances (the solver's hot path).  Thread-safe via static init.
const GeneratorSet& qutrit_generators();
const StarTensor& qutrit_star_tensor();

}  // namespace varbound
