#pragma once

#include <cstdint>
#include <random>

#include "varbound/types.hpp"
#include "varbound/variance_qp.hpp"

namespace varbound {

// Bipartite density matrix on C^{dim_a} (x) C^{dim_b}, row-major composite index
// i * dim_b + j.  Validated on construction via validate_bipartite_state.
struct BipartiteState {
    int dim_a = 0;
    int dim_b = 0;
    CMatrix rho;
};

// Throws std::invalid_argument unless rho is Hermitian (1e-10), unit trace (1e-10)
// and has eigenvalues >= -1e-9.
void validate_bipartite_state(const BipartiteState& state);

enum class Subsystem { first, second };

// A (x) 1 + 1 (x) B for subsystem observables A (dim_a) and B (dim_b).
CMatrix composite_observable(const CMatrix& A, const CMatrix& B, int dim_a, int dim_b);

// Partial transpose over the chosen subsystem.  An involution; eigenvalues of the
// result may be negative for entangled states.
CMatrix partial_transpose(const BipartiteState& state, Subsystem which);

struct ObservablePair {
    CMatrix A;  // acts on the first subsystem
    CMatrix B;  // acts on the second
};

struct Verdict {
    bool entangled = false;
    double variance_sum = 0.0;  // tested quantity
    double bound = 0.0;         // separability threshold
    double margin = 0.0;        // bound - variance_sum; entangled iff margin > 1e-6
};

// Local-variance criterion: for M_i = A_i (x) 1 + 1 (x) B_i, every separable state
// obeys var(M_1) + var(M_2) >= m(A_1, A_2) + m(B_1, B_2).  A violation beyond the
// 1e-6 margin certifies entanglement.
Verdict test_separability_violation(const BipartiteState& state, const ObservablePair& p1,
                                    const ObservablePair& p2,
                                    const SolverConfig& cfg = {});

// PPT-variance criterion: the formal variance functional evaluated on the partial
// transpose (no positivity assumed) obeys the same bound for separable states:
// var_{rho^Gamma}(A) + var_{rho^Gamma}(B) >= m(A, B) with A, B acting on the full
// composite space.  The transpose is taken over the second subsystem.
Verdict test_ppt_variance(const BipartiteState& state, const CMatrix& A, const CMatrix& B,
                          const SolverConfig& cfg = {});

// Random separable state: convex mixture of up to `max_terms` Haar-random product
// pure states with flat-Dirichlet weights.  Used by the false-positive scans.
BipartiteState random_separable_state(int dim_a, int dim_b, std::mt19937_64& rng,
                                      int max_terms = 4);

}  // namespace varbound
