#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "varbound/bloch.hpp"
#include "varbound/su_generators.hpp"
#include "varbound/types.hpp"

namespace varbound {

// Data of the reduced problem: minimizing the variance sum over all states equals
// (2/n)(sum_mu |a_mu|^2 + min_{r pure} r^T T r) with
//   O = sum_mu a_mu a_mu^T,
//   T = (n-2) sum_k Tr(O D_k) D_k - (n-1) O.
// Tr(T) = -(n-1) Tr(O) holds identically (the D_k are traceless).
struct QuadraticForm {
    int n = 0;
    int K = 0;          // number of observables
    Matrix O;           // (n^2-1) x (n^2-1), PSD
    Matrix T;           // symmetric
    double norms_sq = 0.0;  // sum_mu |a_mu|^2 = Tr(O)
};

enum class Stratum {
    bloch_sphere,  // n = 2: every unit vector is extremal
    i1,            // qutrit stratum {(0,..,0,-1)}
    i2,            // qutrit stratum r8 = 1/2, |(r1,r2,r3)| = sqrt(3)/2
    i3,            // qutrit stratum parametrized by (R, epsilon, free quadruple)
    pure_vector,   // n >= 4 descent over unit vectors in C^n
};

const char* stratum_name(Stratum s);

struct Diagnostics {
    long long samples = 0;             // raw candidate evaluations (qutrit I3)
    long long polish_iterations = 0;   // local-polish iterations, summed over starts
    int epsilon = 0;                   // winning I3 branch, 0 when not applicable
    double constraint_residual = 0.0;  // max(| |r|-1 |, |r*r - r|) of the reported r_min
    int restarts_used = 0;             // n >= 4 path
    // Direct evaluation of sum_mu var(A_mu, rho_min); NaN when the solve path had no
    // access to the observables themselves.
    double direct_variance_sum = std::numeric_limits<double>::quiet_NaN();
};

struct BoundResult {
    double ell = 0.0;  // min_{r pure} r^T T r
    double m = 0.0;    // (2/n)(norms_sq + ell); tight lower bound on the variance sum
    Vector r_min;
    CMatrix rho_min;
    Stratum stratum = Stratum::bloch_sphere;
    Diagnostics diag;
};

struct SolverConfig {
    int grid_N = 200;             // radial slices of the I3 stratum
    int samples_per_slice = 2000; // Gaussian directions per (slice, branch)
    double polish_tol = 1e-9;     // objective-spread stop for the local polish
    int restarts = 32;            // starts for the n >= 4 descent
    std::uint64_t seed = 0;
    int max_polish_iters = 500;
    int threads = 1;              // worker cap for slice sampling
};

// Variance <A^2, rho> - <A, rho>^2 of a Hermitian observable in a density matrix.
// Validates A (Hermitian, 1e-10) and rho (Hermitian, unit trace to 1e-8,
// eigenvalues >= -1e-9); throws std::invalid_argument for a non-state rho.
double variance(const CMatrix& A, const CMatrix& rho);

// The same functional without any state validation; well-defined for arbitrary
// Hermitian weight matrices W (used by criteria that evaluate on non-positive W).
double variance_functional(const CMatrix& A, const CMatrix& W);

// Assembles O and T from coherence decompositions sharing one dimension.
QuadraticForm build_quadratic_form(const std::vector<CoherenceDecomposition>& decomps,
                                   const StarTensor& st);

// n = 2 closed form: ell = -lambda_max(O), m = Tr(O) - lambda_max(O), r_min the
// leading unit eigenvector (sign fixed so its first nonzero component is positive).
BoundResult solve_qubit(const QuadraticForm& Q);

// n = 3 stratified solve: exact values on I1 and on I2 (sphere-constrained quadratic
// via the secular equation, hard case included), stochastic slice sampling plus local
// polish on I3.  Stratum ties within 1e-12 prefer I1, then I2, then I3.
BoundResult solve_qutrit(const QuadraticForm& Q, const SolverConfig& cfg = {});

// Dispatches on dimension: closed form (n = 2), stratified solve (n = 3), or
// multi-restart projected descent over unit vectors (n >= 4).  Always cross-checks m
// by evaluating the variance sum directly on rho_min (diag.direct_variance_sum).
BoundResult solve_general(const std::vector<CMatrix>& observables,
                          const SolverConfig& cfg = {});

// Closed-form bound for the one-parameter family
//   A_t = [[-1,0,t],[0,0,0],[t,0,1]],  B = [[0,1,0],[1,0,i],[0,-i,0]]:
//   h(t) = (15 - t^2)(1 + t^2)/32   for |t| <= 1,
//   h(t) = (3 + 4 t^2)/(4 (1+t^2))  for |t| >= 1.
double reference_ht(double t);

// m(G_i, G_j) for all generator pairs of the qutrit basis; symmetric 8x8 with zero
// diagonal.
Matrix pairwise_gellmann_table(const SolverConfig& cfg = {});

}  // namespace varbound
