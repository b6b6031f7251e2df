#pragma once

#include <cstdint>
#include <vector>

#include "varbound/types.hpp"

namespace varbound {

struct OracleResult {
    double value = 0.0;   // best variance sum found
    CVector psi;          // attaining unit vector
    int restarts_used = 0;
    // Some restart reached a stationary point and the best two restarts agree to 1e-8.
    bool converged = false;
};

// Variance of a Hermitian observable in a unit vector: <psi|A^2|psi> - <psi|A|psi>^2,
// evaluated in the stable form |(A - <A>)psi|^2 (hence never negative).
// Preconditions: Hermitian A (1e-10), | |psi| - 1 | <= 1e-10.
double variance_pure(const CMatrix& A, const CVector& psi);

// Tangentially projected gradient of psi -> sum_mu var_psi(A_mu) on the unit sphere:
// P(2 sum_mu (A_mu - <A_mu>)^2 psi), P = I - psi Re<psi, .>.
// Matches central finite differences of the normalized objective.
CVector variance_sum_gradient(const std::vector<CMatrix>& observables, const CVector& psi);

// Global minimum of the variance sum over unit vectors, by multi-restart projected
// gradient descent with a sufficient-decrease backtracking line search (initial step
// 0.5, warm-started between iterations).  A run stops when the tangent gradient norm
// falls below 1e-10, when no step achieves sufficient decrease at floating-point
// resolution, or after 5000 iterations.  Restart inits are complex-Gaussian vectors
// from the seeded generator.
OracleResult oracle_min(const std::vector<CMatrix>& observables, int restarts = 32,
                        std::uint64_t seed = 0);

}  // namespace varbound
