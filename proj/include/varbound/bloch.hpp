#pragma once

#include "varbound/su_generators.hpp"
#include "varbound/types.hpp"

namespace varbound {

// Expansion A = a0 * I + sum_k a_k G_k of a Hermitian observable in the generator
// basis; a0 = Tr(A)/n, a_k = (1/2) Tr(A G_k).
struct CoherenceDecomposition {
    int n = 0;
    double a0 = 0.0;
    Vector a;  // length n^2 - 1
};

// Stratum label for extremal (pure-state) coherence vectors of a qutrit.
enum class ExtTag { I1, I2, I3 };

// Classification of a qutrit extremal vector.  For I3 carries the radius
// R = |(r4,..,r7)|, branch sign epsilon and the free quadruple itself.
struct ExtStratum {
    ExtTag tag = ExtTag::I1;
    double R = 0.0;
    int epsilon = 0;
    Eigen::Vector4d free = Eigen::Vector4d::Zero();
};

// Hermiticity is enforced within `herm_tol` (defect above it throws HermiticityError);
// the matrix is symmetrized before projection.
CoherenceDecomposition decompose(const CMatrix& A, const GeneratorSet& gens,
                                 double herm_tol = 1e-10);

// rho(r) = (1/n) (I + sqrt(n(n-1)/2) r . G).  Hermitian unit-trace by construction;
// positivity is NOT checked (callers use membership predicates below).
CMatrix state_from_vector(const Vector& r, const GeneratorSet& gens);

// Coherence vector of a Hermitian unit-trace matrix: r_k = (n/2) sqrt(2/(n(n-1))) Tr(M G_k).
// Inverse of state_from_vector on its image.
Vector vector_from_state(const CMatrix& M, const GeneratorSet& gens);

// Star product (x * y)_k = x^T D_k y.  Symmetric bilinear.
Vector star(const Vector& x, const Vector& y, const StarTensor& st);

// Qutrit density-matrix membership: |r| <= 1 and 1 + 2 <r, r*r> >= 3 <r, r>,
// both within 1e-10 slack.
bool is_density_qutrit(const Vector& r);

// Same set via the trigonometric characterization:
// |r| <= 1/2, or (|r| <= 1 and arccos(<r,r*r>/|r|^3) + 3 arccos(1/(2|r|)) <= pi + 1e-9).
bool is_density_qutrit_trig(const Vector& r);

// Pure-state test on coherence vectors: | |r| - 1 | <= tol, and for n > 2 additionally
// |r*r - r| <= tol.
bool is_pure(const Vector& r, const StarTensor& st, double tol = 1e-8);

// Eigenvalues of rho(r) for a qutrit, computed in closed form:
// lambda_i = 1/3 + (2/3)|r| cos(theta + {0, -2pi/3, +2pi/3}),
// theta = (1/3) arccos(<r, r*r>/|r|^3).  Returned in descending order.
Eigen::Vector3d qutrit_spectrum_trig(const Vector& r);

// Lifts a free quadruple (r4,..,r7) on the sphere of radius R in [0, sqrt(3)/2],
// branch epsilon in {+1,-1}, to a full extremal qutrit vector:
//   s  = (sqrt(3) + eps sqrt(3-4R^2)) / (2R^2)
//   r1 = s (r4 r6 + r5 r7),  r2 = s (r5 r6 - r4 r7),  r3 = (s/2)(r4^2+r5^2-r6^2-r7^2)
//   r8 = (-1 + eps sqrt(3 (3-4R^2))) / 4
// The quadruple's norm may drift from R by < 1e-6 relative; it is renormalized
// internally.  Larger drift, R out of range or |eps| != 1 throw std::invalid_argument.
Vector lift_ext3(double R, int epsilon, const Eigen::Vector4d& free_quadruple);

// Recovers the stratum of an extremal qutrit vector.  Requires is_pure(r) (throws
// std::invalid_argument otherwise).  Quadruple norm below 1e-9 resolves to I1/I2 by the
// sign of r8; otherwise I3 with the branch whose r8 formula matches (ties -> +1).
ExtStratum classify_ext3(const Vector& r);

}  // namespace varbound
