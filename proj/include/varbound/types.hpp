#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace varbound {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Thrown when an input file or JSON document cannot be interpreted
// (malformed structure, dimension mismatch, non-finite entries).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a matrix required to be Hermitian deviates beyond tolerance.
struct HermiticityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a solver cannot produce a usable result.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// max_ij |M - M^dagger| (infinity norm of the anti-Hermitian part witness).
inline double hermiticity_defect(const CMatrix& M) {
    return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

// Checks the defect against `tol`, returning the symmetrized matrix (M+M^dagger)/2.
// Throws HermiticityError when the defect exceeds `tol`.
inline CMatrix require_hermitian(const CMatrix& M, double tol = 1e-10,
                                 const std::string& what = "matrix") {
    if (M.rows() != M.cols())
        throw HermiticityError(what + ": matrix is not square");
    const double defect = hermiticity_defect(M);
    if (!(defect <= tol))
        throw HermiticityError(what + ": Hermiticity defect " + std::to_string(defect) +
                               " exceeds tolerance");
    return 0.5 * (M + M.adjoint());
}

// Kronecker product, dense.  Block convention: (kron(A,B))_{(i,j),(k,l)} = A_{ik} B_{jl}
// with composite row index i*rows(B)+j.
inline CMatrix kron(const CMatrix& A, const CMatrix& B) {
    CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index k = 0; k < A.cols(); ++k)
            out.block(i * B.rows(), k * B.cols(), B.rows(), B.cols()) = A(i, k) * B;
    return out;
}

}  // namespace varbound
