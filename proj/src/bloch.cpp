#include "varbound/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace varbound {

namespace {

double clamp_unit(double x) { return std::min(1.0, std::max(-1.0, x)); }

// <r, r*r> for a qutrit vector.
double self_star_overlap(const Vector& r) {
    return r.dot(star(r, r, qutrit_star_tensor()));
}

}  // namespace

CoherenceDecomposition decompose(const CMatrix& A, const GeneratorSet& gens,
                                 double herm_tol) {
    if (A.rows() != gens.n || A.cols() != gens.n)
        throw std::invalid_argument("decompose: observable dimension does not match generator set");
    const CMatrix H = require_hermitian(A, herm_tol, "decompose");

    CoherenceDecomposition out;
    out.n = gens.n;
    out.a0 = H.trace().real() / gens.n;
    out.a.resize(gens.dim());
    for (int k = 0; k < gens.dim(); ++k)
        out.a[k] = 0.5 * (H.transpose().cwiseProduct(gens.generators[k])).sum().real();
    return out;
}

CMatrix state_from_vector(const Vector& r, const GeneratorSet& gens) {
    if (r.size() != gens.dim())
        throw std::invalid_argument("state_from_vector: vector length must be n^2 - 1");
    const double scale = std::sqrt(gens.n * (gens.n - 1.0) / 2.0);
    CMatrix M = CMatrix::Identity(gens.n, gens.n);
    for (int k = 0; k < gens.dim(); ++k) M += scale * r[k] * gens.generators[k];
    return M / static_cast<double>(gens.n);
}

Vector vector_from_state(const CMatrix& M, const GeneratorSet& gens) {
    if (M.rows() != gens.n || M.cols() != gens.n)
        throw std::invalid_argument("vector_from_state: dimension mismatch");
    const double scale = 0.5 * gens.n * std::sqrt(2.0 / (gens.n * (gens.n - 1.0)));
    Vector r(gens.dim());
    for (int k = 0; k < gens.dim(); ++k)
        r[k] = scale * (M.transpose().cwiseProduct(gens.generators[k])).sum().real();
    return r;
}

Vector star(const Vector& x, const Vector& y, const StarTensor& st) {
    if (x.size() != st.dim() || y.size() != st.dim())
        throw std::invalid_argument("star: vector length must be n^2 - 1");
    Vector out(st.dim());
    for (int k = 0; k < st.dim(); ++k) out[k] = x.dot(st.D[k] * y);
    return out;
}

bool is_density_qutrit(const Vector& r) {
    const double nrm2 = r.squaredNorm();
    if (nrm2 > 1.0 + 1e-10) return false;
    return 1.0 + 2.0 * self_star_overlap(r) >= 3.0 * nrm2 - 1e-10;
}

bool is_density_qutrit_trig(const Vector& r) {
    const double nrm = r.norm();
    if (nrm <= 0.5) return true;
    if (nrm > 1.0 + 1e-10) return false;
    const double phi = std::acos(clamp_unit(self_star_overlap(r) / (nrm * nrm * nrm)));
    return phi + 3.0 * std::acos(clamp_unit(1.0 / (2.0 * nrm))) <= std::numbers::pi + 1e-9;
}

bool is_pure(const Vector& r, const StarTensor& st, double tol) {
    if (std::abs(r.norm() - 1.0) > tol) return false;
    if (st.n == 2) return true;
    return (star(r, r, st) - r).norm() <= tol;
}

Eigen::Vector3d qutrit_spectrum_trig(const Vector& r) {
    const double nrm = r.norm();
    Eigen::Vector3d lam;
    if (nrm < 1e-300) {
        lam.setConstant(1.0 / 3.0);
        return lam;
    }
    const double theta =
        std::acos(clamp_unit(self_star_overlap(r) / (nrm * nrm * nrm))) / 3.0;
    const double shifts[3] = {0.0, -2.0 * std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0};
    for (int i = 0; i < 3; ++i)
        lam[i] = 1.0 / 3.0 + (2.0 / 3.0) * nrm * std::cos(theta + shifts[i]);
    return lam;  // theta in [0, pi/3] makes this ordering descending
}

Vector lift_ext3(double R, int epsilon, const Eigen::Vector4d& free_quadruple) {
    if (!(R > 0.0) || R > std::sqrt(3.0) / 2.0 + 1e-12)
        throw std::invalid_argument("lift_ext3: need 0 < R <= sqrt(3)/2");
    if (epsilon != 1 && epsilon != -1)
        throw std::invalid_argument("lift_ext3: epsilon must be +1 or -1");
    const double qn = free_quadruple.norm();
    if (!(std::abs(qn - R) < 1e-6 * std::max(R, 1e-300)))
        throw std::invalid_argument("lift_ext3: quadruple norm drifts from R beyond 1e-6 relative");
    const Eigen::Vector4d q = free_quadruple * (R / qn);

    const double root = std::sqrt(std::max(0.0, 3.0 - 4.0 * R * R));
    // eps = -1 rationalized to avoid cancellation for small R.
    const double s = (epsilon == 1) ? (std::sqrt(3.0) + root) / (2.0 * R * R)
                                    : 2.0 / (std::sqrt(3.0) + root);

    Vector r(8);
    r[0] = s * (q[0] * q[2] + q[1] * q[3]);
    r[1] = s * (q[1] * q[2] - q[0] * q[3]);
    r[2] = 0.5 * s * (q[0] * q[0] + q[1] * q[1] - q[2] * q[2] - q[3] * q[3]);
    r.segment<4>(3) = q;
    r[7] = (-1.0 + epsilon * std::sqrt(3.0 * (3.0 - 4.0 * R * R))) / 4.0;
    return r;
}

ExtStratum classify_ext3(const Vector& r) {
    if (r.size() != 8 || !is_pure(r, qutrit_star_tensor()))
        throw std::invalid_argument("classify_ext3: vector is not an extremal qutrit vector");
    ExtStratum out;
    const Eigen::Vector4d q = r.segment<4>(3);
    const double R = q.norm();
    if (R <= 1e-9) {
        out.tag = (r[7] < -0.25) ? ExtTag::I1 : ExtTag::I2;
        return out;
    }
    out.tag = ExtTag::I3;
    out.R = R;
    out.free = q;
    const double root = std::sqrt(std::max(0.0, 3.0 * (3.0 - 4.0 * R * R)));
    const double r8_plus = (-1.0 + root) / 4.0;
    const double r8_minus = (-1.0 - root) / 4.0;
    out.epsilon = (std::abs(r[7] - r8_plus) <= std::abs(r[7] - r8_minus)) ? 1 : -1;
    return out;
}

}  // namespace varbound
