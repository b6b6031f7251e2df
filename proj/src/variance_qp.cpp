#include "varbound/variance_qp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "varbound/rng.hpp"

namespace varbound {

namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Eigen::Vector4d;
using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;

const double kRoot3 = std::sqrt(3.0);
const double kRMax = kRoot3 / 2.0;  // largest quadruple radius on the I3 stratum

const GeneratorSet& qubit_generators() {
    static const GeneratorSet g = build_generators(2);
    return g;
}

const StarTensor& qubit_star_tensor() {
    static const StarTensor st = build_star_tensor(qubit_generators());
    return st;
}

// ---------------------------------------------------------------------------
// I2: exact minimum of v^T A v + 2 b^T v on the sphere |v| = rho via the secular
// equation; hard case (b orthogonal to the bottom eigenspace) included.
// ---------------------------------------------------------------------------

std::pair<double, Vector3d> sphere_quadratic_min(const Matrix3d& A, const Vector3d& b,
                                                 double rho) {
    Eigen::SelfAdjointEigenSolver<Matrix3d> es(A);
    const Vector3d d = es.eigenvalues();  // ascending
    const Matrix3d Q = es.eigenvectors();
    const Vector3d beta = Q.transpose() * b;
    const double d1 = d[0];
    const double deg_tol = 1e-12 * std::max(1.0, std::abs(d1));

    const auto phi = [&](double lam, bool skip_bottom) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (skip_bottom && d[i] - d1 <= deg_tol) continue;
            const double den = d[i] - lam;
            s += beta[i] * beta[i] / (den * den);
        }
        return s;
    };
    const auto v_of = [&](double lam, bool skip_bottom) {
        Vector3d v = Vector3d::Zero();
        for (int i = 0; i < 3; ++i) {
            if (skip_bottom && d[i] - d1 <= deg_tol) continue;
            v -= (beta[i] / (d[i] - lam)) * Q.col(i);
        }
        return v;
    };

    double bottom_mass = 0.0;
    for (int i = 0; i < 3; ++i)
        if (d[i] - d1 <= deg_tol) bottom_mass += beta[i] * beta[i];

    const double rho2 = rho * rho;
    Vector3d v;
    if (bottom_mass > 1e-24) {
        // Unique multiplier with A - lam I positive definite: phi(lam) = rho^2 on
        // (-inf, d1); phi is increasing there and blows up at d1.
        const double lo0 = d1 - b.norm() / rho - 1.0;  // phi(lo0) < rho^2 by construction
        double delta = 0.5 * (d1 - lo0);
        for (int guard = 0; guard < 4000 && phi(d1 - delta, false) < rho2; ++guard)
            delta *= 0.5;
        double lo = lo0, hi = d1 - delta;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (phi(mid, false) < rho2 ? lo : hi) = mid;
        }
        v = v_of(0.5 * (lo + hi), false);
        v *= rho / v.norm();
    } else {
        // Hard case: no b-component along the bottom eigenspace.
        const Vector3d vhat = v_of(d1, true);
        const double vn2 = vhat.squaredNorm();
        if (vn2 <= rho2) {
            v = vhat + std::sqrt(std::max(0.0, rho2 - vn2)) * Q.col(0);
        } else {
            double lo = d1 - b.norm() / rho - 1.0, hi = d1;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (phi(mid, true) < rho2 ? lo : hi) = mid;
            }
            v = v_of(0.5 * (lo + hi), true);
            v *= rho / v.norm();
        }
    }
    return {v.dot(A * v) + 2.0 * b.dot(v), v};
}

// ---------------------------------------------------------------------------
// I3: slice sampling + local polish.
// ---------------------------------------------------------------------------

// q must already have norm R; returns the full extremal vector of branch eps.
inline Vector8 lift_fast(double R, int eps, const Vector4d& q) {
    const double root = std::sqrt(std::max(0.0, 3.0 - 4.0 * R * R));
    const double s = (eps == 1) ? (kRoot3 + root) / (2.0 * R * R)  // rationalized below
                                : 2.0 / (kRoot3 + root);
    Vector8 r;
    r[0] = s * (q[0] * q[2] + q[1] * q[3]);
    r[1] = s * (q[1] * q[2] - q[0] * q[3]);
    r[2] = 0.5 * s * (q[0] * q[0] + q[1] * q[1] - q[2] * q[2] - q[3] * q[3]);
    r[3] = q[0];
    r[4] = q[1];
    r[5] = q[2];
    r[6] = q[3];
    r[7] = (-1.0 + eps * kRoot3 * root) / 4.0;
    return r;
}

struct Candidate {
    double value;
    int slice;
    int branch;  // 0 -> eps = +1, 1 -> eps = -1
    int index;   // sample index within the slice stream
    Vector4d q;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.slice != b.slice) return a.slice < b.slice;
    if (a.branch != b.branch) return a.branch < b.branch;
    return a.index < b.index;
}

// Appends the slice's best `keep` samples to `out`.  Seeded independently per
// (slice, branch) so the result is independent of work partitioning.
void sample_slice(const Matrix8& T, int slice, int grid_N, int branch,
                  const SolverConfig& cfg, int keep, std::vector<Candidate>& out) {
    const double R = kRMax * slice / grid_N;
    const int eps = branch == 0 ? 1 : -1;
    auto rng = make_rng(cfg.seed, 2ull * static_cast<std::uint64_t>(slice) + branch);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Candidate> best;
    best.reserve(keep + 1);
    for (int s = 0; s < cfg.samples_per_slice; ++s) {
        Vector4d q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
        const double qn = q.norm();
        if (qn < 1e-12) continue;
        q *= R / qn;
        const Vector8 r = lift_fast(R, eps, q);
        const Candidate c{r.dot(T * r), slice, branch, s, q};
        if (static_cast<int>(best.size()) < keep) {
            best.push_back(c);
            std::sort(best.begin(), best.end(), candidate_less);
        } else if (candidate_less(c, best.back())) {
            best.back() = c;
            std::sort(best.begin(), best.end(), candidate_less);
        }
    }
    out.insert(out.end(), best.begin(), best.end());
}

struct PolishOutcome {
    double value;
    Vector8 r;
    long long iters;
};

double polish_objective(const Matrix8& T, int eps, const Eigen::Matrix<double, 5, 1>& x) {
    const double R = std::clamp(x[0], 1e-6, kRMax);
    const Vector4d u = x.tail<4>();
    const double un = u.norm();
    if (un < 1e-12) return std::numeric_limits<double>::infinity();
    const Vector8 r = lift_fast(R, eps, u * (R / un));
    return r.dot(T * r);
}

// Derivative-free Nelder-Mead over (R, direction of the free quadruple); the branch
// sign stays fixed for the whole polish.
PolishOutcome nelder_mead_polish(const Matrix8& T, int eps, double R0, const Vector4d& q0,
                                 const SolverConfig& cfg) {
    using X = Eigen::Matrix<double, 5, 1>;
    constexpr int kDim = 5, kVerts = 6;

    std::array<X, kVerts> v;
    std::array<double, kVerts> fv;
    v[0] << R0, q0[0], q0[1], q0[2], q0[3];
    for (int i = 0; i < kDim; ++i) {
        v[i + 1] = v[0];
        v[i + 1][i] += (i == 0) ? 0.02 : 0.05 * std::max(R0, 0.1);
    }
    for (int i = 0; i < kVerts; ++i) fv[i] = polish_objective(T, eps, v[i]);

    std::array<int, kVerts> ord;
    long long iters = 0;
    for (; iters < cfg.max_polish_iters; ++iters) {
        for (int i = 0; i < kVerts; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        if (fv[ord[kVerts - 1]] - fv[ord[0]] < cfg.polish_tol) break;

        X centroid = X::Zero();
        for (int i = 0; i < kVerts - 1; ++i) centroid += v[ord[i]];
        centroid /= kDim;
        const int worst = ord[kVerts - 1];

        const X xr = centroid + (centroid - v[worst]);
        const double fr = polish_objective(T, eps, xr);
        if (fr < fv[ord[0]]) {
            const X xe = centroid + 2.0 * (centroid - v[worst]);
            const double fe = polish_objective(T, eps, xe);
            if (fe < fr) { v[worst] = xe; fv[worst] = fe; }
            else         { v[worst] = xr; fv[worst] = fr; }
        } else if (fr < fv[ord[kVerts - 2]]) {
            v[worst] = xr;
            fv[worst] = fr;
        } else {
            const X xc = centroid + 0.5 * (v[worst] - centroid);
            const double fc = polish_objective(T, eps, xc);
            if (fc < fv[worst]) {
                v[worst] = xc;
                fv[worst] = fc;
            } else {
                for (int i = 1; i < kVerts; ++i) {
                    v[ord[i]] = v[ord[0]] + 0.5 * (v[ord[i]] - v[ord[0]]);
                    fv[ord[i]] = polish_objective(T, eps, v[ord[i]]);
                }
            }
        }
    }

    int bi = 0;
    for (int i = 1; i < kVerts; ++i)
        if (fv[i] < fv[bi]) bi = i;
    // Reconstruct the feasible point from the winning vertex.
    const double R = std::clamp(v[bi][0], 1e-6, kRMax);
    Vector4d u = v[bi].tail<4>();
    PolishOutcome out;
    out.iters = iters;
    if (u.norm() < 1e-12) {
        out.value = std::numeric_limits<double>::infinity();
        out.r = Vector8::Zero();
        return out;
    }
    out.r = lift_fast(R, eps, Vector4d(u * (R / u.norm())));
    out.value = out.r.dot(T * out.r);
    return out;
}

struct I3Result {
    double value = std::numeric_limits<double>::infinity();
    Vector8 r = Vector8::Zero();
    int eps = 0;
    long long samples = 0;
    long long polish_iters = 0;
};

I3Result minimize_i3(const Matrix8& T, const SolverConfig& cfg) {
    const int N = std::max(1, cfg.grid_N);
    const int keep = 8;

    std::vector<Candidate> cands;
    const int workers = std::max(1, cfg.threads);
    if (workers == 1) {
        for (int k = 1; k <= N; ++k)
            for (int branch = 0; branch < 2; ++branch)
                sample_slice(T, k, N, branch, cfg, keep, cands);
    } else {
        std::vector<std::vector<Candidate>> parts(workers);
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int k = 1 + w; k <= N; k += workers)
                    for (int branch = 0; branch < 2; ++branch)
                        sample_slice(T, k, N, branch, cfg, keep, parts[w]);
            });
        }
        for (auto& th : pool) th.join();
        for (auto& p : parts) cands.insert(cands.end(), p.begin(), p.end());
    }

    std::sort(cands.begin(), cands.end(), candidate_less);
    if (cands.size() > static_cast<std::size_t>(keep)) cands.resize(keep);

    I3Result out;
    out.samples = 2ll * N * cfg.samples_per_slice;
    for (const Candidate& c : cands) {
        const int eps = c.branch == 0 ? 1 : -1;
        const double R = kRMax * c.slice / N;
        const PolishOutcome p = nelder_mead_polish(T, eps, R, c.q, cfg);
        out.polish_iters += p.iters;
        const double raw = c.value;
        if (p.value < out.value) {
            out.value = p.value;
            out.r = p.r;
            out.eps = eps;
        }
        if (raw < out.value) {  // polish should never lose to its own start
            out.value = raw;
            out.r = lift_fast(R, eps, c.q);
            out.eps = eps;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// n >= 4: projected descent over unit vectors (independent of the strata logic
// above; the oracle module has its own separate implementation for refereeing).
// ---------------------------------------------------------------------------

struct DescentOutcome {
    double value = std::numeric_limits<double>::infinity();
    CVector psi;
};

DescentOutcome minimize_pure_descent(const std::vector<CMatrix>& A,
                                     const SolverConfig& cfg) {
    const int n = static_cast<int>(A.front().rows());
    std::vector<CMatrix> A2;
    A2.reserve(A.size());
    for (const auto& M : A) A2.push_back(M * M);

    const auto value_of = [&](const CVector& psi) {
        double tot = 0.0;
        for (std::size_t mu = 0; mu < A.size(); ++mu) {
            const CVector Ap = A[mu] * psi;
            const double mean = psi.dot(Ap).real();
            tot += Ap.squaredNorm() - mean * mean;
        }
        return tot;
    };

    DescentOutcome best;
    const int restarts = std::max(1, cfg.restarts);
    for (int run = 0; run < restarts; ++run) {
        auto rng = make_rng(cfg.seed, (1ull << 20) + static_cast<std::uint64_t>(run));
        std::normal_distribution<double> gauss(0.0, 1.0);
        CVector psi(n);
        for (int i = 0; i < n; ++i) psi[i] = Complex(gauss(rng), gauss(rng));
        psi.normalize();
        double f = value_of(psi);

        double step = 1.0;
        for (int iter = 0; iter < 2000; ++iter) {
            CVector g = CVector::Zero(n);
            for (std::size_t mu = 0; mu < A.size(); ++mu) {
                const CVector Ap = A[mu] * psi;
                const double mean = psi.dot(Ap).real();
                g += 2.0 * (A2[mu] * psi - 2.0 * mean * Ap + mean * mean * psi);
            }
            g -= psi.dot(g).real() * psi;  // tangential projection
            const double gsq = g.squaredNorm();
            if (gsq < 1e-20) break;

            // Armijo acceptance; any-improvement acceptance can ping-pong across a
            // degenerate valley and stall well above the minimum.
            step = std::min(1.0, 2.0 * step);
            bool moved = false;
            while (step > 1e-16) {
                CVector trial = (psi - step * g).normalized();
                double ft = value_of(trial);
                if (ft < f - std::max(1e-18, 1e-4 * step * gsq)) {
                    // A sufficient step can still be a near-reflection across a
                    // narrow valley (step ~ 2/curvature) that decreases f by a
                    // sliver each time; keep halving while the halved step from
                    // the same point does strictly better, which lands near the
                    // valley floor instead.
                    while (step > 1e-16) {
                        const CVector half = (psi - 0.5 * step * g).normalized();
                        const double fh = value_of(half);
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
            if (!moved) break;
        }
        if (f < best.value) {
            best.value = f;
            best.psi = psi;
        }
    }
    return best;
}

double pure_constraint_residual(const Vector& r, const StarTensor& st) {
    double res = std::abs(r.norm() - 1.0);
    if (st.n > 2) res = std::max(res, (star(r, r, st) - r).norm());
    return res;
}

}  // namespace

const char* stratum_name(Stratum s) {
    switch (s) {
        case Stratum::bloch_sphere: return "bloch-sphere";
        case Stratum::i1: return "I1";
        case Stratum::i2: return "I2";
        case Stratum::i3: return "I3";
        case Stratum::pure_vector: return "pure-vector";
    }
    return "?";
}

double variance_functional(const CMatrix& A, const CMatrix& W) {
    const double first = (A.transpose().cwiseProduct(W)).sum().real();
    const double second = ((A * A).transpose().cwiseProduct(W)).sum().real();
    return second - first * first;
}

double variance(const CMatrix& A, const CMatrix& rho) {
    const CMatrix H = require_hermitian(A, 1e-10, "variance: observable");
    CMatrix S;
    try {
        S = require_hermitian(rho, 1e-8, "variance: state");
    } catch (const HermiticityError& e) {
        throw std::invalid_argument(e.what());
    }
    if (S.rows() != H.rows()) throw std::invalid_argument("variance: dimension mismatch");
    if (std::abs(S.trace().real() - 1.0) > 1e-8)
        throw std::invalid_argument("variance: state trace differs from 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(S, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("variance: state has an eigenvalue below -1e-9");
    return variance_functional(H, S);
}

QuadraticForm build_quadratic_form(const std::vector<CoherenceDecomposition>& decomps,
                                   const StarTensor& st) {
    if (decomps.empty())
        throw std::invalid_argument("build_quadratic_form: no decompositions");
    const int n = st.n;
    const int N = st.dim();
    QuadraticForm Q;
    Q.n = n;
    Q.K = static_cast<int>(decomps.size());
    Q.O = Matrix::Zero(N, N);
    for (const auto& dec : decomps) {
        if (dec.n != n || dec.a.size() != N)
            throw std::invalid_argument("build_quadratic_form: dimension mismatch");
        Q.O.noalias() += dec.a * dec.a.transpose();
        Q.norms_sq += dec.a.squaredNorm();
    }
    Q.T = -(n - 1.0) * Q.O;
    for (int k = 0; k < N && n > 2; ++k) {
        const double w = Q.O.cwiseProduct(st.D[k]).sum();  // Tr(O D_k)
        Q.T.noalias() += (n - 2.0) * w * st.D[k];
    }
    return Q;
}

BoundResult solve_qubit(const QuadraticForm& Q) {
    if (Q.n != 2 || Q.O.rows() != 3)
        throw std::invalid_argument("solve_qubit: form does not describe a qubit");
    const Matrix3d O = 0.5 * (Matrix3d(Q.O) + Matrix3d(Q.O).transpose());
    Eigen::SelfAdjointEigenSolver<Matrix3d> es(O);
    const double lmax = es.eigenvalues()[2];
    Vector3d v = es.eigenvectors().col(2);
    for (int i = 0; i < 3; ++i) {
        if (std::abs(v[i]) > 1e-12) {
            if (v[i] < 0.0) v = -v;
            break;
        }
    }

    BoundResult out;
    out.ell = -lmax;
    out.m = Q.norms_sq - lmax;
    out.r_min = v;
    out.rho_min = state_from_vector(out.r_min, qubit_generators());
    out.stratum = Stratum::bloch_sphere;
    out.diag.constraint_residual = pure_constraint_residual(out.r_min, qubit_star_tensor());
    return out;
}

BoundResult solve_qutrit(const QuadraticForm& Q, const SolverConfig& cfg) {
    if (Q.n != 3 || Q.T.rows() != 8 || Q.T.cols() != 8)
        throw std::invalid_argument("solve_qutrit: form does not describe a qutrit");
    const Matrix8 T = 0.5 * (Matrix8(Q.T) + Matrix8(Q.T).transpose());

    const double val1 = T(7, 7);  // I1 = {(0,..,0,-1)}
    Vector8 r1 = Vector8::Zero();
    r1[7] = -1.0;

    const Matrix3d A = T.topLeftCorner<3, 3>();
    const Vector3d b = 0.5 * T.block<3, 1>(0, 7);
    const auto [i2_raw, v2] = sphere_quadratic_min(A, b, kRMax);
    const double val2 = i2_raw + 0.25 * T(7, 7);
    Vector8 r2 = Vector8::Zero();
    r2.head<3>() = v2;
    r2[7] = 0.5;

    const I3Result i3 = minimize_i3(T, cfg);

    BoundResult out;
    out.diag.samples = i3.samples;
    out.diag.polish_iterations = i3.polish_iters;

    Stratum win = Stratum::i1;
    double ell = val1;
    Vector8 r = r1;
    if (val2 < ell - 1e-12) {
        win = Stratum::i2;
        ell = val2;
        r = r2;
    }
    if (i3.value < ell - 1e-12) {
        win = Stratum::i3;
        ell = i3.value;
        r = i3.r;
        out.diag.epsilon = i3.eps;
    }

    out.ell = ell;
    out.m = (2.0 / 3.0) * (Q.norms_sq + ell);
    out.r_min = r;
    out.rho_min = state_from_vector(out.r_min, qutrit_generators());
    out.stratum = win;
    out.diag.constraint_residual = pure_constraint_residual(out.r_min, qutrit_star_tensor());
    return out;
}

BoundResult solve_general(const std::vector<CMatrix>& observables,
                          const SolverConfig& cfg) {
    if (observables.empty())
        throw std::invalid_argument("solve_general: no observables given");
    const int n = static_cast<int>(observables.front().rows());
    if (n < 2) throw std::invalid_argument("solve_general: dimension must be >= 2");
    std::vector<CMatrix> herm;
    herm.reserve(observables.size());
    for (const auto& M : observables) {
        if (M.rows() != n || M.cols() != n)
            throw std::invalid_argument("solve_general: observables must share one dimension");
        herm.push_back(require_hermitian(M, 1e-10, "solve_general"));
    }

    BoundResult out;
    if (n == 2 || n == 3) {
        const GeneratorSet& gens = (n == 2) ? qubit_generators() : qutrit_generators();
        const StarTensor& st = (n == 2) ? qubit_star_tensor() : qutrit_star_tensor();
        std::vector<CoherenceDecomposition> decs;
        decs.reserve(herm.size());
        for (const auto& M : herm) decs.push_back(decompose(M, gens));
        const QuadraticForm Q = build_quadratic_form(decs, st);
        out = (n == 2) ? solve_qubit(Q) : solve_qutrit(Q, cfg);
    } else {
        const GeneratorSet gens = build_generators(n);
        const StarTensor st = build_star_tensor(gens);
        double norms_sq = 0.0;
        for (const auto& M : herm) norms_sq += decompose(M, gens).a.squaredNorm();

        const DescentOutcome dsc = minimize_pure_descent(herm, cfg);
        if (!dsc.psi.allFinite()) throw SolverError("solve_general: descent diverged");
        out.m = dsc.value;
        out.ell = 0.5 * n * dsc.value - norms_sq;
        out.rho_min = dsc.psi * dsc.psi.adjoint();
        out.r_min = vector_from_state(out.rho_min, gens);
        out.stratum = Stratum::pure_vector;
        out.diag.restarts_used = std::max(1, cfg.restarts);
        out.diag.constraint_residual = pure_constraint_residual(out.r_min, st);
    }

    double direct = 0.0;
    for (const auto& M : herm) direct += variance(M, out.rho_min);
    out.diag.direct_variance_sum = direct;
    return out;
}

double reference_ht(double t) {
    const double t2 = t * t;
    if (t2 <= 1.0) return (15.0 - t2) * (1.0 + t2) / 32.0;
    return (3.0 + 4.0 * t2) / (4.0 * (1.0 + t2));
}

Matrix pairwise_gellmann_table(const SolverConfig& cfg) {
    const GeneratorSet& g = qutrit_generators();
    Matrix M = Matrix::Zero(8, 8);
    for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) {
            const BoundResult res = solve_general({g.generators[i], g.generators[j]}, cfg);
            M(i, j) = M(j, i) = res.m;
        }
    }
    return M;
}

}  // namespace varbound
