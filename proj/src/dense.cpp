#include "feastsvd/dense.hpp"
#include "feastsvd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace feast {

namespace {

template <typename S>
using MatT = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

double abs2(double x) { return x * x; }
double abs2(const cplx& x) { return std::norm(x); }

// Unit phase of x (x != 0); conj(phase) * x = |x|.
template <typename S>
S unit_phase(const S& x) {
    return x / std::abs(x);
}

template <typename S>
S conj_of(const S& x) {
    if constexpr (std::is_same_v<S, double>) {
        return x;
    } else {
        return std::conj(x);
    }
}

// Solve t^2 + 2*zeta*t - 1 = 0 for the root of smaller magnitude.
void rotation(double a, double d, double b, double& c, double& s, double& t) {
    double zeta = (d - a) / (2.0 * b);
    double sgn = zeta >= 0.0 ? 1.0 : -1.0;
    t = sgn / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
    c = 1.0 / std::sqrt(1.0 + t * t);
    s = c * t;
}

// Columns p,q of x <- [x_p, x_q] * diag(1, conj(ph)) * [[c, s], [-s, c]].
template <typename S>
void rotate_columns(MatT<S>& x, Eigen::Index p, Eigen::Index q, const S& ph, double c, double s) {
    const S cph = conj_of(ph);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        S xp = x(i, p);
        S xq = x(i, q) * cph;
        x(i, p) = c * xp - s * xq;
        x(i, q) = s * xp + c * xq;
    }
}

template <typename S>
SvdFactors jacobi_svd(MatT<S> g, int max_sweeps) {
    const Eigen::Index k = g.cols();
    MatT<S> v = MatT<S>::Identity(k, k);
    const double fro2 = g.squaredNorm();
    const double floor = std::numeric_limits<double>::min() * std::max(1.0, fro2);
    // Rounding floor of a length-rows dot product.
    const double eps = std::max(1e-15, static_cast<double>(g.rows()) * std::numeric_limits<double>::epsilon());

    bool converged = (k <= 1) || fro2 == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < k; ++p) {
            for (Eigen::Index q = p + 1; q < k; ++q) {
                double alpha = g.col(p).squaredNorm();
                double beta = g.col(q).squaredNorm();
                S gamma = g.col(p).dot(g.col(q));  // g_p^* g_q
                double ag = std::abs(gamma);
                if (ag <= floor || ag <= eps * std::sqrt(alpha * beta)) continue;
                // A column at rounding level of the whole matrix only bounces between directions.
                if (std::min(alpha, beta) <= eps * eps * fro2) continue;
                rotated = true;
                double c, s, t;
                rotation(alpha, beta, ag, c, s, t);
                S ph = unit_phase(gamma);
                rotate_columns(g, p, q, ph, c, s);
                rotate_columns(v, p, q, ph, c, s);
            }
        }
        converged = !rotated;
    }
    if (!converged) throw NoConvergence("small_svd: sweep cap reached");

    RVec sigma(k);
    for (Eigen::Index j = 0; j < k; ++j) sigma(j) = g.col(j).norm();
    std::vector<Eigen::Index> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return sigma(a) > sigma(b); });

    SvdFactors out;
    out.sigma.resize(k);
    out.u = Mat::Zero(g.rows(), k);
    out.w = Mat::Zero(k, k);
    const double smax = k > 0 ? sigma(order[0]) : 0.0;
    const double tiny = smax * 1e-300 + std::numeric_limits<double>::min();
    std::vector<Eigen::Index> empty;
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index src = order[j];
        out.sigma(j) = sigma(src);
        out.w.col(j) = v.col(src).template cast<cplx>();
        if (sigma(src) > tiny) {
            out.u.col(j) = (g.col(src) / sigma(src)).template cast<cplx>();
        } else {
            empty.push_back(j);
        }
    }
    // Complete u for zero singular values.
    for (Eigen::Index j : empty) {
        for (Eigen::Index e = 0; e < g.rows(); ++e) {
            Vec cand = Vec::Unit(g.rows(), e);
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index i = 0; i < k; ++i) {
                    if (out.u.col(i).squaredNorm() == 0.0) continue;
                    cand -= out.u.col(i) * out.u.col(i).dot(cand);
                }
            }
            double nrm = cand.norm();
            if (nrm > 0.5) {
                out.u.col(j) = cand / nrm;
                break;
            }
        }
    }
    return out;
}

template <typename S>
HermitianEig jacobi_eig(MatT<S> h, int max_sweeps) {
    const Eigen::Index n = h.rows();
    MatT<S> v = MatT<S>::Identity(n, n);
    const double fro = h.norm();
    const double target = 1e-15 * fro;

    auto off_norm = [&]() {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                if (i != j) acc += abs2(h(i, j));
        return std::sqrt(acc);
    };

    bool converged = n <= 1 || fro == 0.0 || off_norm() <= target;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                S hpq = h(p, q);
                double b = std::abs(hpq);
                if (b <= 1e-18 * fro) continue;
                double a = std::real(h(p, p));
                double d = std::real(h(q, q));
                // Skip rotations that would not change the diagonal in floating point.
                if (std::abs(a) + 1e3 * b == std::abs(a) && std::abs(d) + 1e3 * b == std::abs(d)) {
                    h(p, q) = S(0);
                    h(q, p) = S(0);
                    continue;
                }
                double c, s, t;
                rotation(a, d, b, c, s, t);
                S ph = unit_phase(hpq);
                // Columns p,q of H*J, then mirror into rows using hermiticity.
                rotate_columns(h, p, q, ph, c, s);
                rotate_columns(v, p, q, ph, c, s);
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    h(p, i) = conj_of(h(i, p));
                    h(q, i) = conj_of(h(i, q));
                }
                h(p, p) = S(a - t * b);
                h(q, q) = S(d + t * b);
                h(p, q) = S(0);
                h(q, p) = S(0);
            }
        }
        converged = off_norm() <= target;
    }
    if (!converged) throw NoConvergence("hermitian_eig: sweep cap reached");

    RVec vals(n);
    for (Eigen::Index i = 0; i < n; ++i) vals(i) = std::real(h(i, i));
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return vals(a) < vals(b); });
    HermitianEig out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values(j) = vals(order[j]);
        out.vectors.col(j) = v.col(order[j]).template cast<cplx>();
    }
    return out;
}

}  // namespace

void require_finite(const Mat& m, const char* what) {
    if (!m.allFinite()) throw NonFiniteEntry(std::string(what) + ": non-finite entry");
}

bool is_real(const Mat& m) {
    return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0;
}

double default_rank_tol(Eigen::Index rows) {
    return 1e-12 * std::sqrt(static_cast<double>(std::max<Eigen::Index>(rows, 1)));
}

QrResult qr_orthonormalize(const Mat& m, double rank_tol) {
    if (m.cols() < 1) throw InvalidArgument("qr_orthonormalize: no columns");
    if (!(rank_tol > 0.0)) throw InvalidArgument("qr_orthonormalize: rank_tol must be positive");
    require_finite(m, "qr_orthonormalize");

    double ref = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) ref = std::max(ref, m.col(j).norm());
    if (ref < rank_tol) throw AllColumnsNegligible("qr_orthonormalize: every column is negligible");

    Mat q(m.rows(), std::min(m.rows(), m.cols()));
    int rank = 0;
    for (Eigen::Index j = 0; j < m.cols() && rank < m.rows(); ++j) {
        Vec v = m.col(j);
        for (int pass = 0; pass < 2 && rank > 0; ++pass) {
            Vec coef = q.leftCols(rank).adjoint() * v;
            v.noalias() -= q.leftCols(rank) * coef;
        }
        double r = v.norm();
        if (r < rank_tol * ref) continue;
        q.col(rank++) = v / r;
    }
    QrResult out;
    out.q = q.leftCols(rank);
    out.rank = rank;
    return out;
}

SvdFactors small_svd(const Mat& a, int max_sweeps) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw DimensionMismatch("small_svd: expected a nonempty square matrix");
    require_finite(a, "small_svd");
    if (is_real(a)) return jacobi_svd<double>(a.real(), max_sweeps);
    return jacobi_svd<cplx>(a, max_sweeps);
}

HermitianEig hermitian_eig(const Mat& h, int max_sweeps) {
    if (h.rows() != h.cols()) throw DimensionMismatch("hermitian_eig: matrix is not square");
    require_finite(h, "hermitian_eig");
    // Frobenius proxy for the 2-norm hermiticity test.
    double skew = (h - h.adjoint()).norm();
    if (skew > 1e-12 * h.norm()) throw NotHermitian("hermitian_eig: input is not Hermitian");
    Mat sym = (h + h.adjoint()) * 0.5;
    if (is_real(sym)) return jacobi_eig<double>(sym.real(), max_sweeps);
    return jacobi_eig<cplx>(sym, max_sweeps);
}

double two_norm_estimate(const LinearOp& apply, const LinearOp& apply_adjoint, Eigen::Index cols,
                         int iters, std::uint64_t seed) {
    if (iters < 1) throw InvalidArgument("two_norm_estimate: iters must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int attempt = 0; attempt < 3; ++attempt) {
        Vec x(cols);
        for (Eigen::Index i = 0; i < cols; ++i) x(i) = gauss(rng);
        x.normalize();
        double est = 0.0;
        bool zero = false;
        for (int it = 0; it < iters; ++it) {
            Vec y = apply(x);
            est = y.norm();
            if (est == 0.0) {
                zero = true;
                break;
            }
            Vec z = apply_adjoint(y);
            double zn = z.norm();
            if (zn == 0.0) break;
            x = z / zn;
        }
        if (!zero) return est;
    }
    throw ZeroOperator("two_norm_estimate: operator maps start vectors to zero");
}

double two_norm_estimate(const Mat& a, int iters, std::uint64_t seed) {
    return two_norm_estimate([&](const Vec& x) -> Vec { return a * x; },
                             [&](const Vec& y) -> Vec { return a.adjoint() * y; }, a.cols(), iters,
                             seed);
}

double spectral_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    if (a.rows() == a.cols()) return small_svd(a).sigma(0);
    Mat g = a.cols() <= a.rows() ? Mat(a.adjoint() * a) : Mat(a * a.adjoint());
    g = (g + g.adjoint()).eval() * 0.5;
    double top = hermitian_eig(g).values.maxCoeff();
    return std::sqrt(std::max(top, 0.0));
}

}  // namespace feast
