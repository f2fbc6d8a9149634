#include "feastsvd/diagnostics.hpp"
#include "feastsvd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace feast {

namespace {

constexpr double kSlack = 1e-10;

bool within(double value, double bound) { return value <= bound * (1.0 + kSlack) + 1e-14; }

// (H)^{-1/2} for Hermitian positive definite H.
Mat inv_sqrt(const Mat& h) {
    HermitianEig e = hermitian_eig(h);
    RVec d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(e.values(i) > 0.0)) throw NotPsd("inverse square root of a singular Gram matrix");
        d(i) = 1.0 / std::sqrt(e.values(i));
    }
    return e.vectors * d.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

Mat inverse(const Mat& x, const char* what) {
    SvdFactors f = small_svd(x);
    const Eigen::Index n = f.sigma.size();
    if (n == 0 || !(f.sigma(n - 1) > 1e-12 * f.sigma(0)))
        throw SingularLeadingBlock(std::string(what) + " is singular");
    return f.w * f.sigma.cwiseInverse().cast<cplx>().asDiagonal() * f.u.adjoint();
}

// Unitary polar factor of a square matrix.
Mat polar_unitary(const Mat& x) {
    SvdFactors f = small_svd(x);
    return f.u * f.w.adjoint();
}

double norm2(const Mat& x) { return x.size() == 0 ? 0.0 : spectral_norm(x); }

struct MagnitudeEig {
    RVec lambda;  // by decreasing |lambda|
    Mat u;
};

MagnitudeEig sort_by_magnitude(const Mat& a) {
    HermitianEig e = hermitian_eig(a);
    const Eigen::Index n = e.values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return std::abs(e.values(i)) > std::abs(e.values(j));
    });
    MagnitudeEig out;
    out.lambda.resize(n);
    out.u.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.lambda(i) = e.values(order[static_cast<std::size_t>(i)]);
        out.u.col(i) = e.vectors.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

Mat diag_c(const RVec& d) { return d.cast<cplx>().asDiagonal(); }

}  // namespace

double tan_angle(const Mat& u, const Mat& x) {
    if (u.rows() != x.rows()) throw DimensionMismatch("tan_angle: row counts differ");
    if (x.cols() == 0) return 0.0;
    const double tol = default_rank_tol(x.rows());
    Mat qu = qr_orthonormalize(u, tol).q;
    Mat qx = qr_orthonormalize(x, tol).q;
    if (qx.cols() > qu.cols()) return std::numeric_limits<double>::infinity();
    Mat c = qu.adjoint() * qx;
    Mat s = qx - qu * c;
    // Right singular vectors of C also diagonalize S^*S, so the ratio per direction is s_j / c_j.
    HermitianEig e = hermitian_eig(Mat((c.adjoint() * c + (c.adjoint() * c).adjoint()) * 0.5));
    Mat cz = c * e.vectors;
    Mat sz = s * e.vectors;
    double t = 0.0;
    for (Eigen::Index j = 0; j < cz.cols(); ++j) {
        double cj = cz.col(j).norm();
        double sj = sz.col(j).norm();
        if (cj == 0.0) return std::numeric_limits<double>::infinity();
        t = std::max(t, sj / cj);
    }
    return t;
}

LemmaReport lemma0_check(const Mat& m_psd) {
    if (m_psd.rows() != m_psd.cols()) throw DimensionMismatch("lemma0_check: matrix is not square");
    HermitianEig e = hermitian_eig(m_psd);
    const double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
    if (e.values.size() > 0 && e.values.minCoeff() < -1e-12 * scale) throw NotPsd("lemma0_check: matrix is not PSD");
    RVec f(e.values.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = 1.0 / std::sqrt(1.0 + std::max(e.values(i), 0.0)) - 1.0;
    Mat d = e.vectors * diag_c(f) * e.vectors.adjoint();
    LemmaReport r;
    r.lhs = norm2(d);
    r.rhs = 0.5 * (e.values.size() ? std::max(e.values.maxCoeff(), 0.0) : 0.0);
    r.holds = r.lhs <= r.rhs + 1e-12;
    return r;
}

SubspaceAngleReport thm1_block_check(const Mat& a, const Mat& x, Eigen::Index k) {
    const Eigen::Index n = a.rows(), l = x.cols();
    if (a.cols() != n || x.rows() != n) throw DimensionMismatch("thm1_block_check: shape mismatch");
    if (k < 1 || k > l || l >= n) throw InvalidArgument("thm1_block_check: need 1 <= k <= l < n");
    MagnitudeEig me = sort_by_magnitude(a);
    const double top = std::abs(me.lambda(0));
    if (!(std::abs(me.lambda(l - 1)) - std::abs(me.lambda(l)) > 1e-12 * top))
        throw DegenerateSplit("thm1_block_check: |lambda_l| must exceed |lambda_{l+1}|");

    Mat coords = me.u.adjoint() * x;
    Mat x1 = coords.topRows(l);
    Mat x2 = coords.bottomRows(n - l);
    Mat x3 = x2 * inverse(x1, "X1");

    RVec lam_l = me.lambda.head(l);
    RVec lam_perp = me.lambda.tail(n - l);
    // Lambda_perp X3 Lambda_l^{-1}
    Mat g = diag_c(lam_perp) * x3 * diag_c(lam_l.cwiseInverse());
    Mat b(n, l);
    b.topRows(l) = Mat::Identity(l, l);
    b.bottomRows(n - l) = g;

    SubspaceAngleReport r;
    r.eta_tilde = norm2(g.leftCols(k));
    r.eta_hat = l > k ? norm2(g.rightCols(l - k)) : 0.0;

    Mat bk = b.leftCols(k);
    Mat qk = bk * inv_sqrt(bk.adjoint() * bk);
    Mat e11 = qk.topRows(k) - Mat::Identity(k, k);
    Mat e21 = qk.middleRows(k, l - k);
    Mat f1 = qk.bottomRows(n - l);

    Mat q(n, l);
    q.leftCols(k) = qk;
    Mat e12, e22, f2;
    if (l > k) {
        Mat c = b.rightCols(l - k) - qk * (qk.adjoint() * b.rightCols(l - k));
        Mat ql = c * inv_sqrt(c.adjoint() * c);
        q.rightCols(l - k) = ql;
        e12 = ql.topRows(k);
        e22 = ql.middleRows(k, l - k) - Mat::Identity(l - k, l - k);
        f2 = ql.bottomRows(n - l);
    }

    r.e11 = norm2(e11);
    r.e21 = norm2(e21);
    r.f1 = norm2(f1);
    r.e12 = norm2(e12);
    r.e22 = norm2(e22);
    r.f2 = norm2(f2);
    const double et = r.eta_tilde, eh = r.eta_hat;
    r.e11_ok = within(r.e11, 0.5 * et * et);
    r.e21_ok = r.e21 <= 1e-14;
    r.f1_ok = within(r.f1, et);
    r.e12_ok = within(r.e12, et * eh);
    r.e22_ok = within(r.e22, 0.5 * eh * eh);
    r.f2_ok = within(r.f2, eh);

    Mat ax = a * x;
    r.span_residual = tan_angle(me.u * q, ax);
    r.tan_angle = tan_angle(me.u.leftCols(l), ax);
    return r;
}

PerturbationReport perturbation_check(const RVec& lambda, const Mat& dh, Eigen::Index k, double delta) {
    const Eigen::Index l = lambda.size();
    if (dh.rows() != l || dh.cols() != l) throw DimensionMismatch("perturbation_check: shape mismatch");
    if (k < 1 || k >= l) throw InvalidArgument("perturbation_check: need 1 <= k < l");
    if (!(delta > 0.0)) throw InvalidArgument("perturbation_check: delta must be positive");

    const double alpha = lambda.head(k).minCoeff();
    const double beta = lambda.head(k).maxCoeff();
    Mat h = diag_c(lambda) + dh;
    HermitianEig e = hermitian_eig(h);

    // The l-k eigenvectors weighted most on the trailing coordinates form the trailing group.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(l));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return e.vectors.col(i).tail(l - k).norm() < e.vectors.col(j).tail(l - k).norm();
    });
    Mat q(l, l);
    for (Eigen::Index j = 0; j < l; ++j) q.col(j) = e.vectors.col(order[static_cast<std::size_t>(j)]);
    for (Eigen::Index j = k; j < l; ++j) {
        double theta = e.values(order[static_cast<std::size_t>(j)]);
        if (theta > alpha - delta && theta < beta + delta)
            throw SplitViolated("perturbation_check: trailing Ritz value inside the enlarged interval");
    }

    PerturbationReport r;
    r.epsilon = norm2(dh.leftCols(k)) / delta;
    Mat q11 = q.topLeftCorner(k, k), q12 = q.topRightCorner(k, l - k);
    Mat q21 = q.bottomLeftCorner(l - k, k), q22 = q.bottomRightCorner(l - k, l - k);
    r.d11 = norm2(q11 - polar_unitary(q11));
    r.d22 = norm2(q22 - polar_unitary(q22));
    r.d12 = norm2(q12);
    r.d21 = norm2(q21);
    const double eps = r.epsilon;
    r.d11_ok = within(r.d11, eps * eps);
    r.d22_ok = within(r.d22, eps * eps);
    r.d12_ok = within(r.d12, eps);
    r.d21_ok = within(r.d21, eps);
    return r;
}

RateReport rate_check(const Mat& a, const Mat& x, Eigen::Index k, Eigen::Index ell) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || x.rows() != n || x.cols() != k) throw DimensionMismatch("rate_check: shape mismatch");
    if (k < 1 || ell < k || ell >= n) throw InvalidArgument("rate_check: need 1 <= k <= l < n");
    MagnitudeEig me = sort_by_magnitude(a);

    Mat coords = me.u.adjoint() * x;
    Mat xk = coords.topRows(k);
    Mat xlk = coords.middleRows(k, ell - k);
    Mat xperp = coords.bottomRows(n - ell);
    Mat xk_inv = inverse(xk, "X_k");
    const double lk = std::abs(me.lambda(k - 1));
    const double l_next = std::abs(me.lambda(ell));

    RateReport r;
    Mat uk = me.u.leftCols(k);
    r.tan_x = tan_angle(uk, x);
    r.lhs = tan_angle(uk, a * x);
    Mat lam_lk = diag_c(me.lambda.segment(k, ell - k)) * xlk;
    const double tail = norm2(lam_lk * xk_inv);
    r.rhs = l_next / lk * r.tan_x + tail / lk;
    r.holds = within(r.lhs, r.rhs);

    SvdFactors fk = small_svd(xk);
    r.kappa_xk = fk.sigma(0) / fk.sigma(k - 1);
    const double nperp = norm2(xperp);
    const double nlk = norm2(xlk);
    r.perp_ratio = nlk > 0.0 ? nperp / nlk : std::numeric_limits<double>::infinity();
    r.ratio = r.tan_x > 0.0 ? r.lhs / r.tan_x : 0.0;
    if (nperp > 0.0 && r.tan_x > 0.0) {
        r.rate3_rhs = l_next / lk + r.kappa_xk * norm2(lam_lk) / (lk * nperp);
        r.rate3_holds = within(r.ratio, r.rate3_rhs);
    } else {
        r.rate3_rhs = std::numeric_limits<double>::infinity();
        r.rate3_holds = true;
    }
    return r;
}

}  // namespace feast
