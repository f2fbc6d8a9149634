#include "feastsvd/oracle.hpp"
#include "feastsvd/errors.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <random>

namespace feast {

namespace {

// Lower Cholesky factor; throws when a pivot drops below tol.
Mat cholesky_lower(const Mat& g, double tol) {
    const Eigen::Index n = g.rows();
    Mat l = Mat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        cplx d = g(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * std::conj(l(j, k));
        if (!(d.real() >= tol)) throw BNotFullRank("B^*B Cholesky pivot " + std::to_string(d.real()) +
                                                   " below tolerance");
        double ljj = std::sqrt(d.real());
        l(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            cplx s = g(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

}  // namespace

Mat dense_acheck(const Mat& a) {
    const Eigen::Index m = a.rows(), n = a.cols();
    Mat h = Mat::Zero(m + n, m + n);
    h.topRightCorner(m, n) = a;
    h.bottomLeftCorner(n, m) = a.adjoint();
    return h;
}

Mat dense_bcheck(const Mat& a, const std::optional<Mat>& b) {
    const Eigen::Index m = a.rows(), n = a.cols();
    Mat bc = Mat::Identity(m + n, m + n);
    if (b) bc.bottomRightCorner(n, n) = b->adjoint() * (*b);
    return bc;
}

DenseGsvdReference dense_gsvd_reference(const Mat& a, const std::optional<Mat>& b) {
    const Eigen::Index m = a.rows(), n = a.cols();
    if (b && b->cols() != n) throw DimensionMismatch("dense_gsvd_reference: A and B column counts differ");
    Mat lb = Mat::Identity(n, n);
    if (b) {
        Mat btb = b->adjoint() * (*b);
        double scale = btb.cwiseAbs().colwise().sum().maxCoeff();
        lb = cholesky_lower(btb, 1e-13 * scale);
    }
    // A L_b^{-*}
    Mat alb = lb.triangularView<Eigen::Lower>().solve(a.adjoint()).adjoint();
    Mat h = dense_acheck(alb);
    HermitianEig eig = hermitian_eig(h);

    DenseGsvdReference ref;
    ref.pencil_eigs = eig.values;
    ref.sigma.resize(n);
    ref.u.resize(m, n);
    ref.w.resize(n, n);
    const double root2 = std::sqrt(2.0);
    // Top n eigenvalues, stored ascending.
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index src = m + i;
        ref.sigma(i) = eig.values(src);
        Vec y = eig.vectors.col(src);
        ref.u.col(i) = root2 * y.head(m);
        ref.w.col(i) = root2 * lb.adjoint().triangularView<Eigen::Upper>().solve(y.tail(n));
    }
    ref.v = b ? Mat((*b) * ref.w) : ref.w;
    ref.c.resize(n);
    ref.s.resize(n);
    ref.x.resize(n, n);
    ref.residual_a.resize(n);
    ref.residual_b.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sg = std::max(ref.sigma(i), 0.0);
        ref.s(i) = 1.0 / std::sqrt(1.0 + sg * sg);
        ref.c(i) = sg * ref.s(i);
        ref.x.col(i) = ref.w.col(i) * ref.s(i);
        ref.residual_a(i) = (a * ref.x.col(i) - ref.u.col(i) * ref.c(i)).norm();
        Vec bx = b ? Vec((*b) * ref.x.col(i)) : Vec(ref.x.col(i));
        ref.residual_b(i) = (bx - ref.v.col(i) * ref.s(i)).norm();
    }
    return ref;
}

int count_in_interval(const DenseGsvdReference& ref, double alpha, double beta) {
    int count = 0;
    for (Eigen::Index i = 0; i < ref.sigma.size(); ++i)
        if (ref.sigma(i) > alpha && ref.sigma(i) < beta) ++count;
    return count;
}

Mat random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    if (cols > rows) throw InvalidArgument("random_orthonormal: more columns than rows");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    RMat g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<RMat> qr(g);
    RMat q = qr.householderQ() * RMat::Identity(rows, cols);
    return q.cast<cplx>();
}

SyntheticGsvd make_synthetic_gsvd(Eigen::Index m, Eigen::Index p, Eigen::Index n, const RVec& sigma,
                                  double cond_x, std::uint64_t seed) {
    if (sigma.size() != n) throw DimensionMismatch("make_synthetic_gsvd: need n generalized singular values");
    if (m < n || p < n) throw DimensionMismatch("make_synthetic_gsvd: need m >= n and p >= n");
    if (!(cond_x >= 1.0)) throw InvalidArgument("make_synthetic_gsvd: cond_x must be >= 1");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(sigma(i) > 0.0)) throw InvalidArgument("make_synthetic_gsvd: sigma must be positive");

    SyntheticGsvd g;
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return sigma(x) < sigma(y); });
    g.sigma.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) g.sigma(i) = sigma(order[i]);

    g.u = random_orthonormal(m, n, seed * 4 + 1);
    g.v = random_orthonormal(p, n, seed * 4 + 2);
    Mat q1 = random_orthonormal(n, n, seed * 4 + 3);
    Mat q2 = random_orthonormal(n, n, seed * 4 + 4);
    RVec sv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double frac = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        sv(i) = std::pow(cond_x, -frac);
    }
    g.x = q1 * sv.cast<cplx>().asDiagonal() * q2.adjoint();
    Mat xinv = q2 * sv.cwiseInverse().cast<cplx>().asDiagonal() * q1.adjoint();

    g.c.resize(n);
    g.s.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g.s(i) = 1.0 / std::sqrt(1.0 + g.sigma(i) * g.sigma(i));
        g.c(i) = g.sigma(i) * g.s(i);
    }
    g.a = g.u * g.c.cast<cplx>().asDiagonal() * xinv;
    g.b = g.v * g.s.cast<cplx>().asDiagonal() * xinv;
    g.w = g.x * g.s.cwiseInverse().cast<cplx>().asDiagonal();
    return g;
}

GuessKind parse_guess_kind(const std::string& s) {
    if (s == "eq1" || s == "artificial1") return GuessKind::Eq1;
    if (s == "eq2" || s == "artificial2") return GuessKind::Eq2;
    if (s == "eq3" || s == "artificial3") return GuessKind::Eq3;
    throw UnknownVariant("unknown artificial guess '" + s + "'");
}

SubspacePair make_artificial_guess(const Mat& u_true, const Mat& w_true, Eigen::Index ell, GuessKind kind,
                                   int q, std::uint64_t seed) {
    const Eigen::Index m = u_true.rows(), n = w_true.rows(), k = u_true.cols();
    if (w_true.cols() != k) throw DimensionMismatch("make_artificial_guess: U and W column counts differ");
    if (ell < k) throw InvalidArgument("make_artificial_guess: ell must be >= k");
    if (kind == GuessKind::Eq3 && (q < 2 || q > 12 || q % 2 != 0))
        throw InvalidArgument("make_artificial_guess: q must be one of 2,4,...,12");

    Mat plus(m + n, k), minus(m + n, k);
    plus << u_true, w_true;
    minus << u_true, -w_true;
    Mat base;
    double noise = 1e-12;
    switch (kind) {
        case GuessKind::Eq1: base = minus; break;
        case GuessKind::Eq2: base = plus + (1.0 - 1e-10) * minus; break;
        case GuessKind::Eq3:
            base = plus;
            noise = std::pow(10.0, -q);
            break;
    }
    Mat block(m + n, ell);
    block.leftCols(k) = base;
    if (ell > k) block.rightCols(ell - k) = random_orthonormal(m + n, ell - k, seed * 3 + 1);
    Mat z = block * random_orthonormal(ell, ell, seed * 3 + 2) +
            noise * std::sqrt(static_cast<double>(m)) * random_orthonormal(m + n, ell, seed * 3 + 3);
    SubspacePair pair;
    pair.u = z.topRows(m);
    pair.w = z.bottomRows(n);
    pair.orthonormalized = false;
    return pair;
}

Mat dense_filter_matrix(const Mat& a, const std::optional<Mat>& b, const EllipseContour& contour) {
    Mat ah = dense_acheck(a);
    Mat bh = dense_bcheck(a, b);
    Mat p = Mat::Zero(ah.rows(), ah.cols());
    for (const auto& nd : contour.nodes) {
        Eigen::PartialPivLU<Mat> lu(nd.xi * bh - ah);
        p += nd.omega * lu.solve(bh);
    }
    return p;
}

}  // namespace feast
