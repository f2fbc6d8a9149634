#include "feastsvd/dense.hpp"
#include "feastsvd/errors.hpp"
#include "helpers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <cmath>

using namespace feast;
using feast::test::orth_error;
using feast::test::random_complex;
using feast::test::random_real;

TEST(QrOrthonormalize, IdentityStaysIdentity) {
    QrResult r = qr_orthonormalize(Mat::Identity(3, 3), 1e-12);
    EXPECT_EQ(r.rank, 3);
    EXPECT_LE((r.q - Mat::Identity(3, 3)).norm(), 1e-15);
}

TEST(QrOrthonormalize, DropsDependentColumn) {
    Mat m = Mat::Zero(4, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 2.0;
    QrResult r = qr_orthonormalize(m, 1e-12);
    EXPECT_EQ(r.rank, 1);
    EXPECT_NEAR(std::abs(r.q(0, 0)), 1.0, 1e-15);
}

TEST(QrOrthonormalize, RandomMatchesHouseholderSpan) {
    Mat m = random_real(20, 5, 7);
    QrResult r = qr_orthonormalize(m, default_rank_tol(20));
    EXPECT_EQ(r.rank, 5);
    EXPECT_LE(orth_error(r.q), 1e-13);
    // Same span as the Householder QR factor.
    Eigen::HouseholderQR<Mat> hh(m);
    Mat qh = hh.householderQ() * Mat::Identity(20, 5);
    EXPECT_LE((r.q - qh * (qh.adjoint() * r.q)).norm(), 1e-12);
}

TEST(QrOrthonormalize, RejectsBadInput) {
    EXPECT_THROW(qr_orthonormalize(Mat::Zero(3, 2), 1e-12), AllColumnsNegligible);
    Mat bad = Mat::Identity(2, 2);
    bad(0, 1) = std::nan("");
    EXPECT_THROW(qr_orthonormalize(bad, 1e-12), NonFiniteEntry);
}

TEST(SmallSvd, Diagonal) {
    Mat a = Mat::Zero(3, 3);
    a(0, 0) = 3;
    a(1, 1) = 1;
    a(2, 2) = 2;
    SvdFactors f = small_svd(a);
    EXPECT_NEAR(f.sigma(0), 3, 1e-15);
    EXPECT_NEAR(f.sigma(1), 2, 1e-15);
    EXPECT_NEAR(f.sigma(2), 1, 1e-15);
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(f.u.col(i).cwiseAbs().maxCoeff(), 1.0, 1e-15);
}

TEST(SmallSvd, SwapMatrix) {
    Mat a(2, 2);
    a << 0, 1, 1, 0;
    SvdFactors f = small_svd(a);
    EXPECT_NEAR(f.sigma(0), 1, 1e-15);
    EXPECT_NEAR(f.sigma(1), 1, 1e-15);
}

TEST(SmallSvd, RandomAgainstHermitianEigAndEigen) {
    Mat a = random_complex(8, 8, 11);
    SvdFactors f = small_svd(a);
    HermitianEig e = hermitian_eig(Mat(a.adjoint() * a));
    Eigen::JacobiSVD<Mat> ref(a);
    for (Eigen::Index i = 0; i < 8; ++i) {
        EXPECT_NEAR(f.sigma(i), std::sqrt(e.values(7 - i)), 1e-12 * f.sigma(0));
        EXPECT_NEAR(f.sigma(i), ref.singularValues()(i), 1e-12 * f.sigma(0));
    }
    EXPECT_LE(orth_error(f.u), 1e-13 * 8);
    EXPECT_LE(orth_error(f.w), 1e-13 * 8);
}

TEST(SmallSvd, ReconstructionOverSeeds) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Eigen::Index k = 1 + static_cast<Eigen::Index>(seed % 12);
        Mat a = seed % 2 ? random_complex(k, k, seed) : random_real(k, k, seed);
        SvdFactors f = small_svd(a);
        Mat rec = f.u * f.sigma.cast<cplx>().asDiagonal() * f.w.adjoint();
        ASSERT_LE(spectral_norm(rec - a), 1e-13 * static_cast<double>(k) * f.sigma(0)) << "seed " << seed;
        for (Eigen::Index i = 1; i < k; ++i) ASSERT_GE(f.sigma(i - 1), f.sigma(i));
        ASSERT_GE(f.sigma(k - 1), 0.0);
    }
}

TEST(SmallSvd, RankDeficientCompletesU) {
    Mat a = Mat::Zero(3, 3);
    a(0, 0) = 2.0;
    SvdFactors f = small_svd(a);
    EXPECT_NEAR(f.sigma(0), 2.0, 1e-15);
    EXPECT_EQ(f.sigma(2), 0.0);
    EXPECT_LE(orth_error(f.u), 1e-14);
}

TEST(HermitianEig, Diagonal) {
    Mat h = Mat::Zero(3, 3);
    h(0, 0) = -1;
    h(2, 2) = 4;
    HermitianEig e = hermitian_eig(h);
    EXPECT_DOUBLE_EQ(e.values(0), -1);
    EXPECT_DOUBLE_EQ(e.values(1), 0);
    EXPECT_DOUBLE_EQ(e.values(2), 4);
    EXPECT_LE((e.vectors.cwiseAbs() - Mat::Identity(3, 3).cwiseAbs()).norm(), 1e-15);
}

TEST(HermitianEig, JordanWielandtPair) {
    Mat h(2, 2);
    h << 0, 2.5, 2.5, 0;
    HermitianEig e = hermitian_eig(h);
    EXPECT_NEAR(e.values(0), -2.5, 1e-15);
    EXPECT_NEAR(e.values(1), 2.5, 1e-15);
}

TEST(HermitianEig, RandomTraceAndEigenOracle) {
    Mat g = random_complex(10, 10, 3);
    Mat h = g + g.adjoint();
    HermitianEig e = hermitian_eig(h);
    EXPECT_NEAR(e.values.sum(), h.trace().real(), 1e-12 * h.norm());
    Eigen::SelfAdjointEigenSolver<Mat> ref(h);
    EXPECT_LE((e.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12 * h.norm());
    Mat res = h * e.vectors - e.vectors * e.values.cast<cplx>().asDiagonal();
    EXPECT_LE(res.norm(), 1e-12 * h.norm());
}

TEST(HermitianEig, PencilPairing) {
    Mat a = random_real(6, 4, 21);
    Mat h = Mat::Zero(10, 10);
    h.topRightCorner(6, 4) = a;
    h.bottomLeftCorner(4, 6) = a.adjoint();
    HermitianEig e = hermitian_eig(h);
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(e.values(i), -e.values(9 - i), 1e-12);
    for (Eigen::Index i = 4; i < 6; ++i) EXPECT_NEAR(e.values(i), 0.0, 1e-12);
}

TEST(HermitianEig, RejectsNonHermitian) {
    Mat h(2, 2);
    h << 1, 2, 0, 1;
    EXPECT_THROW(hermitian_eig(h), NotHermitian);
}

TEST(TwoNorm, Estimates) {
    Mat d = Mat::Zero(3, 3);
    d(0, 0) = 1;
    d(1, 1) = 2;
    d(2, 2) = 5;
    EXPECT_NEAR(two_norm_estimate(d, 20), 5.0, 0.05);
    EXPECT_NEAR(two_norm_estimate(Mat::Identity(4, 4), 1), 1.0, 1e-15);
    Mat r = random_real(100, 50, 5);
    Eigen::JacobiSVD<Mat> ref(r);
    EXPECT_NEAR(two_norm_estimate(r, 20), ref.singularValues()(0), 0.02 * ref.singularValues()(0));
    EXPECT_THROW(two_norm_estimate(Mat::Zero(3, 3), 5), ZeroOperator);
}
