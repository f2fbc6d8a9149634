#include "feastsvd/oracle.hpp"
#include "feastsvd/trace.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace feast;

TEST(TraceEstimate, DiagonalSvd) {
    SparsePencil p = SparsePencil::svd(test::diag_sparse({1.0, 2.0, 3.0}));
    FactorizationCache cache(p);
    // Single-probe std is about 1 here, so the 30-probe mean has std near 0.18.
    TraceEstimate t = estimate_count_svd(cache, build_ellipse(1.5, 2.5, 1.0), 30, 4);
    EXPECT_EQ(t.samples, 30);
    EXPECT_EQ(t.values.size(), 30u);
    EXPECT_GE(t.k_hat, 0.8);
    EXPECT_LE(t.k_hat, 1.2);

    TraceEstimate none = estimate_count_svd(cache, build_ellipse(3.5, 4.5), 30, 1);
    EXPECT_LE(std::abs(none.k_hat), 0.2);
}

TEST(TraceEstimate, MeanOverSeedsApproachesCount) {
    SparsePencil p = SparsePencil::svd(test::diag_sparse({1.0, 2.0, 3.0, 4.0, 5.0}));
    FactorizationCache cache(p);
    EllipseContour c = build_ellipse(1.5, 4.5);
    double sum = 0;
    for (std::uint64_t s = 0; s < 20; ++s) sum += estimate_count(cache, c, 30, s).k_hat;
    EXPECT_NEAR(sum / 20, 3.0, 0.2);
}

TEST(TraceEstimate, GsvdWithIdentityMatchesSvd) {
    Mat a = test::random_real(10, 7, 2);
    SparsePencil ps = SparsePencil::svd(SparseMatrix::from_dense(a));
    SparsePencil pg = SparsePencil::gsvd(SparseMatrix::from_dense(a), SparseMatrix::from_dense(Mat::Identity(7, 7)));
    FactorizationCache cs(ps), cg(pg);
    EllipseContour c = build_ellipse(0.5, 2.5);
    TraceEstimate ts = estimate_count_svd(cs, c, 12, 4);
    TraceEstimate tg = estimate_count_gsvd(cg, c, 12, 4);
    EXPECT_NEAR(ts.k_hat, tg.k_hat, 1e-12);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(ts.values[i], tg.values[i], 1e-12);
}

TEST(TraceEstimate, GsvdTwoInside) {
    RVec sigma(8);
    sigma << 0.2, 0.4, 0.6, 1.3, 1.7, 3.0, 5.0, 8.0;
    SyntheticGsvd g = make_synthetic_gsvd(20, 18, 8, sigma, 5.0, 3);
    SparsePencil p = SparsePencil::gsvd(SparseMatrix::from_dense(g.a), SparseMatrix::from_dense(g.b));
    FactorizationCache cache(p);
    EllipseContour c = build_ellipse(1.0, 2.0);
    double sum = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        TraceEstimate t = estimate_count_gsvd(cache, c, 30, s, false);
        sum += t.k_hat;
        for (double im : t.imag_parts) EXPECT_LE(std::abs(im), 1e-8 * static_cast<double>(p.m() + p.p()));
    }
    EXPECT_GE(sum / 10, 1.5);
    EXPECT_LE(sum / 10, 2.5);
}

TEST(AutoSubspace, Rule) {
    EXPECT_EQ(auto_subspace_size(8.42), 18);
    EXPECT_EQ(auto_subspace_size(0.0), 5);
    EXPECT_EQ(auto_subspace_size(16.47), 30);
    EXPECT_EQ(auto_subspace_size(-0.3), 5);
}
