#include "feastsvd/diagnostics.hpp"
#include "feastsvd/driver.hpp"
#include "feastsvd/errors.hpp"
#include "feastsvd/oracle.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace feast;

namespace {

SparsePencil diag_range(int n) {
    std::vector<double> d;
    for (int i = 1; i <= n; ++i) d.push_back(i);
    return SparsePencil::svd(test::diag_sparse(d));
}

}  // namespace

TEST(RayleighRitz, InvariantPair) {
    SparsePencil p = diag_range(3);
    Mat e = Mat::Identity(3, 3);
    SubspacePair pair{e.leftCols(2), e.leftCols(2), true};
    RitzResult rr = rayleigh_ritz(p, pair);
    EXPECT_DOUBLE_EQ(rr.sigma(0), 2.0);
    EXPECT_DOUBLE_EQ(rr.sigma(1), 1.0);
    EXPECT_NEAR(std::abs(rr.pair.u(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(rr.pair.w(0, 1)), 1.0, 1e-15);
    pair.orthonormalized = false;
    EXPECT_THROW(rayleigh_ritz(p, pair), NotOrthonormalized);
}

TEST(RayleighRitz, GalerkinDiagonal) {
    Mat a = test::random_real(10, 6, 1);
    SparsePencil p = SparsePencil::svd(SparseMatrix::from_dense(a));
    SubspacePair pair{random_orthonormal(10, 4, 2), random_orthonormal(6, 4, 3), true};
    RitzResult rr = rayleigh_ritz(p, pair);
    Mat g = rr.pair.u.adjoint() * a * rr.pair.w;
    Mat off = g - Mat(g.diagonal().asDiagonal());
    EXPECT_LE(off.norm(), 1e-13 * spectral_norm(a));
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(g(i, i).real(), rr.sigma(i), 1e-13 * spectral_norm(a));
}

TEST(RayleighRitz, GsvdExactVectors) {
    RVec sigma(5);
    sigma << 0.4, 0.8, 1.5, 2.0, 6.0;
    SyntheticGsvd g = make_synthetic_gsvd(9, 8, 5, sigma, 10.0, 6);
    SparsePencil p = SparsePencil::gsvd(SparseMatrix::from_dense(g.a), SparseMatrix::from_dense(g.b));
    SubspacePair pair{g.u.middleCols(1, 3), g.w.middleCols(1, 3), true};
    RitzResult rr = rayleigh_ritz(p, pair);
    EXPECT_NEAR(rr.sigma(0), 2.0, 1e-12 * 2.0);
    EXPECT_NEAR(rr.sigma(1), 1.5, 1e-12 * 1.5);
    EXPECT_NEAR(rr.sigma(2), 0.8, 1e-12 * 0.8);
}

TEST(BOrthonormalize, Cases) {
    SparsePencil p = SparsePencil::svd(SparseMatrix::from_dense(test::random_real(8, 5, 1)));
    SubspacePair orth{random_orthonormal(8, 3, 1), random_orthonormal(5, 3, 2), false};
    SubspacePair out = b_orthonormalize_pair(p, orth);
    EXPECT_TRUE(out.orthonormalized);
    EXPECT_LE((out.u - orth.u).norm(), 1e-14);
    EXPECT_LE((out.w - orth.w).norm(), 1e-14);

    Mat two = 2.0 * Mat::Identity(4, 4);
    SparsePencil g =
        SparsePencil::gsvd(SparseMatrix::from_dense(test::random_real(6, 4, 2)), SparseMatrix::from_dense(two));
    SubspacePair raw{random_orthonormal(6, 2, 3), random_orthonormal(4, 2, 4), false};
    SubspacePair gout = b_orthonormalize_pair(g, raw);
    EXPECT_LE((gout.w - 0.5 * raw.w).norm(), 1e-14);

    SubspacePair dup{test::random_real(8, 3, 5), test::random_real(5, 3, 6), false};
    dup.u.col(2) = dup.u.col(1);
    dup.w.col(2) = dup.w.col(1);
    SubspacePair dout = b_orthonormalize_pair(p, dup);
    EXPECT_EQ(dout.u.cols(), 2);
    EXPECT_EQ(dout.w.cols(), 2);
}

TEST(SelectComponents, Rules) {
    RVec s(6), r = RVec::Constant(6, 1e-3);
    s << 5.0, 1.9, 0.5, 1.2, 3.0, 0.1;
    EXPECT_EQ(select_components(s, r, 1.0, 2.0, 3), (std::vector<Eigen::Index>{1, 3, 2}));

    RVec in(4), rin(4);
    in << 1.1, 1.2, 1.3, 1.4;
    rin << 0.3, 0.1, 0.2, 0.4;
    EXPECT_EQ(select_components(in, rin, 1.0, 2.0, 2), (std::vector<Eigen::Index>{1, 2}));

    RVec eq(4);
    eq << 0.5, 2.5, 0.5, 2.5;
    EXPECT_EQ(select_components(eq, RVec::Zero(4), 1.0, 2.0, 4), (std::vector<Eigen::Index>{0, 1, 2, 3}));
}

TEST(CheckConvergence, ExactAndPerturbed) {
    SparsePencil p = diag_range(3);
    RVec s(3);
    s << 3, 2, 1;
    Mat u = Mat::Zero(3, 3);
    u(2, 0) = u(1, 1) = u(0, 2) = 1.0;
    ResidualCheck ok = check_convergence(p, s, u, u, 1e-12);
    for (bool f : ok.flags) EXPECT_TRUE(f);
    EXPECT_EQ(ok.rel.maxCoeff(), 0.0);

    Mat w = u;
    w(0, 0) = 1e-3;
    ResidualCheck bad = check_convergence(p, s, u, w, 1e-10);
    EXPECT_FALSE(bad.flags[0]);
    EXPECT_TRUE(bad.flags[1]);
    EXPECT_NEAR(bad.r1(0), 1e-3, 1e-15);
}

TEST(FeastGsvd, ConstructedPencil) {
    RVec sigma(4);
    sigma << 0.5, 1.0, 2.0, 4.0;
    SyntheticGsvd g = make_synthetic_gsvd(8, 6, 4, sigma, 10.0, 1);
    SparsePencil p = SparsePencil::gsvd(SparseMatrix::from_dense(g.a), SparseMatrix::from_dense(g.b));
    SolverOptions o;
    o.alpha = 0.8;
    o.beta = 2.5;
    SolveResult r = feast_gsvd(p, o);
    EXPECT_EQ(r.report.reason, StoppingReason::AllConverged);
    EXPECT_LE(r.report.iterations, 4);
    ASSERT_EQ(r.solution.size(), 2);
    EXPECT_NEAR(r.solution.sigma(0), 2.0, 1e-10);
    EXPECT_NEAR(r.solution.sigma(1), 1.0, 1e-10);
    for (bool c : r.solution.converged) EXPECT_TRUE(c);
    for (Eigen::Index i = 0; i < 2; ++i) {
        EXPECT_NEAR(r.solution.c(i) * r.solution.c(i) + r.solution.s(i) * r.solution.s(i), 1.0, 1e-14);
        EXPECT_LE(r.solution.recovery_a(i), 1e-10);
        EXPECT_LE(r.solution.recovery_b(i), 1e-10);
    }
    // x columns against the constructed right vectors for sigma = 2, 1.
    EXPECT_LE(tan_angle(g.x.col(2), r.solution.x.col(0)), 1e-8);
    EXPECT_LE(tan_angle(g.x.col(1), r.solution.x.col(1)), 1e-8);
}

TEST(FeastSvd, DiagonalCases) {
    SolverOptions o;
    o.alpha = 3.5;
    o.beta = 6.5;
    SolveResult r = feast_gsvd(diag_range(10), o);
    EXPECT_EQ(r.report.reason, StoppingReason::AllConverged);
    ASSERT_EQ(r.solution.size(), 3);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.solution.sigma(i), 6.0 - i, 1e-12);

    o.alpha = 1.5;
    o.beta = 2.5;
    SolveResult d3 = feast_gsvd(diag_range(3), o);
    ASSERT_EQ(d3.solution.size(), 1);
    EXPECT_NEAR(d3.solution.sigma(0), 2.0, 1e-13);
    EXPECT_NEAR(std::abs(d3.solution.u(1, 0)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(d3.solution.w(1, 0)), 1.0, 1e-12);

    std::vector<Eigen::Triplet<cplx>> t{{0, 0, 3.0}, {1, 0, 4.0}};
    o.alpha = 4.0;
    o.beta = 6.0;
    SolveResult col = feast_svd(SparseMatrix::from_triplets(2, 1, t), o);
    ASSERT_EQ(col.solution.size(), 1);
    EXPECT_NEAR(col.solution.sigma(0), 5.0, 1e-13);
}

TEST(FeastSvd, RandomSparseEightInside) {
    SparseMatrix a = test::random_sparse(200, 100, 1500, 17);
    DenseGsvdReference ref = dense_gsvd_reference(a.to_dense(), std::nullopt);
    // Interval around the 8 values sigma[80..87] (ascending), cut at midpoints.
    const double lo = 0.5 * (ref.sigma(79) + ref.sigma(80));
    const double hi = 0.5 * (ref.sigma(87) + ref.sigma(88));
    SolverOptions o;
    o.alpha = lo;
    o.beta = hi;
    SolveResult r = feast_svd(a, o);
    EXPECT_EQ(r.report.reason, StoppingReason::AllConverged);
    EXPECT_LE(r.report.iterations, 4);
    ASSERT_EQ(r.solution.size(), 8);
    for (Eigen::Index i = 0; i < 8; ++i)
        EXPECT_NEAR(r.solution.sigma(i), ref.sigma(87 - i), 1e-10 * ref.sigma(87 - i));
}

TEST(FeastSvd, ExactGuessConvergesImmediately) {
    SparsePencil p = diag_range(10);
    Mat e = Mat::Identity(10, 10);
    SolverOptions o;
    o.alpha = 3.5;
    o.beta = 6.5;
    o.initial_guess = SubspacePair{e.middleCols(3, 3), e.middleCols(3, 3), false};
    SolveResult r = feast_gsvd(p, o);
    EXPECT_EQ(r.report.reason, StoppingReason::AllConverged);
    EXPECT_EQ(r.report.iterations, 1);
    EXPECT_EQ(r.report.subspace_size, 3);

    o.initial_guess = SubspacePair{Mat::Identity(9, 3), e.leftCols(3), false};
    EXPECT_THROW(feast_gsvd(p, o), GuessDimensionMismatch);
}

TEST(FeastSvd, EmptyAndStagnant) {
    SparsePencil p = diag_range(5);
    SolverOptions o;
    o.alpha = 10.0;
    o.beta = 11.0;
    SolveResult empty = feast_gsvd(p, o);
    EXPECT_EQ(empty.report.reason, StoppingReason::EmptyInterval);
    EXPECT_EQ(empty.solution.size(), 0);

    o.subspace_size = 3;
    SolveResult stag = feast_gsvd(p, o);
    EXPECT_EQ(stag.report.reason, StoppingReason::StagnantCount);
    EXPECT_EQ(stag.report.iterations, 2);
    EXPECT_EQ(stag.solution.size(), 0);
}

TEST(FeastSvd, InvalidOptions) {
    SparsePencil p = diag_range(3);
    SolverOptions o;
    o.alpha = 2.0;
    o.beta = 1.0;
    EXPECT_THROW(feast_gsvd(p, o), InvalidArgument);
    o.alpha = 1.0;
    o.beta = 2.0;
    o.n_nodes = 7;
    EXPECT_THROW(feast_gsvd(p, o), InvalidArgument);
}

TEST(Recovery, UnitSigma) {
    SparsePencil p = SparsePencil::gsvd(test::diag_sparse({1.0, 3.0}), test::diag_sparse({1.0, 1.0}));
    SolverOptions o;
    o.alpha = 0.5;
    o.beta = 1.5;
    SolveResult r = feast_gsvd(p, o);
    ASSERT_EQ(r.solution.size(), 1);
    EXPECT_NEAR(r.solution.c(0), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(r.solution.s(0), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_LE(r.solution.recovery_a(0), 1e-14);
    EXPECT_LE(r.solution.recovery_b(0), 1e-14);
}

TEST(DefaultTol, ScalesWithRows) {
    SparsePencil p = SparsePencil::svd(SparseMatrix::from_dense(test::random_real(16, 4, 1)));
    EXPECT_DOUBLE_EQ(default_tol(p), 4e-14);
}
