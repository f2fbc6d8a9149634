#include "feastsvd/errors.hpp"
#include "feastsvd/oracle.hpp"
#include "feastsvd/sparse.hpp"
#include "helpers.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace feast;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    fs::path p = fs::temp_directory_path() / ("feastsvd_test_" + name);
    std::ofstream(p) << body;
    return p.string();
}

}  // namespace

TEST(MatrixMarket, SingleEntry) {
    auto path = write_temp("single.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 3.5\n");
    SparseMatrix m = read_matrix_market(path);
    EXPECT_EQ(m.rows(), 2);
    EXPECT_EQ(m.cols(), 2);
    EXPECT_EQ(m.nnz(), 1);
    EXPECT_EQ(m.to_dense()(0, 0), cplx(3.5));
}

TEST(MatrixMarket, SymmetricExpansion) {
    auto path = write_temp("sym.mtx", "%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 2\n1 1 1\n2 1 4\n");
    Mat d = read_matrix_market(path).to_dense();
    EXPECT_EQ(d(1, 0), cplx(4));
    EXPECT_EQ(d(0, 1), cplx(4));
    EXPECT_EQ(d(0, 0), cplx(1));
}

TEST(MatrixMarket, HermitianAndPattern) {
    auto h = write_temp("herm.mtx", "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n2 1 1 2\n");
    Mat d = read_matrix_market(h).to_dense();
    EXPECT_EQ(d(1, 0), cplx(1, 2));
    EXPECT_EQ(d(0, 1), cplx(1, -2));
    auto p = write_temp("pat.mtx", "%%MatrixMarket matrix coordinate pattern general\n2 3 2\n1 3\n2 1\n");
    Mat q = read_matrix_market(p).to_dense();
    EXPECT_EQ(q(0, 2), cplx(1));
    EXPECT_EQ(q(1, 0), cplx(1));
}

TEST(MatrixMarket, Errors) {
    auto arr = write_temp("arr.mtx", "%%MatrixMarket matrix array real general\n1 1\n1\n");
    EXPECT_THROW(read_matrix_market(arr), UnsupportedFormat);
    auto bad = write_temp("bad.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
    try {
        read_matrix_market(bad);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    EXPECT_THROW(read_matrix_market("/nonexistent/x.mtx"), IoError);
}

TEST(MatrixMarket, RoundTrip) {
    SparseMatrix m = test::random_sparse(50, 30, 200, 9);
    auto path = (fs::temp_directory_path() / "feastsvd_test_rt.mtx").string();
    write_matrix_market(path, m);
    SparseMatrix back = read_matrix_market(path);
    EXPECT_EQ(back.nnz(), m.nnz());
    EXPECT_EQ((back.to_dense() - m.to_dense()).cwiseAbs().maxCoeff(), 0.0);

    Mat c = test::random_complex(4, 3, 2);
    auto cpath = (fs::temp_directory_path() / "feastsvd_test_rtc.mtx").string();
    write_matrix_market(cpath, SparseMatrix::from_dense(c), Field::Complex);
    EXPECT_EQ((read_matrix_market(cpath).to_dense() - c).cwiseAbs().maxCoeff(), 0.0);

    auto dpath = (fs::temp_directory_path() / "feastsvd_test_rtd.mtx").string();
    write_matrix_market_dense(dpath, c, Field::Complex);
    EXPECT_EQ((read_matrix_market_dense(dpath) - c).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SparseMatrix, DuplicatesSummed) {
    std::vector<Eigen::Triplet<cplx>> t{{0, 0, 1.0}, {0, 0, 2.0}};
    SparseMatrix m = SparseMatrix::from_triplets(1, 1, t);
    EXPECT_EQ(m.to_dense()(0, 0), cplx(3.0));
    std::vector<Eigen::Triplet<cplx>> out{{2, 0, 1.0}};
    EXPECT_THROW(SparseMatrix::from_triplets(1, 1, out), DimensionMismatch);
}

TEST(DerivativeB, Shapes) {
    Mat b1 = make_derivative_b(1).to_dense();
    ASSERT_EQ(b1.rows(), 2);
    EXPECT_EQ(b1(0, 0), cplx(1));
    EXPECT_EQ(b1(1, 0), cplx(-1));
    Mat b3 = make_derivative_b(3).to_dense();
    ASSERT_EQ(b3.rows(), 4);
    for (int j = 0; j < 3; ++j) {
        EXPECT_EQ(b3(j, j), cplx(1));
        EXPECT_EQ(b3(j + 1, j), cplx(-1));
        EXPECT_NEAR(b3.col(j).norm(), std::sqrt(2.0), 1e-15);
    }
}

TEST(DerivativeB, FullRankAndBounded) {
    for (Eigen::Index n = 1; n <= 50; n += 7) {
        Mat b = make_derivative_b(n).to_dense();
        Eigen::JacobiSVD<Mat> svd(b);
        EXPECT_GT(svd.singularValues()(n - 1), 0.0);
        EXPECT_LE(svd.singularValues()(0) * svd.singularValues()(0), 4.0 + 1e-12);
    }
}

TEST(AssembleShifted, SmallCases) {
    SparsePencil p = SparsePencil::svd(test::diag_sparse({2.0}));
    Mat m = Mat(assemble_shifted(p, 3.0));
    Mat expect(2, 2);
    expect << 3, -2, -2, 3;
    EXPECT_EQ((m - expect).norm(), 0.0);

    SparsePencil g = SparsePencil::gsvd(test::diag_sparse({1.0}), test::diag_sparse({2.0}));
    Mat mg = Mat(assemble_shifted(g, cplx(0, 1)));
    Mat eg(2, 2);
    eg << cplx(0, 1), -1, -1, cplx(0, 4);
    EXPECT_EQ((mg - eg).norm(), 0.0);
}

TEST(AssembleShifted, RandomAgainstDense) {
    Mat a = test::random_real(10, 6, 1);
    Mat b = test::random_real(8, 6, 2);
    SparsePencil p = SparsePencil::gsvd(SparseMatrix::from_dense(a), SparseMatrix::from_dense(b));
    cplx xi(1.0, 0.5);
    Mat dense = xi * dense_bcheck(a, b) - dense_acheck(a);
    Mat sp = Mat(assemble_shifted(p, xi));
    EXPECT_LE((sp - dense).cwiseAbs().maxCoeff(), 1e-13);
    // Complex symmetric for real data.
    EXPECT_LE((sp - sp.transpose()).cwiseAbs().maxCoeff(), 1e-13);

    Mat z = test::random_real(16, 3, 4);
    EXPECT_LE((apply_b_check(p, z) - dense_bcheck(a, b) * z).norm(), 1e-14 * z.norm() * 10);
    SparsePencil s = SparsePencil::svd(SparseMatrix::from_dense(a));
    EXPECT_EQ((apply_b_check(s, z) - z).norm(), 0.0);
}

TEST(SparsePencil, NormsAndChecks) {
    Mat a = test::random_real(30, 20, 5);
    SparsePencil p = SparsePencil::svd(SparseMatrix::from_dense(a));
    Eigen::JacobiSVD<Mat> ref(a);
    EXPECT_NEAR(p.norm_a(), ref.singularValues()(0), 0.02 * ref.singularValues()(0));
    EXPECT_THROW(SparsePencil::gsvd(SparseMatrix::from_dense(a), SparseMatrix::from_dense(test::random_real(5, 3, 1))),
                 DimensionMismatch);
    EXPECT_THROW(p.b(), InvalidArgument);
}
