#pragma once

#include "feastsvd/sparse.hpp"

#include <random>

namespace feast::test {

inline Mat random_real(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
    return m;
}

inline Mat random_complex(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline SparseMatrix random_sparse(Eigen::Index rows, Eigen::Index cols, Eigen::Index nnz, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> ri(0, rows - 1), ci(0, cols - 1);
    std::normal_distribution<double> g;
    std::vector<Eigen::Triplet<cplx>> t;
    for (Eigen::Index k = 0; k < nnz; ++k) t.emplace_back(ri(rng), ci(rng), g(rng));
    return SparseMatrix::from_triplets(rows, cols, t);
}

inline SparseMatrix diag_sparse(const std::vector<double>& d) {
    std::vector<Eigen::Triplet<cplx>> t;
    for (std::size_t i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
    auto n = static_cast<Eigen::Index>(d.size());
    return SparseMatrix::from_triplets(n, n, t);
}

inline double orth_error(const Mat& q) {
    return (q.adjoint() * q - Mat::Identity(q.cols(), q.cols())).norm();
}

}  // namespace feast::test
