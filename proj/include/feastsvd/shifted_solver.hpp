#pragma once

#include "feastsvd/sparse.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include <map>
#include <memory>
#include <mutex>

namespace feast {

class NodeFactorization {
public:
    using Solver = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;

    cplx xi() const { return xi_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    Eigen::Index fill_nnz() const { return fill_nnz_; }
    double min_pivot() const { return min_pivot_; }
    double matrix_norm() const { return norm1_; }
    const SpMat& matrix() const { return matrix_; }

    // Solve (xi*Bcheck - Acheck) X = rhs column by column.
    Mat solve(const Mat& rhs) const;

private:
    friend std::shared_ptr<NodeFactorization> factorize(const SparsePencil& pencil, cplx xi);
    NodeFactorization() = default;

    cplx xi_;
    SpMat matrix_;
    std::unique_ptr<Solver> lu_;
    Eigen::Index fill_nnz_ = 0;
    double min_pivot_ = 0.0;
    double norm1_ = 0.0;
};

// Sparse LU (COLAMD ordering, partial pivoting). Throws SingularShift when a
// pivot falls below 1e-14 times the matrix 1-norm.
std::shared_ptr<NodeFactorization> factorize(const SparsePencil& pencil, cplx xi);

Mat solve_block(const NodeFactorization& f, const Mat& rhs);

struct CacheStats {
    long factorizations = 0;
    long hits = 0;
    long solves = 0;
    Eigen::Index fill_nnz = 0;
};

// Per-pencil cache of node factorizations keyed by the exact shift value.
class FactorizationCache {
public:
    explicit FactorizationCache(const SparsePencil& pencil) : pencil_(&pencil) {}

    std::shared_ptr<const NodeFactorization> get(cplx xi);
    const SparsePencil& pencil() const { return *pencil_; }
    std::size_t size() const;
    CacheStats stats() const;
    void count_solve(long columns);

private:
    struct Less {
        bool operator()(const cplx& a, const cplx& b) const {
            return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
        }
    };
    const SparsePencil* pencil_;
    std::map<cplx, std::shared_ptr<NodeFactorization>, Less> entries_;
    CacheStats stats_;
    mutable std::mutex mu_;
};

}  // namespace feast
