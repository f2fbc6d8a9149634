#include "feastsvd/shifted_solver.hpp"
#include "feastsvd/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace feast {

namespace {

std::string shift_text(cplx xi) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << xi.real() << (xi.imag() < 0 ? " - " : " + ") << std::abs(xi.imag()) << "i)";
    return os.str();
}

double one_norm(const SpMat& m) {
    double best = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        double col = 0.0;
        for (SpMat::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

double min_diagonal_pivot(const NodeFactorization::Solver& lu, Eigen::Index n) {
    // The supernodal L store keeps the diagonal of U, as in logAbsDeterminant.
    const auto& store = lu.matrixL().m_mapL;
    using Store = std::decay_t<decltype(store)>;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
        double piv = 0.0;
        for (typename Store::InnerIterator it(store, j); it; ++it) {
            if (it.row() < j) continue;
            if (it.row() == j) piv = std::abs(it.value());
            break;
        }
        best = std::min(best, piv);
    }
    return best;
}

}  // namespace

std::shared_ptr<NodeFactorization> factorize(const SparsePencil& pencil, cplx xi) {
    std::shared_ptr<NodeFactorization> f(new NodeFactorization());
    f->xi_ = xi;
    f->matrix_ = assemble_shifted(pencil, xi);
    f->norm1_ = one_norm(f->matrix_);
    f->lu_ = std::make_unique<NodeFactorization::Solver>();
    f->lu_->analyzePattern(f->matrix_);
    f->lu_->factorize(f->matrix_);
    if (f->lu_->info() != Eigen::Success)
        throw SingularShift("factorization failed at shift " + shift_text(xi) + ": " +
                            f->lu_->lastErrorMessage());
    f->min_pivot_ = min_diagonal_pivot(*f->lu_, f->matrix_.cols());
    if (f->min_pivot_ < 1e-14 * f->norm1_)
        throw SingularShift("pivot below 1e-14*||M|| at shift " + shift_text(xi));
    f->fill_nnz_ = f->lu_->nnzL() + f->lu_->nnzU();
    return f;
}

Mat NodeFactorization::solve(const Mat& rhs) const {
    if (rhs.rows() != dim())
        throw DimensionMismatch("solve: rhs has " + std::to_string(rhs.rows()) + " rows, expected " +
                                std::to_string(dim()));
    Mat x(rhs.rows(), rhs.cols());
    for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
        Vec b = rhs.col(j);
        double bn = b.norm();
        if (bn == 0.0) {
            x.col(j).setZero();
            continue;
        }
        Vec xj = lu_->solve(b);
        // Residual contract, scaled by a lower bound on cond(M).
        auto violates = [&](const Vec& sol, double& res) {
            res = (b - matrix_ * sol).norm();
            double guard = std::max(1.0, norm1_ * sol.norm() / bn);
            return !(res <= 1e-10 * bn * guard);
        };
        double res = 0.0;
        if (violates(xj, res)) {
            xj += lu_->solve(Vec(b - matrix_ * xj));
            if (violates(xj, res))
                throw SingularShift("solve residual check failed twice at shift " + shift_text(xi_));
        }
        x.col(j) = xj;
    }
    return x;
}

Mat solve_block(const NodeFactorization& f, const Mat& rhs) { return f.solve(rhs); }

std::shared_ptr<const NodeFactorization> FactorizationCache::get(cplx xi) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(xi);
    if (it != entries_.end()) {
        ++stats_.hits;
        return it->second;
    }
    auto f = factorize(*pencil_, xi);
    ++stats_.factorizations;
    stats_.fill_nnz += f->fill_nnz();
    entries_.emplace(xi, f);
    return f;
}

std::size_t FactorizationCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

CacheStats FactorizationCache::stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    return stats_;
}

void FactorizationCache::count_solve(long columns) {
    std::lock_guard<std::mutex> lock(mu_);
    stats_.solves += columns;
}

}  // namespace feast
