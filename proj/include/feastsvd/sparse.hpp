#pragma once

#include "feastsvd/dense.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <string>

namespace feast {

using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;

enum class Symmetry { General, Symmetric, Hermitian };
enum class Field { Real, Complex, Integer, Pattern };

struct SparseMatrix {
    SpMat data;
    Symmetry symmetry = Symmetry::General;  // as read from file; storage is always expanded

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index cols() const { return data.cols(); }
    Eigen::Index nnz() const { return data.nonZeros(); }
    bool is_real() const;

    // Duplicate (row, col) triplets are summed.
    static SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols,
                                      const std::vector<Eigen::Triplet<cplx>>& triplets,
                                      Symmetry sym = Symmetry::General);
    static SparseMatrix from_dense(const Mat& m);
    Mat to_dense() const;
};

SparseMatrix read_matrix_market(const std::string& path);

// Writes general coordinate format; `field` Real drops imaginary parts.
void write_matrix_market(const std::string& path, const SparseMatrix& m, Field field = Field::Real);

// Dense array-format reader/writer (used for subspace guesses).
Mat read_matrix_market_dense(const std::string& path);
void write_matrix_market_dense(const std::string& path, const Mat& m, Field field = Field::Real);

// (n+1) x n forward difference: column j holds +1 at row j and -1 at row j+1.
SparseMatrix make_derivative_b(Eigen::Index n);

enum class Mode { Svd, Gsvd };

class SparsePencil {
public:
    static SparsePencil svd(SparseMatrix a);
    static SparsePencil gsvd(SparseMatrix a, SparseMatrix b);

    Mode mode() const { return mode_; }
    const SparseMatrix& a() const { return a_; }
    const SparseMatrix& b() const;  // throws in SVD mode
    const SpMat& btb() const { return btb_; }  // B^*B, identity in SVD mode
    Eigen::Index m() const { return a_.rows(); }
    Eigen::Index n() const { return a_.cols(); }
    Eigen::Index p() const { return mode_ == Mode::Svd ? a_.cols() : b_->rows(); }
    double norm_a() const { return norm_a_; }
    double norm_b() const { return norm_b_; }
    bool is_real() const { return real_; }

    Mat apply_a(const Mat& w) const { return a_.data * w; }
    Mat apply_a_adjoint(const Mat& u) const { return a_.data.adjoint() * u; }
    Mat apply_b(const Mat& w) const;
    Mat apply_btb(const Mat& w) const;

private:
    SparsePencil() = default;
    void finalize();

    Mode mode_ = Mode::Svd;
    SparseMatrix a_;
    std::optional<SparseMatrix> b_;
    SpMat btb_;
    double norm_a_ = 0.0;
    double norm_b_ = 1.0;
    bool real_ = true;
};

// xi * diag(I_m, B^*B) - [[0, A], [A^*, 0]].
SpMat assemble_shifted(const SparsePencil& pencil, cplx xi);

// diag(I_m, B^*B) * z for z with m+n rows.
Mat apply_b_check(const SparsePencil& pencil, const Mat& z);

}  // namespace feast
