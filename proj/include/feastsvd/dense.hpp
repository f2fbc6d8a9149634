#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>

namespace feast {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;   // DenseMatrix: column-major complex storage
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct SvdFactors {
    Mat u;
    RVec sigma;  // descending, nonnegative
    Mat w;
};

struct HermitianEig {
    RVec values;  // ascending
    Mat vectors;
};

struct QrResult {
    Mat q;      // rows x rank, orthonormal columns
    int rank = 0;
};

// Throws NonFiniteEntry if any entry is NaN or Inf.
void require_finite(const Mat& m, const char* what);

bool is_real(const Mat& m);

// Default basis-truncation tolerance for a block with `rows` rows.
double default_rank_tol(Eigen::Index rows);

// CGS with reorthogonalization. Columns whose residual norm falls below
// rank_tol times the largest input column norm are dropped.
QrResult qr_orthonormalize(const Mat& m, double rank_tol);

// One-sided Jacobi SVD of a square matrix.
SvdFactors small_svd(const Mat& a, int max_sweeps = 60);

// Cyclic Jacobi eigensolver for Hermitian input; real input stays real.
HermitianEig hermitian_eig(const Mat& h, int max_sweeps = 60);

using LinearOp = std::function<Vec(const Vec&)>;

// Power iteration on the Gram operator adjoint(apply(x)).
double two_norm_estimate(const LinearOp& apply, const LinearOp& apply_adjoint,
                         Eigen::Index cols, int iters = 20,
                         std::uint64_t seed = 0x5eed);

// Convenience overload for dense input.
double two_norm_estimate(const Mat& a, int iters = 20, std::uint64_t seed = 0x5eed);

// Exact spectral norm via small_svd / hermitian_eig (for small matrices).
double spectral_norm(const Mat& a);

}  // namespace feast
