#pragma once

#include "feastsvd/contour.hpp"
#include "feastsvd/filter.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace feast {

struct DenseGsvdReference {
    RVec sigma;        // n generalized singular values, ascending
    RVec pencil_eigs;  // all m+n eigenvalues of the Jordan-Wielandt pencil, ascending
    Mat u;             // m x n, unit columns
    Mat v;             // p x n, v = B w
    Mat w;             // n x n, (Bw)^*(Bw) = I
    Mat x;             // n x n, x = w * s
    RVec c, s;         // alpha_i, beta_i with c^2 + s^2 = 1
    RVec residual_a;   // ||A x_i - u_i c_i||
    RVec residual_b;   // ||B x_i - v_i s_i||
};

// Cholesky-whitened Hermitian eigensolve of the pencil. An empty `b` means B = I.
DenseGsvdReference dense_gsvd_reference(const Mat& a, const std::optional<Mat>& b);

// Strict interior count of sigma in (alpha, beta).
int count_in_interval(const DenseGsvdReference& ref, double alpha, double beta);

struct SyntheticGsvd {
    Mat a, b;
    RVec sigma;  // ascending
    Mat u, v;    // m x n, p x n orthonormal
    Mat x;       // n x n
    Mat w;       // x * diag(1/s): pencil-normalized right vectors
    RVec c, s;
};

// A = U C X^{-1}, B = V S X^{-1} with c = sigma/sqrt(1+sigma^2), s = 1/sqrt(1+sigma^2).
SyntheticGsvd make_synthetic_gsvd(Eigen::Index m, Eigen::Index p, Eigen::Index n, const RVec& sigma,
                                  double cond_x, std::uint64_t seed);

enum class GuessKind { Eq1, Eq2, Eq3 };
GuessKind parse_guess_kind(const std::string& s);

// [[base], Q_{(m+n) x (l-k)}] * Q_{l x l} + noise * sqrt(m) * Q_{(m+n) x l}.
// Eq1 base [U; -W]; Eq2 [U; W] + (1 - 1e-10)[U; -W]; Eq3 [U; W] with noise 10^-q.
SubspacePair make_artificial_guess(const Mat& u_true, const Mat& w_true, Eigen::Index ell, GuessKind kind,
                                   int q, std::uint64_t seed);

// Random matrix with orthonormal columns (Householder QR of a Gaussian block).
Mat random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

// Dense Jordan-Wielandt blocks.
Mat dense_acheck(const Mat& a);
Mat dense_bcheck(const Mat& a, const std::optional<Mat>& b);

// Dense filter matrix sum_j omega_j (xi_j Bcheck - Acheck)^{-1} Bcheck via LU.
Mat dense_filter_matrix(const Mat& a, const std::optional<Mat>& b, const EllipseContour& contour);

}  // namespace feast
