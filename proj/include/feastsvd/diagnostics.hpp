#pragma once

#include "feastsvd/dense.hpp"

namespace feast {

struct LemmaReport {
    double lhs = 0.0;  // ||(I+M)^{-1/2} - I||_2
    double rhs = 0.0;  // ||M||_2 / 2
    bool holds = false;
};

// M Hermitian PSD.
LemmaReport lemma0_check(const Mat& m_psd);

struct SubspaceAngleReport {
    double tan_angle = 0.0;      // tan of the largest angle between span(U_l) and span(AX)
    double span_residual = 0.0;  // tan angle between span(Y) and span(AX); zero in exact arithmetic
    double eta_tilde = 0.0;
    double eta_hat = 0.0;
    double e11 = 0.0, e12 = 0.0, e21 = 0.0, e22 = 0.0, f1 = 0.0, f2 = 0.0;
    bool e11_ok = false, e12_ok = false, e21_ok = false, e22_ok = false, f1_ok = false, f2_ok = false;

    bool all_hold() const { return e11_ok && e12_ok && e21_ok && e22_ok && f1_ok && f2_ok; }
};

// A Hermitian n x n, X n x l, 1 <= k <= l < n. Eigenvalues are ordered by
// decreasing magnitude; needs |lambda_l| > |lambda_{l+1}|.
SubspaceAngleReport thm1_block_check(const Mat& a_hermitian, const Mat& x, Eigen::Index k);

struct PerturbationReport {
    double epsilon = 0.0;
    double d11 = 0.0, d12 = 0.0, d21 = 0.0, d22 = 0.0;
    bool d11_ok = false, d12_ok = false, d21_ok = false, d22_ok = false;

    bool all_hold() const { return d11_ok && d12_ok && d21_ok && d22_ok; }
};

// H = diag(lambda) + dH with spec(Lambda_k) in [alpha, beta] and the trailing
// Ritz group outside (alpha - delta, beta + delta).
PerturbationReport perturbation_check(const RVec& lambda_diag, const Mat& delta_h, Eigen::Index k,
                                      double delta_gap);

struct RateReport {
    double lhs = 0.0;         // tan angle(U_k, AX)
    double rhs = 0.0;
    double tan_x = 0.0;       // tan angle(U_k, X)
    bool holds = false;
    double ratio = 0.0;       // lhs / tan_x
    double rate3_rhs = 0.0;
    bool rate3_holds = false;
    double kappa_xk = 0.0;
    double perp_ratio = 0.0;  // ||X_perp|| / ||X_{l\k}||, recorded only
};

// X is n x k; l in [k, n).
RateReport rate_check(const Mat& a_hermitian, const Mat& x_block, Eigen::Index k, Eigen::Index ell);

// Tangent of the largest principal angle between span(u) and span(x).
// Infinite when x has more independent columns than u.
double tan_angle(const Mat& u, const Mat& x);

}  // namespace feast
