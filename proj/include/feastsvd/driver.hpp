#pragma once

#include "feastsvd/filter.hpp"
#include "feastsvd/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace feast {

struct SolverOptions {
    double alpha = 0.0;
    double beta = 0.0;
    int n_nodes = 12;
    double aspect_ratio = 5.0;
    std::optional<int> subspace_size;  // empty: auto from the trace estimate
    std::optional<double> tol;         // empty: 1e-14 * sqrt(m)
    int max_iterations = 30;
    FilterVariant variant = FilterVariant::AugmentedPair;
    bool soft_locking = true;
    std::uint64_t seed = 0;
    int trace_samples = 30;
    std::optional<SubspacePair> initial_guess;  // raw (m x l, n x l)

    void validate() const;
};

enum class StoppingReason { AllConverged, StagnantCount, MaxIterations, EmptyInterval };
const char* stopping_reason_name(StoppingReason r);

struct IterationRecord {
    int iteration = 0;
    double max_rel_residual = 0.0;                // over in-interval Ritz values after selection
    double max_rel_residual_pre_selection = 0.0;  // same, before selection
    int converged = 0;                            // in-interval and converged
    int inside = 0;
    std::vector<double> ritz_values;
    std::vector<double> converged_values;  // in-interval and converged, descending
    double wall_seconds = 0.0;
};

struct ConvergenceReport {
    std::vector<IterationRecord> history;
    StoppingReason reason = StoppingReason::MaxIterations;
    int iterations = 0;
    int subspace_size = 0;
    double tol = 0.0;
    std::optional<TraceEstimate> estimate;
    CacheStats cache;
};

struct GsvdSolution {
    RVec sigma;  // descending
    Mat u, w, v, x;
    RVec c, s;
    RVec r1, r2;        // absolute residual norms
    RVec rel1, rel2;    // relative residuals compared against tol
    std::vector<bool> converged;
    RVec recovery_a;    // ||A x_i - u_i c_i||
    RVec recovery_b;    // ||B x_i - v_i s_i||

    Eigen::Index size() const { return sigma.size(); }
};

struct RitzResult {
    RVec sigma;  // descending, nonnegative
    SubspacePair pair;
};

// A_p = U^* A W, then A_p = U_p S W_p^*; U <- U U_p, W <- W W_p.
RitzResult rayleigh_ritz(const SparsePencil& pencil, const SubspacePair& pair);

// U^*U = I and (BW)^*(BW) = I, truncated to a common rank.
SubspacePair b_orthonormalize_pair(const SparsePencil& pencil, const SubspacePair& raw);

// Indices to keep, in keep order.
std::vector<Eigen::Index> select_components(const RVec& sigma, const RVec& residuals, double alpha, double beta,
                                            Eigen::Index ell);

struct ResidualCheck {
    RVec r1, r2, rel1, rel2;
    RVec rel;  // max(rel1, rel2)
    std::vector<bool> flags;
};

// Per triplet: r1 = ||A w - u s||, r2 = ||A^* u - B^*B w s||.
ResidualCheck check_convergence(const SparsePencil& pencil, const RVec& sigma, const Mat& u, const Mat& w,
                                double tol);

double default_tol(const SparsePencil& pencil);

struct SolveResult {
    GsvdSolution solution;
    ConvergenceReport report;
};

SolveResult feast_gsvd(FactorizationCache& cache, const SolverOptions& opts);
SolveResult feast_gsvd(const SparsePencil& pencil, const SolverOptions& opts);
SolveResult feast_svd(const SparseMatrix& a, const SolverOptions& opts);

// v = B w, s = (1+sigma^2)^{-1/2}, c = sigma s, x = w s.
void recover_full_gsvd(GsvdSolution& solution, const SparsePencil& pencil);

}  // namespace feast
