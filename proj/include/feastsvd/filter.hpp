#pragma once

#include "feastsvd/contour.hpp"
#include "feastsvd/shifted_solver.hpp"

#include <string>

namespace feast {

enum class FilterVariant { SimplePlus, SimplePlusRR, SumPlusMinus, AugmentedPair };

const char* variant_name(FilterVariant v);  // "plus", "plus-rr", "sum", "augmented"
FilterVariant parse_variant(const std::string& s);

struct SubspacePair {
    Mat u;  // m x l
    Mat w;  // n x l
    bool orthonormalized = false;

    Eigen::Index cols() const { return u.cols(); }
};

// sum_j omega_j (xi_j Bcheck - Acheck)^{-1} rhs. Uses the conjugate
// reduction when the pencil and rhs are real and `allow_reduction` is set.
Mat contour_sum(FactorizationCache& cache, const EllipseContour& contour, const Mat& rhs,
                bool allow_reduction = true);

// sum_j omega_j (xi_j Bcheck - Acheck)^{-1} Bcheck z.
Mat apply_filter(FactorizationCache& cache, const EllipseContour& contour, const Mat& z,
                 bool allow_reduction = true);

// Block filtered by one iteration of the given variant. Output rows are m+n.
Mat apply_variant(FactorizationCache& cache, const EllipseContour& contour, const SubspacePair& pair,
                  FilterVariant variant, bool first_iteration);

// diag(I_m, -I_n) z
Mat flip_bottom(const Mat& z, Eigen::Index m);

}  // namespace feast
