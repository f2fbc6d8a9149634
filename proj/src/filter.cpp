#include "feastsvd/filter.hpp"
#include "feastsvd/errors.hpp"

namespace feast {

const char* variant_name(FilterVariant v) {
    switch (v) {
        case FilterVariant::SimplePlus: return "plus";
        case FilterVariant::SimplePlusRR: return "plus-rr";
        case FilterVariant::SumPlusMinus: return "sum";
        case FilterVariant::AugmentedPair: return "augmented";
    }
    return "augmented";
}

FilterVariant parse_variant(const std::string& s) {
    if (s == "plus") return FilterVariant::SimplePlus;
    if (s == "plus-rr") return FilterVariant::SimplePlusRR;
    if (s == "sum") return FilterVariant::SumPlusMinus;
    if (s == "augmented") return FilterVariant::AugmentedPair;
    throw UnknownVariant("unknown filter variant '" + s + "'");
}

Mat flip_bottom(const Mat& z, Eigen::Index m) {
    Mat out = z;
    out.bottomRows(z.rows() - m) *= -1.0;
    return out;
}

Mat contour_sum(FactorizationCache& cache, const EllipseContour& contour, const Mat& rhs,
                bool allow_reduction) {
    const SparsePencil& pencil = cache.pencil();
    if (rhs.rows() != pencil.m() + pencil.n())
        throw DimensionMismatch("contour_sum: rhs must have m+n rows");
    Mat acc = Mat::Zero(rhs.rows(), rhs.cols());
    if (rhs.cols() == 0) return acc;
    if (rhs.norm() == 0.0) return acc;

    if (allow_reduction && pencil.is_real() && is_real(rhs)) {
        ConjugateReduction red = conjugate_reduction(contour, true);
        for (const auto& nd : red.upper_nodes) {
            auto f = cache.get(nd.xi);
            acc += nd.omega * f->solve(rhs);
            cache.count_solve(rhs.cols());
        }
        return Mat(red.doubling * acc.real().cast<cplx>());
    }
    for (const auto& nd : contour.nodes) {
        auto f = cache.get(nd.xi);
        acc += nd.omega * f->solve(rhs);
        cache.count_solve(rhs.cols());
    }
    return acc;
}

Mat apply_filter(FactorizationCache& cache, const EllipseContour& contour, const Mat& z,
                 bool allow_reduction) {
    return contour_sum(cache, contour, apply_b_check(cache.pencil(), z), allow_reduction);
}

Mat apply_variant(FactorizationCache& cache, const EllipseContour& contour, const SubspacePair& pair,
                  FilterVariant variant, bool first_iteration) {
    const Eigen::Index m = pair.u.rows(), n = pair.w.rows();
    const Eigen::Index l = pair.cols();
    if (pair.w.cols() != l) throw DimensionMismatch("apply_variant: U and W column counts differ");
    Mat z(m + n, l);
    z.topRows(m) = pair.u;
    z.bottomRows(n) = pair.w;

    switch (variant) {
        case FilterVariant::SimplePlus:
        case FilterVariant::SimplePlusRR:
            return apply_filter(cache, contour, z);
        case FilterVariant::SumPlusMinus: {
            // P^- = D P^+ D with D = diag(I_m, -I_n); both halves share one filter call.
            Mat both(m + n, 2 * l);
            both.leftCols(l) = z;
            both.rightCols(l) = flip_bottom(z, m);
            Mat y = apply_filter(cache, contour, both);
            return y.leftCols(l) + flip_bottom(y.rightCols(l), m);
        }
        case FilterVariant::AugmentedPair: {
            if (!first_iteration) return apply_filter(cache, contour, z);
            Mat aug(m + n, 2 * l);
            aug.leftCols(l) = z;
            aug.rightCols(l) = flip_bottom(z, m);
            return apply_filter(cache, contour, aug);
        }
    }
    throw UnknownVariant("unknown filter variant");
}

}  // namespace feast
