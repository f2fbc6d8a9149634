#pragma once

#include "feastsvd/dense.hpp"

#include <vector>

namespace feast {

struct QuadNode {
    cplx xi;
    cplx omega;
};

struct EllipseContour {
    double center = 0.0;
    double semi_major = 0.0;  // a
    double semi_minor = 0.0;  // b
    int n_nodes = 0;
    std::vector<QuadNode> nodes;

    double aspect_ratio() const { return semi_major / semi_minor; }
    // Scalar rational filter h(z) = sum_j omega_j / (xi_j - z).
    cplx filter_value(cplx z) const;
};

EllipseContour build_ellipse(double alpha, double beta, double rho = 5.0, int n_nodes = 12);

// Contour mirrored through the origin: h_reflected(z) = h(-z).
EllipseContour reflect(const EllipseContour& c);

struct ConjugateReduction {
    std::vector<QuadNode> upper_nodes;  // Im(xi) > 0
    // For real data the full sum equals 2 * Re(sum over upper_nodes).
    double doubling = 2.0;
};

ConjugateReduction conjugate_reduction(const EllipseContour& c);
// Refuses (NotConjugateSymmetric) when the pencil or block is complex.
ConjugateReduction conjugate_reduction(const EllipseContour& c, bool data_is_real);

}  // namespace feast
