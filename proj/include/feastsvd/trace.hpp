#pragma once

#include "feastsvd/filter.hpp"

#include <cstdint>
#include <vector>

namespace feast {

struct TraceEstimate {
    double k_hat = 0.0;
    int samples = 0;
    std::vector<double> values;      // real parts, one per probe
    std::vector<double> imag_parts;  // imaginary residue per probe
    double stddev = 0.0;
    int nodes = 0;
    double imag_residue = 0.0;  // |Im| of the mean
};

// Rademacher probes of length m+n; sample i is y_i^* P y_i.
TraceEstimate estimate_count_svd(FactorizationCache& cache, const EllipseContour& contour, int samples,
                                 std::uint64_t seed, bool allow_reduction = true);

// Symmetrized form with C = diag(I_m, B^*), probes of length m+p.
TraceEstimate estimate_count_gsvd(FactorizationCache& cache, const EllipseContour& contour, int samples,
                                  std::uint64_t seed, bool allow_reduction = true);

// Dispatches on the pencil mode.
TraceEstimate estimate_count(FactorizationCache& cache, const EllipseContour& contour, int samples,
                             std::uint64_t seed, bool allow_reduction = true);

// ceil(1.5 * max(k_hat, 0)) + 5
int auto_subspace_size(double k_hat);

}  // namespace feast
