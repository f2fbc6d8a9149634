#include "feastsvd/trace.hpp"
#include "feastsvd/errors.hpp"

#include <cmath>
#include <random>

namespace feast {

namespace {

Mat rademacher(Eigen::Index rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    Mat y(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) y(i, j) = coin(rng) ? 1.0 : -1.0;
    return y;
}

TraceEstimate summarize(const Mat& probes, const Mat& filtered, int nodes) {
    TraceEstimate est;
    est.samples = static_cast<int>(probes.cols());
    est.nodes = nodes;
    cplx mean(0.0);
    for (Eigen::Index j = 0; j < probes.cols(); ++j) {
        cplx s = probes.col(j).dot(filtered.col(j));
        est.values.push_back(s.real());
        est.imag_parts.push_back(s.imag());
        mean += s;
    }
    mean /= static_cast<double>(est.samples);
    est.k_hat = mean.real();
    est.imag_residue = std::abs(mean.imag());
    double acc = 0.0;
    for (double v : est.values) acc += (v - est.k_hat) * (v - est.k_hat);
    est.stddev = est.samples > 1 ? std::sqrt(acc / (est.samples - 1)) : 0.0;
    return est;
}

}  // namespace

TraceEstimate estimate_count_svd(FactorizationCache& cache, const EllipseContour& contour, int samples,
                                 std::uint64_t seed, bool allow_reduction) {
    const SparsePencil& pencil = cache.pencil();
    if (pencil.mode() != Mode::Svd) throw InvalidArgument("estimate_count_svd needs an SVD-mode pencil");
    if (samples < 1) throw InvalidArgument("sample count must be >= 1");
    Mat y = rademacher(pencil.m() + pencil.n(), samples, seed);
    Mat yhat = contour_sum(cache, contour, y, allow_reduction);
    return summarize(y, yhat, contour.n_nodes);
}

TraceEstimate estimate_count_gsvd(FactorizationCache& cache, const EllipseContour& contour, int samples,
                                  std::uint64_t seed, bool allow_reduction) {
    const SparsePencil& pencil = cache.pencil();
    if (samples < 1) throw InvalidArgument("sample count must be >= 1");
    const Eigen::Index m = pencil.m(), n = pencil.n(), p = pencil.p();
    Mat y = rademacher(m + p, samples, seed);
    Mat cy(m + n, samples);
    cy.topRows(m) = y.topRows(m);
    if (pencil.mode() == Mode::Svd) {
        cy.bottomRows(n) = y.bottomRows(n);
    } else {
        cy.bottomRows(n) = pencil.b().data.adjoint() * y.bottomRows(p);
    }
    Mat x = contour_sum(cache, contour, cy, allow_reduction);
    return summarize(cy, x, contour.n_nodes);
}

TraceEstimate estimate_count(FactorizationCache& cache, const EllipseContour& contour, int samples,
                             std::uint64_t seed, bool allow_reduction) {
    if (cache.pencil().mode() == Mode::Svd)
        return estimate_count_svd(cache, contour, samples, seed, allow_reduction);
    return estimate_count_gsvd(cache, contour, samples, seed, allow_reduction);
}

int auto_subspace_size(double k_hat) {
    return static_cast<int>(std::ceil(1.5 * std::max(k_hat, 0.0))) + 5;
}

}  // namespace feast
