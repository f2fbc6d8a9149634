#pragma once

#include "feastsvd/oracle.hpp"

#include <algorithm>
#include <random>

namespace feast::test {

// One seeded instance for each of the four bound checks.
struct BoundInstance {
    Mat a;  // Hermitian n x n
    Mat x;  // n x l
    Eigen::Index k = 0;
    Mat m_psd;
    RVec lambda;  // perturbation diagonal; leading k in [1, 2], rest outside (0.5, 2.5)
    Mat dh;
    Eigen::Index kp = 0;
    Mat xr;  // n x k block for rate_check
    Eigen::Index ell = 0;
};

inline BoundInstance make_bound_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto cgauss = [&](Eigen::Index r, Eigen::Index c) {
        Mat m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i) m(i, j) = cplx(g(rng), g(rng));
        return m;
    };

    BoundInstance b;
    const int n = std::uniform_int_distribution<int>(6, 30)(rng);
    const int l = std::uniform_int_distribution<int>(2, n - 2)(rng);
    b.k = std::uniform_int_distribution<int>(1, l)(rng);
    Mat q = random_orthonormal(n, n, seed + 7);
    RVec lam(n);
    for (int i = 0; i < n; ++i) lam(i) = 3.0 * g(rng);
    b.a = q * lam.cast<cplx>().asDiagonal() * q.adjoint();
    b.a = ((b.a + b.a.adjoint()) * 0.5).eval();
    b.x = cgauss(n, l);

    Mat gm = cgauss(n, n);
    b.m_psd = gm * gm.adjoint();

    const int lp = l + 1;
    b.kp = std::min<Eigen::Index>(b.k, lp - 1);
    b.lambda.resize(lp);
    for (Eigen::Index i = 0; i < b.kp; ++i) b.lambda(i) = 1.0 + unit(rng);
    for (Eigen::Index i = b.kp; i < lp; ++i) {
        const double r = 1.0 + 3.0 * unit(rng);
        b.lambda(i) = i % 2 ? -r : r + 3.0;
    }
    b.dh = cgauss(lp, lp) * 0.02;
    b.dh = ((b.dh + b.dh.adjoint()) * 0.5).eval();

    b.xr = cgauss(n, b.k);
    b.ell = std::max<Eigen::Index>(b.k, l - 1);
    return b;
}

}  // namespace feast::test
