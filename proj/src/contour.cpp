#include "feastsvd/contour.hpp"
#include "feastsvd/errors.hpp"

#include <cmath>
#include <numbers>

namespace feast {

cplx EllipseContour::filter_value(cplx z) const {
    cplx h(0.0);
    for (const auto& nd : nodes) h += nd.omega / (nd.xi - z);
    return h;
}

EllipseContour build_ellipse(double alpha, double beta, double rho, int n_nodes) {
    if (!(beta > alpha)) throw DegenerateInterval("interval upper end must exceed lower end");
    if (!(rho > 0.0)) throw InvalidArgument("aspect ratio must be positive");
    if (n_nodes < 2 || n_nodes % 2 != 0) throw InvalidArgument("node count must be even and >= 2");

    EllipseContour c;
    c.center = 0.5 * (alpha + beta);
    c.semi_major = 0.5 * (beta - alpha);
    c.semi_minor = c.semi_major / rho;
    c.n_nodes = n_nodes;
    const cplx i(0.0, 1.0);
    const double a = c.semi_major, b = c.semi_minor;
    for (int j = 0; j < n_nodes; ++j) {
        double theta = 2.0 * std::numbers::pi * (j + 0.5) / n_nodes;
        double ct = std::cos(theta), st = std::sin(theta);
        QuadNode nd;
        nd.xi = cplx(c.center + a * ct, b * st);
        nd.omega = cplx(-a * st, b * ct) / (i * static_cast<double>(n_nodes));
        c.nodes.push_back(nd);
    }
    return c;
}

EllipseContour reflect(const EllipseContour& c) {
    EllipseContour r = c;
    r.center = -c.center;
    for (auto& nd : r.nodes) {
        nd.xi = -nd.xi;
        nd.omega = -nd.omega;
    }
    return r;
}

ConjugateReduction conjugate_reduction(const EllipseContour& c) {
    ConjugateReduction out;
    const double scale = std::abs(c.center) + c.semi_major + c.semi_minor;
    const double tol = 1e-14 * scale;
    for (const auto& nd : c.nodes) {
        if (nd.xi.imag() == 0.0) throw NotConjugateSymmetric("node on the real axis");
        if (nd.xi.imag() < 0.0) continue;
        bool matched = false;
        for (const auto& other : c.nodes) {
            if (std::abs(other.xi - std::conj(nd.xi)) <= tol &&
                std::abs(other.omega - std::conj(nd.omega)) <= tol) {
                matched = true;
                break;
            }
        }
        if (!matched) throw NotConjugateSymmetric("node without a conjugate partner");
        out.upper_nodes.push_back(nd);
    }
    if (2 * out.upper_nodes.size() != c.nodes.size())
        throw NotConjugateSymmetric("unequal upper and lower node counts");
    return out;
}

ConjugateReduction conjugate_reduction(const EllipseContour& c, bool data_is_real) {
    if (!data_is_real) throw NotConjugateSymmetric("conjugate reduction needs real data");
    return conjugate_reduction(c);
}

}  // namespace feast
