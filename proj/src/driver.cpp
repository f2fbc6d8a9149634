#include "feastsvd/driver.hpp"
#include "feastsvd/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace feast {

namespace {

Mat normalize_columns(const Mat& x) {
    Mat out = x;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        double nrm = out.col(j).norm();
        if (nrm > 0.0) out.col(j) /= nrm;
    }
    return out;
}

// Gram-Schmidt (two passes) on B w, mirrored onto w. Returns the surviving w columns.
Mat b_gram_schmidt(const SparsePencil& pencil, const Mat& w, double rank_tol) {
    Mat bw = pencil.apply_b(w);
    double ref = 0.0;
    for (Eigen::Index j = 0; j < bw.cols(); ++j) ref = std::max(ref, bw.col(j).norm());
    if (ref < rank_tol) throw AllColumnsNegligible("b_orthonormalize_pair: B*W vanished");
    const Eigen::Index cap = std::min(bw.rows(), bw.cols());
    Mat q(bw.rows(), cap), qw(w.rows(), cap);
    Eigen::Index rank = 0;
    for (Eigen::Index j = 0; j < bw.cols() && rank < cap; ++j) {
        Vec v = bw.col(j);
        Vec x = w.col(j);
        for (int pass = 0; pass < 2 && rank > 0; ++pass) {
            Vec coef = q.leftCols(rank).adjoint() * v;
            v.noalias() -= q.leftCols(rank) * coef;
            x.noalias() -= qw.leftCols(rank) * coef;
        }
        double r = v.norm();
        if (r < rank_tol * ref) continue;
        q.col(rank) = v / r;
        qw.col(rank) = x / r;
        ++rank;
    }
    return qw.leftCols(rank);
}

Mat gaussian_block(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Mat z(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = gauss(rng);
    return z;
}

bool inside(double s, double alpha, double beta) { return s > alpha && s < beta; }

Mat take_cols(const Mat& x, const std::vector<Eigen::Index>& idx) {
    Mat out(x.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = x.col(idx[j]);
    return out;
}

RVec take(const RVec& x, const std::vector<Eigen::Index>& idx) {
    RVec out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out(static_cast<Eigen::Index>(j)) = x(idx[j]);
    return out;
}

}  // namespace

void SolverOptions::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(beta > alpha) || alpha < 0.0)
        throw InvalidArgument("interval must satisfy beta > alpha >= 0");
    if (n_nodes < 2 || n_nodes % 2 != 0) throw InvalidArgument("node count must be even and >= 2");
    if (!(aspect_ratio > 0.0)) throw InvalidArgument("aspect ratio must be positive");
    if (subspace_size && *subspace_size < 1) throw InvalidArgument("subspace size must be >= 1");
    if (tol && !(*tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
    if (trace_samples < 1) throw InvalidArgument("trace sample count must be >= 1");
}

const char* stopping_reason_name(StoppingReason r) {
    switch (r) {
        case StoppingReason::AllConverged: return "AllConverged";
        case StoppingReason::StagnantCount: return "StagnantCount";
        case StoppingReason::MaxIterations: return "MaxIterations";
        case StoppingReason::EmptyInterval: return "EmptyInterval";
    }
    return "MaxIterations";
}

double default_tol(const SparsePencil& pencil) {
    return 1e-14 * std::sqrt(static_cast<double>(pencil.m()));
}

RitzResult rayleigh_ritz(const SparsePencil& pencil, const SubspacePair& pair) {
    if (!pair.orthonormalized) throw NotOrthonormalized("rayleigh_ritz: pair is not orthonormalized");
    if (pair.u.rows() != pencil.m() || pair.w.rows() != pencil.n() || pair.u.cols() != pair.w.cols())
        throw DimensionMismatch("rayleigh_ritz: pair does not match the pencil");
    Mat ap = pair.u.adjoint() * pencil.apply_a(pair.w);
    SvdFactors f = small_svd(ap);
    RitzResult rr;
    rr.sigma = f.sigma;
    rr.pair.u = pair.u * f.u;
    rr.pair.w = pair.w * f.w;
    rr.pair.orthonormalized = true;
    return rr;
}

SubspacePair b_orthonormalize_pair(const SparsePencil& pencil, const SubspacePair& raw) {
    if (raw.u.rows() != pencil.m() || raw.w.rows() != pencil.n())
        throw DimensionMismatch("b_orthonormalize_pair: block rows do not match the pencil");
    if (raw.u.cols() != raw.w.cols()) throw DimensionMismatch("b_orthonormalize_pair: column counts differ");
    require_finite(raw.u, "b_orthonormalize_pair");
    require_finite(raw.w, "b_orthonormalize_pair");

    QrResult qu = qr_orthonormalize(normalize_columns(raw.u), default_rank_tol(pencil.m()));
    const double wtol = default_rank_tol(pencil.p());
    Mat w = b_gram_schmidt(pencil, normalize_columns(raw.w), wtol);
    if (w.cols() > 0) w = b_gram_schmidt(pencil, w, wtol);
    if (w.cols() == 0) throw AllColumnsNegligible("b_orthonormalize_pair: W has no usable columns");

    const Eigen::Index r = std::min<Eigen::Index>(qu.rank, w.cols());
    SubspacePair out;
    out.u = qu.q.leftCols(r);
    out.w = w.leftCols(r);
    out.orthonormalized = true;
    return out;
}

std::vector<Eigen::Index> select_components(const RVec& sigma, const RVec& residuals, double alpha, double beta,
                                            Eigen::Index ell) {
    if (sigma.size() != residuals.size()) throw DimensionMismatch("select_components: size mismatch");
    std::vector<Eigen::Index> in, out;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) (inside(sigma(i), alpha, beta) ? in : out).push_back(i);
    std::stable_sort(in.begin(), in.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return residuals(a) < residuals(b); });
    auto dist = [&](Eigen::Index i) {
        return sigma(i) <= alpha ? alpha - sigma(i) : sigma(i) - beta;
    };
    std::stable_sort(out.begin(), out.end(), [&](Eigen::Index a, Eigen::Index b) {
        double da = dist(a), db = dist(b);
        if (da != db) return da < db;
        return residuals(a) < residuals(b);
    });
    in.insert(in.end(), out.begin(), out.end());
    if (static_cast<Eigen::Index>(in.size()) > ell) in.resize(static_cast<std::size_t>(std::max<Eigen::Index>(ell, 0)));
    return in;
}

ResidualCheck check_convergence(const SparsePencil& pencil, const RVec& sigma, const Mat& u, const Mat& w,
                                double tol) {
    const Eigen::Index k = sigma.size();
    if (u.cols() != k || w.cols() != k) throw DimensionMismatch("check_convergence: size mismatch");
    Mat aw = pencil.apply_a(w);
    Mat atu = pencil.apply_a_adjoint(u);
    Mat btbw = pencil.apply_btb(w);
    const double na = pencil.norm_a();
    const double nb2 = pencil.norm_b() * pencil.norm_b();
    ResidualCheck rc;
    rc.r1.resize(k);
    rc.r2.resize(k);
    rc.rel1.resize(k);
    rc.rel2.resize(k);
    rc.rel.resize(k);
    rc.flags.assign(static_cast<std::size_t>(k), false);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double s = std::abs(sigma(i));
        const double wn = w.col(i).norm();
        rc.r1(i) = (aw.col(i) - u.col(i) * sigma(i)).norm();
        rc.r2(i) = (atu.col(i) - btbw.col(i) * sigma(i)).norm();
        const double d1 = na * wn + s;
        const double d2 = na + s * nb2 * wn;
        rc.rel1(i) = d1 > 0.0 ? rc.r1(i) / d1 : rc.r1(i);
        rc.rel2(i) = d2 > 0.0 ? rc.r2(i) / d2 : rc.r2(i);
        rc.rel(i) = std::max(rc.rel1(i), rc.rel2(i));
        rc.flags[static_cast<std::size_t>(i)] = rc.r1(i) <= tol * d1 && rc.r2(i) <= tol * d2;
    }
    return rc;
}

void recover_full_gsvd(GsvdSolution& sol, const SparsePencil& pencil) {
    const Eigen::Index k = sol.sigma.size();
    sol.v = pencil.apply_b(sol.w);
    sol.s.resize(k);
    sol.c.resize(k);
    sol.x.resize(sol.w.rows(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
        sol.s(i) = 1.0 / std::sqrt(1.0 + sol.sigma(i) * sol.sigma(i));
        sol.c(i) = sol.sigma(i) * sol.s(i);
        sol.x.col(i) = sol.w.col(i) * sol.s(i);
    }
    Mat ax = pencil.apply_a(sol.x);
    Mat bx = pencil.apply_b(sol.x);
    sol.recovery_a.resize(k);
    sol.recovery_b.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        sol.recovery_a(i) = (ax.col(i) - sol.u.col(i) * sol.c(i)).norm();
        sol.recovery_b(i) = (bx.col(i) - sol.v.col(i) * sol.s(i)).norm();
    }
}

SolveResult feast_gsvd(FactorizationCache& cache, const SolverOptions& opts) {
    using clock = std::chrono::steady_clock;
    opts.validate();
    const SparsePencil& pencil = cache.pencil();
    const Eigen::Index m = pencil.m(), n = pencil.n();
    const Eigen::Index max_cols = std::min(m, n);
    const auto t0 = clock::now();

    SolveResult res;
    ConvergenceReport& rep = res.report;
    rep.tol = opts.tol ? *opts.tol : default_tol(pencil);
    const double tol = rep.tol;
    EllipseContour contour = build_ellipse(opts.alpha, opts.beta, opts.aspect_ratio, opts.n_nodes);

    std::mt19937_64 rng(opts.seed);
    Eigen::Index ell = 0;
    SubspacePair pair;
    if (opts.initial_guess) {
        const SubspacePair& g = *opts.initial_guess;
        if (g.u.rows() != m || g.w.rows() != n || g.u.cols() != g.w.cols() || g.u.cols() < 1)
            throw GuessDimensionMismatch("initial guess must be m x l and n x l with matching l");
        ell = g.u.cols();
        pair = b_orthonormalize_pair(pencil, g);
    } else {
        if (opts.subspace_size) {
            ell = *opts.subspace_size;
        } else {
            rep.estimate = estimate_count(cache, contour, opts.trace_samples, opts.seed + 0x9e3779b97f4a7c15ULL);
            if (rep.estimate->k_hat < 0.5) {
                rep.reason = StoppingReason::EmptyInterval;
                rep.cache = cache.stats();
                res.solution.sigma.resize(0);
                res.solution.u.resize(m, 0);
                res.solution.w.resize(n, 0);
                recover_full_gsvd(res.solution, pencil);
                return res;
            }
            ell = auto_subspace_size(rep.estimate->k_hat);
        }
        ell = std::min(ell, max_cols);
        SubspacePair raw;
        raw.u = gaussian_block(m, ell, rng);
        raw.w = gaussian_block(n, ell, rng);
        pair = b_orthonormalize_pair(pencil, raw);
    }
    rep.subspace_size = static_cast<int>(ell);

    if (opts.variant == FilterVariant::SimplePlusRR) pair = rayleigh_ritz(pencil, pair).pair;

    RVec sigma;
    ResidualCheck rc;
    std::vector<bool> locked;
    int prev_count = -1, prev_inside = -1;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        // Soft locking: converged in-interval columns skip the filter and lead the new basis.
        std::vector<Eigen::Index> keep_idx, active_idx;
        for (Eigen::Index j = 0; j < pair.cols(); ++j) {
            bool lock = opts.soft_locking && !locked.empty() && locked[static_cast<std::size_t>(j)];
            (lock ? keep_idx : active_idx).push_back(j);
        }
        SubspacePair active{take_cols(pair.u, active_idx), take_cols(pair.w, active_idx), true};
        Mat y = apply_variant(cache, contour, active, opts.variant, it == 1);

        SubspacePair raw;
        raw.u.resize(m, static_cast<Eigen::Index>(keep_idx.size()) + y.cols());
        raw.w.resize(n, raw.u.cols());
        raw.u.leftCols(static_cast<Eigen::Index>(keep_idx.size())) = take_cols(pair.u, keep_idx);
        raw.w.leftCols(static_cast<Eigen::Index>(keep_idx.size())) = take_cols(pair.w, keep_idx);
        raw.u.rightCols(y.cols()) = y.topRows(m);
        raw.w.rightCols(y.cols()) = y.bottomRows(n);

        pair = b_orthonormalize_pair(pencil, raw);
        RitzResult rr = rayleigh_ritz(pencil, pair);
        pair = rr.pair;
        sigma = rr.sigma;
        rc = check_convergence(pencil, sigma, pair.u, pair.w, tol);

        IterationRecord rec;
        rec.iteration = it;
        for (Eigen::Index i = 0; i < sigma.size(); ++i)
            if (inside(sigma(i), opts.alpha, opts.beta))
                rec.max_rel_residual_pre_selection = std::max(rec.max_rel_residual_pre_selection, rc.rel(i));

        if (pair.cols() > ell) {
            auto keep = select_components(sigma, rc.rel, opts.alpha, opts.beta, ell);
            pair.u = take_cols(pair.u, keep);
            pair.w = take_cols(pair.w, keep);
            sigma = take(sigma, keep);
            rc.r1 = take(rc.r1, keep);
            rc.r2 = take(rc.r2, keep);
            rc.rel1 = take(rc.rel1, keep);
            rc.rel2 = take(rc.rel2, keep);
            rc.rel = take(rc.rel, keep);
            std::vector<bool> f;
            for (auto i : keep) f.push_back(rc.flags[static_cast<std::size_t>(i)]);
            rc.flags = f;
        }

        locked.assign(static_cast<std::size_t>(sigma.size()), false);
        for (Eigen::Index i = 0; i < sigma.size(); ++i) {
            rec.ritz_values.push_back(sigma(i));
            if (!inside(sigma(i), opts.alpha, opts.beta)) continue;
            ++rec.inside;
            rec.max_rel_residual = std::max(rec.max_rel_residual, rc.rel(i));
            if (rc.flags[static_cast<std::size_t>(i)]) {
                ++rec.converged;
                rec.converged_values.push_back(sigma(i));
                locked[static_cast<std::size_t>(i)] = true;
            }
        }
        std::sort(rec.converged_values.begin(), rec.converged_values.end(), std::greater<>());
        rec.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        rep.history.push_back(rec);
        rep.iterations = it;

        if (rec.inside > 0 && rec.converged == rec.inside) {
            rep.reason = StoppingReason::AllConverged;
            break;
        }
        // A count of zero only stalls when nothing was inside on both iterations.
        if (rec.converged == prev_count && (rec.converged > 0 || (rec.inside == 0 && prev_inside == 0))) {
            rep.reason = StoppingReason::StagnantCount;
            break;
        }
        prev_count = rec.converged;
        prev_inside = rec.inside;
        rep.reason = StoppingReason::MaxIterations;
    }
    rep.cache = cache.stats();

    std::vector<Eigen::Index> sel;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (inside(sigma(i), opts.alpha, opts.beta)) sel.push_back(i);
    std::stable_sort(sel.begin(), sel.end(), [&](Eigen::Index a, Eigen::Index b) { return sigma(a) > sigma(b); });

    GsvdSolution& sol = res.solution;
    sol.sigma = take(sigma, sel);
    sol.u = take_cols(pair.u, sel);
    sol.w = take_cols(pair.w, sel);
    sol.r1 = take(rc.r1, sel);
    sol.r2 = take(rc.r2, sel);
    sol.rel1 = take(rc.rel1, sel);
    sol.rel2 = take(rc.rel2, sel);
    for (auto i : sel) sol.converged.push_back(rc.flags[static_cast<std::size_t>(i)]);
    recover_full_gsvd(sol, pencil);
    return res;
}

SolveResult feast_gsvd(const SparsePencil& pencil, const SolverOptions& opts) {
    FactorizationCache cache(pencil);
    return feast_gsvd(cache, opts);
}

SolveResult feast_svd(const SparseMatrix& a, const SolverOptions& opts) {
    SparsePencil pencil = SparsePencil::svd(a);
    return feast_gsvd(pencil, opts);
}

}  // namespace feast
