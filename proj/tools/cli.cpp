#include "cli.hpp"

#include "feastsvd/errors.hpp"
#include "feastsvd/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace feast::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Problem {
    SparseMatrix a;
    std::optional<SparseMatrix> b;
};

Problem load_problem(const RunConfig& cfg) {
    if (cfg.a_path.empty()) throw InvalidArgument("no matrix A given (use --a PATH)");
    int sources = (!cfg.b_path.empty() ? 1 : 0) + (cfg.derivative_b ? 1 : 0);
    if (sources > 1) throw InvalidArgument("--b and --derivative-b are mutually exclusive");
    if (cfg.svd_flag && (sources > 0 || cfg.gsvd_flag)) throw InvalidArgument("--svd takes no B matrix");
    if (cfg.gsvd_flag && sources == 0) throw InvalidArgument("--gsvd needs --b PATH or --derivative-b");
    Problem p{read_matrix_market(cfg.a_path), std::nullopt};
    if (!cfg.b_path.empty()) p.b = read_matrix_market(cfg.b_path);
    if (cfg.derivative_b) p.b = make_derivative_b(p.a.cols());
    return p;
}

SparsePencil make_pencil(const Problem& p) {
    return p.b ? SparsePencil::gsvd(p.a, *p.b) : SparsePencil::svd(p.a);
}

fs::path out_path(const RunConfig& cfg) {
    fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

SubspacePair load_guess(const RunConfig& cfg, const SparsePencil& pencil) {
    const Eigen::Index m = pencil.m(), n = pencil.n();
    SubspacePair g;
    if (!cfg.guess_path.empty()) {
        Mat z = read_matrix_market_dense(cfg.guess_path);
        if (z.rows() != m + n) throw GuessDimensionMismatch("guess must have m+n rows");
        g.u = z.topRows(m);
        g.w = z.bottomRows(n);
    } else if (!cfg.guess_u_path.empty() && !cfg.guess_w_path.empty()) {
        g.u = read_matrix_market_dense(cfg.guess_u_path);
        g.w = read_matrix_market_dense(cfg.guess_w_path);
        if (g.u.rows() != m || g.w.rows() != n || g.u.cols() != g.w.cols())
            throw GuessDimensionMismatch("guess U must be m x l and W n x l");
    } else {
        throw InvalidArgument("refine needs --guess PATH or --guess-u/--guess-w");
    }
    return g;
}

void print_summary(std::ostream& out, const SolveResult& r) {
    out << "stopping_reason " << stopping_reason_name(r.report.reason) << "\n";
    out << "iterations " << r.report.iterations << "\n";
    out << "subspace_size " << r.report.subspace_size << "\n";
    for (Eigen::Index i = 0; i < r.solution.size(); ++i)
        out << "sigma " << fmt(r.solution.sigma(i)) << " rel1 " << r.solution.rel1(i) << " rel2 "
            << r.solution.rel2(i) << (r.solution.converged[static_cast<std::size_t>(i)] ? " converged" : "")
            << "\n";
}

json options_json(const SolverOptions& o) {
    json j;
    j["alpha"] = o.alpha;
    j["beta"] = o.beta;
    j["nodes"] = o.n_nodes;
    j["aspect"] = o.aspect_ratio;
    j["subspace"] = o.subspace_size ? json(*o.subspace_size) : json("auto");
    j["tol"] = o.tol ? json(*o.tol) : json("auto");
    j["max_iterations"] = o.max_iterations;
    j["variant"] = variant_name(o.variant);
    j["soft_locking"] = o.soft_locking;
    j["samples"] = o.trace_samples;
    return j;
}

int report_error(std::ostream& err, const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
}

}  // namespace

std::pair<double, double> parse_interval(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw InvalidArgument("interval must be 'alpha,beta'");
    double a = 0.0, b = 0.0;
    try {
        std::size_t used = 0;
        a = std::stod(s.substr(0, comma), &used);
        if (used != comma) throw InvalidArgument("bad interval");
        std::string rest = s.substr(comma + 1);
        b = std::stod(rest, &used);
        if (used != rest.size()) throw InvalidArgument("bad interval");
    } catch (const std::logic_error&) {
        throw InvalidArgument("interval must be 'alpha,beta' with numeric bounds");
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a) || a < 0.0)
        throw InvalidArgument("interval must satisfy beta > alpha >= 0");
    return {a, b};
}

SolverOptions make_options(const RunConfig& cfg) {
    SolverOptions o;
    std::tie(o.alpha, o.beta) = parse_interval(cfg.interval);
    o.n_nodes = cfg.nodes;
    o.aspect_ratio = cfg.aspect;
    if (cfg.subspace != "auto") {
        try {
            o.subspace_size = std::stoi(cfg.subspace);
        } catch (const std::logic_error&) {
            throw InvalidArgument("--subspace must be a count or 'auto'");
        }
    }
    if (cfg.tol != "auto") {
        try {
            o.tol = std::stod(cfg.tol);
        } catch (const std::logic_error&) {
            throw InvalidArgument("--tol must be a number or 'auto'");
        }
    }
    o.max_iterations = cfg.max_iterations;
    o.variant = parse_variant(cfg.variant);
    o.soft_locking = cfg.soft_locking;
    o.trace_samples = cfg.samples;
    o.seed = cfg.seed;
    o.validate();
    return o;
}

int exit_code_for(const SolveResult& r) {
    switch (r.report.reason) {
        case StoppingReason::AllConverged:
        case StoppingReason::EmptyInterval: return kOk;
        case StoppingReason::MaxIterations: return kMaxIterations;
        case StoppingReason::StagnantCount: {
            for (bool c : r.solution.converged)
                if (!c) return kStagnant;
            return kOk;
        }
    }
    return kError;
}

void write_history_csv(const std::string& path, const ConvergenceReport& report) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << "iter,max_rel_residual,converged\n";
    for (const auto& h : report.history) f << h.iteration << "," << fmt(h.max_rel_residual) << "," << h.converged << "\n";
    if (!f) throw IoError("write failed: " + path);
}

void write_report_json(const std::string& path, const RunConfig& cfg, const SolverOptions& opts,
                       const SparsePencil& pencil, const SolveResult& r) {
    json j;
    j["mode"] = pencil.mode() == Mode::Svd ? "svd" : "gsvd";
    j["interval"] = {opts.alpha, opts.beta};
    j["sigma"] = json::array();
    j["residuals"] = json::array();
    const GsvdSolution& s = r.solution;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        j["sigma"].push_back(s.sigma(i));
        j["residuals"].push_back({{"r1", s.r1(i)},
                                  {"r2", s.r2(i)},
                                  {"rel1", s.rel1(i)},
                                  {"rel2", s.rel2(i)},
                                  {"converged", static_cast<bool>(s.converged[static_cast<std::size_t>(i)])},
                                  {"c", s.c(i)},
                                  {"s", s.s(i)}});
    }
    j["iterations"] = r.report.iterations;
    j["stopping_reason"] = stopping_reason_name(r.report.reason);
    j["options_echo"] = options_json(opts);
    j["options_echo"]["a"] = cfg.a_path;
    j["options_echo"]["b"] = cfg.derivative_b ? "derivative" : cfg.b_path;
    j["seed"] = opts.seed;
    j["tol"] = r.report.tol;
    j["subspace_size"] = r.report.subspace_size;
    json hist = json::array();
    for (const auto& h : r.report.history)
        hist.push_back({{"iter", h.iteration},
                        {"max_rel_residual", h.max_rel_residual},
                        {"max_rel_residual_pre_selection", h.max_rel_residual_pre_selection},
                        {"converged", h.converged},
                        {"inside", h.inside},
                        {"ritz_values", h.ritz_values},
                        {"wall_seconds", h.wall_seconds}});
    j["history"] = hist;
    if (r.report.estimate) {
        j["estimate"] = {{"k_hat", r.report.estimate->k_hat},
                         {"stddev", r.report.estimate->stddev},
                         {"samples", r.report.estimate->samples}};
    }
    j["cache"] = {{"factorizations", r.report.cache.factorizations},
                  {"hits", r.report.cache.hits},
                  {"solves", r.report.cache.solves}};
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << j.dump(2) << "\n";
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        SolverOptions opts = make_options(cfg);
        Problem p = load_problem(cfg);
        SparsePencil pencil = make_pencil(p);
        SolveResult r = feast_gsvd(pencil, opts);
        fs::path dir = out_path(cfg);
        write_report_json((dir / "report.json").string(), cfg, opts, pencil, r);
        write_history_csv((dir / "history.csv").string(), r.report);
        if (cfg.format == "csv") {
            std::ofstream f(dir / "solution.csv");
            f << "sigma,c,s,rel1,rel2,converged\n";
            for (Eigen::Index i = 0; i < r.solution.size(); ++i)
                f << fmt(r.solution.sigma(i)) << "," << fmt(r.solution.c(i)) << "," << fmt(r.solution.s(i)) << ","
                  << r.solution.rel1(i) << "," << r.solution.rel2(i) << ","
                  << (r.solution.converged[static_cast<std::size_t>(i)] ? 1 : 0) << "\n";
        }
        print_summary(out, r);
        return exit_code_for(r);
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        SolverOptions opts = make_options(cfg);
        Problem p = load_problem(cfg);
        SparsePencil pencil = make_pencil(p);
        FactorizationCache cache(pencil);
        EllipseContour contour = build_ellipse(opts.alpha, opts.beta, opts.aspect_ratio, opts.n_nodes);
        TraceEstimate est = estimate_count(cache, contour, opts.trace_samples, opts.seed);
        const int ell = auto_subspace_size(est.k_hat);
        out << "mode " << (pencil.mode() == Mode::Svd ? "svd" : "gsvd") << "\n";
        out << "k_hat " << fmt(est.k_hat) << "\n";
        out << "stddev " << est.stddev << "\n";
        out << "samples " << est.samples << "\n";
        out << "recommended_subspace " << ell << "\n";
        std::string note;
        if (est.samples < 30) {
            note = "fewer than 30 samples; uncertainty widened";
            out << "note " << note << "\n";
        }
        if (!cfg.out_dir.empty()) {
            json j{{"mode", pencil.mode() == Mode::Svd ? "svd" : "gsvd"},
                   {"interval", {opts.alpha, opts.beta}},
                   {"k_hat", est.k_hat},
                   {"stddev", est.stddev},
                   {"samples", est.samples},
                   {"values", est.values},
                   {"imag_residue", est.imag_residue},
                   {"recommended_subspace", ell},
                   {"seed", opts.seed}};
            if (!note.empty()) j["note"] = note;
            std::ofstream f(out_path(cfg) / "estimate.json");
            f << j.dump(2) << "\n";
        }
        return kOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

int cmd_compare_filters(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        SolverOptions base = make_options(cfg);
        Problem p = load_problem(cfg);
        SparsePencil pencil = make_pencil(p);
        FactorizationCache cache(pencil);

        std::optional<SubspacePair> guess;
        if (cfg.fixture != "random") {
            GuessKind kind = parse_guess_kind(cfg.fixture);
            std::optional<Mat> bd;
            if (p.b) bd = p.b->to_dense();
            DenseGsvdReference ref = dense_gsvd_reference(p.a.to_dense(), bd);
            std::vector<Eigen::Index> in;
            for (Eigen::Index i = 0; i < ref.sigma.size(); ++i)
                if (ref.sigma(i) > base.alpha && ref.sigma(i) < base.beta) in.push_back(i);
            if (in.empty()) throw InvalidArgument("artificial fixtures need a nonempty interval");
            Mat ut(pencil.m(), static_cast<Eigen::Index>(in.size())), wt(pencil.n(), ut.cols());
            for (std::size_t j = 0; j < in.size(); ++j) {
                ut.col(static_cast<Eigen::Index>(j)) = ref.u.col(in[j]);
                wt.col(static_cast<Eigen::Index>(j)) = ref.w.col(in[j]);
            }
            Eigen::Index ell = base.subspace_size ? *base.subspace_size
                                                  : auto_subspace_size(static_cast<double>(in.size()));
            ell = std::min(std::max<Eigen::Index>(ell, ut.cols()), std::min(pencil.m(), pencil.n()));
            guess = make_artificial_guess(ut, wt, ell, kind, 0, cfg.seed);
        }

        fs::path dir = out_path(cfg);
        out << "variant,iterations,stopping_reason,first_max_rel_residual\n";
        for (FilterVariant v : {FilterVariant::SimplePlus, FilterVariant::SimplePlusRR, FilterVariant::SumPlusMinus,
                                FilterVariant::AugmentedPair}) {
            SolverOptions o = base;
            o.variant = v;
            o.initial_guess = guess;
            SolveResult r = feast_gsvd(cache, o);
            write_history_csv((dir / (std::string("history_") + variant_name(v) + ".csv")).string(), r.report);
            double first = r.report.history.empty() ? 0.0 : r.report.history.front().max_rel_residual;
            out << variant_name(v) << "," << r.report.iterations << "," << stopping_reason_name(r.report.reason)
                << "," << first << "\n";
        }
        return kOk;
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

int cmd_refine(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        SolverOptions opts = make_options(cfg);
        Problem p = load_problem(cfg);
        SparsePencil pencil = make_pencil(p);
        opts.initial_guess = load_guess(cfg, pencil);
        SolveResult r = feast_gsvd(pencil, opts);
        fs::path dir = out_path(cfg);
        write_report_json((dir / "report.json").string(), cfg, opts, pencil, r);
        write_history_csv((dir / "history.csv").string(), r.report);
        out << "iterations_to_convergence "
            << (r.report.reason == StoppingReason::AllConverged ? std::to_string(r.report.iterations) : "none")
            << "\n";
        print_summary(out, r);
        return exit_code_for(r);
    } catch (const std::exception& e) {
        return report_error(err, e);
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Contour-integral partial SVD/GSVD solver"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_problem = [&](CLI::App* sub) {
        sub->add_option("--a,a", cfg.a_path, "Matrix Market file for A");
        sub->add_option("--b", cfg.b_path, "Matrix Market file for B (GSVD)");
        sub->add_flag("--derivative-b", cfg.derivative_b, "Use the (n+1) x n forward difference as B");
        sub->add_flag("--svd", cfg.svd_flag, "SVD mode");
        sub->add_flag("--gsvd", cfg.gsvd_flag, "GSVD mode");
        sub->add_option("--interval", cfg.interval, "alpha,beta")->required();
        sub->add_option("--nodes", cfg.nodes, "Quadrature nodes");
        sub->add_option("--aspect", cfg.aspect, "Ellipse aspect ratio a/b");
        sub->add_option("--subspace", cfg.subspace, "Subspace size or 'auto'");
        sub->add_option("--tol", cfg.tol, "Convergence tolerance or 'auto'");
        sub->add_option("--max-iter", cfg.max_iterations, "Iteration cap");
        sub->add_option("--variant", cfg.variant, "plus | plus-rr | sum | augmented");
        sub->add_flag("!--no-locking", cfg.soft_locking, "Disable soft locking");
        sub->add_option("--samples", cfg.samples, "Trace estimator samples");
        sub->add_option("--seed", cfg.seed, "Random seed");
        sub->add_option("--out", cfg.out_dir, "Output directory");
        sub->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* solve = app.add_subcommand("solve", "Compute the triplets inside an interval");
    add_problem(solve);
    CLI::App* estimate = app.add_subcommand("estimate", "Estimate the count inside an interval");
    add_problem(estimate);
    CLI::App* compare = app.add_subcommand("compare-filters", "Run all four filter variants");
    add_problem(compare);
    compare->add_option("--fixture", cfg.fixture, "random | artificial1 | artificial2");
    CLI::App* refine = app.add_subcommand("refine", "Refine a supplied subspace");
    add_problem(refine);
    refine->add_option("--guess", cfg.guess_path, "Stacked (m+n) x l array file");
    refine->add_option("--guess-u", cfg.guess_u_path, "m x l array file");
    refine->add_option("--guess-w", cfg.guess_w_path, "n x l array file");
    CLI::App* fetch = app.add_subcommand("fetch", "Download a test matrix");
    fetch->add_option("name", cfg.fetch_name, "Matrix name")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << "\n";
        return kError;
    }

    if (solve->parsed()) return cmd_solve(cfg, out, err);
    if (estimate->parsed()) return cmd_estimate(cfg, out, err);
    if (compare->parsed()) return cmd_compare_filters(cfg, out, err);
    if (refine->parsed()) return cmd_refine(cfg, out, err);
    if (fetch->parsed()) return cmd_fetch(cfg, out, err);
    return kError;
}

}  // namespace feast::cli
