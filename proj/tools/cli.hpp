#pragma once

#include "feastsvd/driver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace feast::cli {

enum ExitCode { kOk = 0, kError = 1, kStagnant = 2, kMaxIterations = 3, kNetwork = 4 };

struct RunConfig {
    std::string subcommand;
    std::string a_path;
    std::string b_path;
    bool derivative_b = false;
    bool svd_flag = false;
    bool gsvd_flag = false;
    std::string guess_path;    // stacked (m+n) x l array
    std::string guess_u_path;  // or separate U and W files
    std::string guess_w_path;
    std::string interval;      // "alpha,beta"
    int nodes = 12;
    double aspect = 5.0;
    std::string subspace = "auto";
    std::string tol = "auto";
    int max_iterations = 30;
    std::string variant = "augmented";
    bool soft_locking = true;
    int samples = 30;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string format = "json";
    std::string fixture = "random";  // compare-filters: random | artificial1 | artificial2
    std::string fetch_name;
};

// Parses `interval` into (alpha, beta); throws InvalidArgument unless beta > alpha >= 0.
std::pair<double, double> parse_interval(const std::string& s);

SolverOptions make_options(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare_filters(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_refine(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_fetch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int exit_code_for(const SolveResult& result);

void write_history_csv(const std::string& path, const ConvergenceReport& report);
void write_report_json(const std::string& path, const RunConfig& cfg, const SolverOptions& opts,
                       const SparsePencil& pencil, const SolveResult& result);

// Matrices with known sizes for `fetch`.
struct KnownMatrix {
    const char* name;
    const char* group;
    long rows;
    long cols;
    bool transposed;  // listed sizes refer to the transpose of the stored matrix
};
const std::vector<KnownMatrix>& known_matrices();
std::string cache_dir();

// Extracts `member_suffix` from a gzip-compressed tar archive held in memory.
std::optional<std::string> extract_from_targz(const std::string& gz, const std::string& member_suffix);

}  // namespace feast::cli
