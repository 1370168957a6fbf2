#ifndef CSRR_RUNNER_HPP
#define CSRR_RUNNER_HPP

#include <array>
#include <functional>

#include "csrr/problem.hpp"

namespace csrr {

struct RunOptions {
    int n = 1;                 // class degree for verify-rr / cs
    int trials = 200;          // sample count for search-basic
    bool symbolic = true;
    bool numeric = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    // Grid maxima for verify-rr --grid and selftest: N, delta, n.
    std::optional<std::array<int, 3>> grid;
    int grid_seeds = 30;
    std::string lemma;         // for verify-identities: "4.3", "4.5", "4.6"
    int word_length = 4;       // trace-word length bound
    int resolvent_vars = 3;    // variable count bound for the dlog identity
};

struct RunResult {
    std::vector<Report> reports;
    int exit_code; // 0 all pass, 1 any fail, 2 input error
};

// Dispatch one CLI command against a parsed problem.  Commands:
// check-basic, cs, gm, verify-rr, verify-identities, pushforward,
// search-basic, selftest.
RunResult run_command(const std::string& command, const ProblemFile& problem,
                      const RunOptions& opts);

// Deterministic sample connection for grids and the selftest: rational
// residue matrices and a z-free base part drawn from the given seed.
LogConnection sample_grid_connection(std::size_t rank, std::size_t delta,
                                     std::uint64_t seed);

// Deterministically merged parallel map over an index range.
std::vector<Report> parallel_reports(
    std::size_t count, const std::function<Report(std::size_t)>& fn);

} // namespace csrr

#endif
