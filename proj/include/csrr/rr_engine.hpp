#ifndef CSRR_RR_ENGINE_HPP
#define CSRR_RR_ENGINE_HPP

#include <map>

#include "csrr/logconn.hpp"
#include "csrr/report.hpp"

namespace csrr {

// Coefficients of the transgression of sum_nu A^nu rho_nu + Phi in the
// algebra extended by closed generators rho_1..rho_delta, indexed by the
// subset of rho's appearing.  Every entry is rho-free; the empty-set part
// is the transgression of Phi alone.
struct PjTable {
    int n = 0;
    std::map<std::vector<std::size_t>, Form> by_subset; // nonempty J only
    Form empty_part;
    GenUniversePtr rho_universe;
};

PjTable pj_expansion(const LogConnection& c, int n);

// sum over t outside J of dlog(a_j1 - a_t) ^ ... ^ dlog(a_jr - a_t),
// factors in ascending J order.  J carries 1-based point indices.
Form subset_dlog_sum(const LogConnection& c, const std::vector<std::size_t>& J);
// Same sum over a fresh universe with delta symbolic points a1..a<delta>.
Form subset_dlog_sum(std::size_t delta, const std::vector<std::size_t>& J);

// The combinatorial right-hand side:
//   -sum_{J nonempty} P_J ^ subset_dlog_sum(J) + (1 - delta) * TP_n(Phi).
Form rhs_combinatorial(const LogConnection& c, int n);

// Literal-form comparison of the Gauss-Manin route with the combinatorial
// route; the report also records whether the curvature is basic, since the
// identity itself is universal.
Report verify_rr_symbolic(const LogConnection& c, int n);

// dlog b_1 ^...^ dlog b_r versus the alternating cyclic resolvent
//   sum_k (-1)^(k-1) dlog(b_k) ^ dlog(b_k - b_1) ^ ...hat k... ^ dlog(b_k - b_r).
Report check_dlog_resolvent_identity(std::size_t r);

// Finite algebra M = L[t]/(phi) with a connection given by matrix
// coefficients of powers of t.  phi is monic; coefficients are listed from
// degree 0 to degree r-1 (the leading t^r is implicit).
struct FiniteAlgebra {
    GenUniversePtr guni;             // universe of the base field L
    std::vector<RatFun> phi;         // c_0..c_{r-1}
    std::size_t rank = 1;            // N
    std::vector<MatForm> a_coeffs;   // A_l, N x N of 1-forms; may be empty
    std::vector<RatFun> split_roots; // optional: known distinct roots
};

struct Pushforward {
    MatForm big_b;        // (r*N) x (r*N) connection matrix, basis t^i e_j
    MatForm b0;           // r x r matrix of the pushed-forward trivial line
    std::vector<std::vector<RatFun>> gram; // trace form on the monomial basis
    Form w1;              // trace of big_b
    Form trace_route;     // Tr_{M/L} of the tracewise connection part
    Form newton_correction; // rank * Tr(b0)
};

Pushforward pushforward_build(const FiniteAlgebra& fa);

// The duality and splitting checks:
//  - dG = B0 G + G B0^t entrywise;
//  - 2 Tr(B0) = dlog(det G) (global sign +1);
//  - the trace decomposition w1 = trace_route + newton_correction;
//  - when split roots are given: Nw_n of the pushforward against the sum
//    over roots, literal for n = 2, literal-or-mod-dlog for n = 1 with the
//    Vandermonde unit as witness.
std::vector<Report> pushforward_checks(const FiniteAlgebra& fa);

} // namespace csrr

#endif
