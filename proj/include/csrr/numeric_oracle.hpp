#ifndef CSRR_NUMERIC_ORACLE_HPP
#define CSRR_NUMERIC_ORACLE_HPP

#include <complex>
#include <random>

#include "csrr/logconn.hpp"
#include "csrr/report.hpp"
#include "csrr/rr_engine.hpp"

namespace csrr {

struct NumericConfig {
    std::uint64_t seed = 1;
    int range = 12;          // sampled point numerators live in [-range, range]
    double tol = 1e-9;       // relative comparison tolerance
    double den_floor = 1e-12;
    int max_attempts = 20;   // re-randomizations on degenerate samples
    int samples = 10;
};

// F(z) = sum_tau a_tau prod_{theta != tau} (z - a_theta) - prod (z - a_tau),
// the numerator of the canonical meromorphic section; leading coefficient
// is -1 and the roots are the section's zeroes.
Poly build_section_numerator(const VarUniversePtr& u,
                             const std::vector<RatFun>& points);

// Sampled configuration: rational values for the symbolic points (distinct,
// nonzero) and the parameters.
struct SampledConfig {
    std::vector<std::complex<double>> assignment; // one slot per variable
    std::vector<Rat> exact;                       // same, as rationals
};

SampledConfig sample_configuration(const LogConnection& c, std::mt19937_64& rng,
                                   const NumericConfig& cfg);

struct RootData {
    std::vector<std::complex<double>> roots;               // beta_i
    std::vector<std::vector<std::complex<double>>> droots; // [i][var] = d beta_i / d var
};

// Roots of the section numerator at a sampled configuration, with implicit
// derivatives with respect to every base-point variable.  Throws PoleError
// on clustered roots or vanishing derivative denominators; the caller
// resamples.
RootData roots_and_derivatives(const LogConnection& c, const SampledConfig& s,
                               const NumericConfig& cfg);

// Direct numeric evaluation of the bundle-class side: pull the Newton class
// back along every root section and along z = 0, with the alternating signs.
NumericTensor eval_rhs_direct(const LogConnection& c, int n,
                              const SampledConfig& s, const RootData& roots,
                              const NumericConfig& cfg);

// Relative coefficientwise distance of two tensors (scale: the dominant
// coefficient magnitude, floored at 1).
double tensor_distance(const NumericTensor& a, const NumericTensor& b);

// End-to-end numeric check of the Riemann-Roch identity on sampled
// configurations.
Report verify_rr_numeric(const LogConnection& c, int n, const NumericConfig& cfg);

// Numeric check of the root-sum identities: the pulled-back dlog products
// against the combinatorial sum, and the alternating middle expression with
// dlog F(a_j) against the root side.  J carries 1-based point indices.
Report verify_root_sum_identities(const LogConnection& c,
                                  const std::vector<std::size_t>& J,
                                  const NumericConfig& cfg);

} // namespace csrr

#endif
