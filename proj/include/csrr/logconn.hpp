#ifndef CSRR_LOGCONN_HPP
#define CSRR_LOGCONN_HPP

#include <optional>
#include <string>
#include <vector>

#include "csrr/chern_simons.hpp"
#include "csrr/matform.hpp"

namespace csrr {

// A marked point on the affine line: a declared base-point variable or an
// explicit rational constant.
struct PointSpec {
    static PointSpec symbol(std::size_t var) { return {var, std::nullopt}; }
    static PointSpec value(Rat v) { return {std::nullopt, std::move(v)}; }

    std::optional<std::size_t> sym;
    std::optional<Rat> val;

    bool symbolic() const { return sym.has_value(); }
    RatFun as_ratfun(const VarUniversePtr& u) const {
        return sym ? RatFun::variable(u, *sym) : RatFun::constant(u, *val);
    }
};

// Gauss-Manin data of the model connection: the degree-zero part, the
// diagonal blocks, the full block matrix acting on the relative 1-form
// basis, and the relative differential.
struct GaussManinData {
    MatForm phi_gm;            // N x N, 1-forms over the base
    std::vector<MatForm> psi;  // diagonal blocks Psi_tau, N x N each
    MatForm b;                 // N*delta x N*delta, 1-forms
    MatForm nabla_rel;         // N*delta x N, 0-forms

    // Block of b at (row block tau, column block nu).
    MatForm block(std::size_t tau, std::size_t nu) const;
};

struct BasicVerdict {
    bool basic;
    Form witness; // first nonzero discrepancy (zero form when basic)
};

// Logarithmic connection on the trivial rank-N bundle over the projective
// line: residue matrices at delta marked points plus a z-free base part,
// with a simple pole at infinity carrying the opposite residue sum.
class LogConnection {
  public:
    LogConnection(GenUniversePtr guni, std::size_t rank,
                  std::vector<PointSpec> points, std::vector<MatForm> residues,
                  MatForm phi);

    const GenUniversePtr& universe() const { return guni_; }
    std::size_t rank() const { return rank_; }
    std::size_t delta() const { return points_.size(); }
    const std::vector<PointSpec>& points() const { return points_; }
    RatFun point_value(std::size_t nu) const {
        return points_.at(nu).as_ratfun(guni_->vars());
    }
    const MatForm& residue(std::size_t nu) const { return residues_.at(nu); }
    const MatForm& phi() const { return phi_; }
    std::size_t fiber_var() const { return fiber_; }

    // Full connection matrix sum_nu A^nu dlog(z - a_nu) + Phi.
    MatForm total_matrix() const;

    // Residue at the point of index nu, or at infinity (-sum of the others).
    MatForm residue_at_infinity() const;

    // Basic-curvature test, run along two independent routes:
    //  (i) the curvature of the total matrix has no dz component and no
    //      z-dependence outside pure base 2-forms;
    // (ii) the first-order system dA_i = [Phi, A_i] - sum_j [A_i,A_j] dlog(a_i-a_j).
    // Disagreement between the routes throws SelfCheckError.
    BasicVerdict check_basic() const;

    GaussManinData gm_data() const;

    // Newton class of the bundle connection (form over the full universe).
    CsClass nw_bundle(int n) const;

    // Newton class of the Gauss-Manin complex: TP(Phi) - sum_tau TP(Psi_tau).
    // Cross-checks the block-trace route TP(B) = sum TP(Psi_tau) and throws
    // SelfCheckError when the two disagree.
    Form nw_gm(int n) const;

  private:
    GenUniversePtr guni_;
    std::size_t rank_;
    std::vector<PointSpec> points_;
    std::vector<MatForm> residues_;
    MatForm phi_;
    std::size_t fiber_;
};

// Trace of a word in {B, dB} evaluated on the full block matrix versus the
// sum over diagonal blocks.  `word` lists the factors; `true` marks dB.
struct TraceWordCheck {
    bool pass;
    Form difference;
};
TraceWordCheck check_trace_word(const GaussManinData& gm,
                                const std::vector<bool>& word);

// Splitting perturbation: phi_map is an N x (N*delta) matrix of 1-forms.
// Returns the perturbed degree-zero part and full block matrix; the
// difference of traces is invariant.
struct PerturbedSplitting {
    MatForm phi_prime; // N x N
    MatForm psi_prime; // N*delta x N*delta
};
PerturbedSplitting perturb_splitting(const LogConnection& c,
                                     const GaussManinData& gm,
                                     const MatForm& phi_map);

// Compatibility of the Gauss-Manin square: the relative differential
// composed with the degree-zero part against the block matrix acting on
// the relative differential (with its Leibniz term).  Holds exactly when
// the curvature is basic.
struct CompatibilityCheck {
    bool pass;
    Form difference;
};
CompatibilityCheck check_gm_compatibility(const LogConnection& c,
                                          const GaussManinData& gm);

} // namespace csrr

#endif
