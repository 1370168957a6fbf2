#include "csrr/logconn.hpp"

#include <algorithm>
#include <set>

namespace csrr {

MatForm GaussManinData::block(std::size_t tau, std::size_t nu) const {
    std::size_t n = phi_gm.rows();
    MatForm out(b.universe(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.at(i, j) = b.at(tau * n + i, nu * n + j);
    return out;
}

LogConnection::LogConnection(GenUniversePtr guni, std::size_t rank,
                             std::vector<PointSpec> points,
                             std::vector<MatForm> residues, MatForm phi)
    : guni_(std::move(guni)), rank_(rank), points_(std::move(points)),
      residues_(std::move(residues)), phi_(std::move(phi)), fiber_(0) {
    std::vector<std::string> issues;
    if (rank_ == 0) issues.push_back("rank must be positive");
    if (points_.empty()) issues.push_back("at least one marked point required");
    auto fiber = guni_->vars()->fiber();
    if (!fiber) {
        issues.push_back("universe has no fiber variable");
        throw InputError(issues);
    }
    fiber_ = *fiber;
    if (guni_->rho_count() != 0)
        issues.push_back("connection universe must not carry rho generators");

    // Points: symbols must be distinct base-point variables; constant
    // points must be pairwise distinct values.
    std::set<std::size_t> sym_seen;
    std::set<std::string> const_seen;
    for (const auto& p : points_) {
        if (p.symbolic()) {
            if (guni_->vars()->kind(*p.sym) != VarKind::BasePoint)
                issues.push_back("symbolic point is not a base-point variable: " +
                                 guni_->vars()->name(*p.sym));
            if (!sym_seen.insert(*p.sym).second)
                issues.push_back("duplicate symbolic point: " +
                                 guni_->vars()->name(*p.sym));
        } else {
            if (!const_seen.insert(rat_to_string(*p.val)).second)
                issues.push_back("duplicate constant point: " +
                                 rat_to_string(*p.val));
        }
    }

    if (residues_.size() != points_.size())
        issues.push_back("one residue matrix per point required");
    for (std::size_t nu = 0; nu < residues_.size(); ++nu) {
        const MatForm& a = residues_[nu];
        if (a.rows() != rank_ || a.cols() != rank_) {
            issues.push_back("residue matrix " + std::to_string(nu + 1) +
                             " is not rank x rank");
            continue;
        }
        if (!a.entries_homogeneous(0)) {
            issues.push_back("residue matrix " + std::to_string(nu + 1) +
                             " has entries of positive degree");
            continue;
        }
        for (std::size_t i = 0; i < rank_; ++i)
            for (std::size_t j = 0; j < rank_; ++j)
                if (a.scalar_at(i, j).depends_on(fiber_))
                    issues.push_back("residue matrix " + std::to_string(nu + 1) +
                                     " depends on the fiber variable");
    }

    if (phi_.rows() != rank_ || phi_.cols() != rank_)
        issues.push_back("base part is not rank x rank");
    else {
        std::uint32_t zgen =
            static_cast<std::uint32_t>(guni_->gen_of_var(fiber_));
        for (std::size_t i = 0; i < rank_; ++i)
            for (std::size_t j = 0; j < rank_; ++j) {
                const Form& e = phi_.at(i, j);
                if (!e.is_homogeneous(1))
                    issues.push_back("base part entries must be 1-forms");
                for (const auto& [t, c] : e.terms()) {
                    for (auto g : t)
                        if (g == zgen)
                            issues.push_back("base part contains dz");
                    if (c.depends_on(fiber_))
                        issues.push_back("base part depends on the fiber variable");
                }
            }
    }
    if (!issues.empty()) throw InputError(issues);
}

MatForm LogConnection::total_matrix() const {
    RatFun z = RatFun::variable(guni_->vars(), fiber_);
    MatForm total = phi_;
    for (std::size_t nu = 0; nu < delta(); ++nu) {
        Form l = dlog(z - point_value(nu), guni_);
        total = total + residues_[nu].wedge_scalar(l);
    }
    return total;
}

MatForm LogConnection::residue_at_infinity() const {
    MatForm s(guni_, rank_, rank_);
    for (const auto& a : residues_) s = s - a;
    return s;
}

BasicVerdict LogConnection::check_basic() const {
    // Route (i): inspect the curvature of the total matrix.
    MatForm f = curvature(total_matrix());
    std::uint32_t zgen = static_cast<std::uint32_t>(guni_->gen_of_var(fiber_));
    bool basic_i = true;
    for (std::size_t i = 0; i < rank_ && basic_i; ++i)
        for (std::size_t j = 0; j < rank_ && basic_i; ++j)
            for (const auto& [t, c] : f.at(i, j).terms()) {
                bool has_dz =
                    std::find(t.begin(), t.end(), zgen) != t.end();
                if (has_dz || c.depends_on(fiber_)) {
                    basic_i = false;
                    break;
                }
            }

    // Route (ii): the residue system.
    bool basic_ii = true;
    Form witness = Form::zero(guni_);
    for (std::size_t i = 0; i < delta(); ++i) {
        const MatForm& ai = residues_[i];
        MatForm lhs = ai.d();
        MatForm rhs = phi_ * ai - ai * phi_;
        for (std::size_t j = 0; j < delta(); ++j) {
            if (j == i) continue;
            Form l = dlog(point_value(i) - point_value(j), guni_);
            MatForm bracket = residues_[i] * residues_[j] -
                              residues_[j] * residues_[i];
            rhs = rhs - bracket.wedge_scalar(l);
        }
        MatForm delta_m = lhs - rhs;
        if (!delta_m.is_zero()) {
            basic_ii = false;
            for (std::size_t r = 0; r < rank_ && witness.is_zero(); ++r)
                for (std::size_t cidx = 0; cidx < rank_ && witness.is_zero();
                     ++cidx)
                    if (!delta_m.at(r, cidx).is_zero())
                        witness = delta_m.at(r, cidx);
            break;
        }
    }

    if (basic_i != basic_ii)
        throw SelfCheckError(
            "basic-curvature routes disagree: curvature route says " +
            std::string(basic_i ? "basic" : "non-basic") +
            ", residue system says " + std::string(basic_ii ? "basic" : "non-basic"));
    return {basic_ii, witness};
}

GaussManinData LogConnection::gm_data() const {
    std::size_t n = rank_, d = delta();
    GaussManinData gm{phi_, {}, MatForm(guni_, n * d, n * d),
                      MatForm(guni_, n * d, n)};
    // Diagonal blocks Psi_tau = Phi + sum_{theta != tau} A^theta dlog(a_tau - a_theta);
    // off-diagonal blocks (row tau, col nu) carry -A^tau dlog(a_nu - a_tau).
    for (std::size_t tau = 0; tau < d; ++tau) {
        MatForm psi = phi_;
        for (std::size_t theta = 0; theta < d; ++theta) {
            if (theta == tau) continue;
            Form l = dlog(point_value(tau) - point_value(theta), guni_);
            psi = psi + residues_[theta].wedge_scalar(l);
        }
        gm.psi.push_back(psi);
        for (std::size_t nu = 0; nu < d; ++nu) {
            MatForm blockval(guni_, n, n);
            if (nu == tau) {
                blockval = psi;
            } else {
                Form l = dlog(point_value(nu) - point_value(tau), guni_);
                blockval = -(residues_[tau].wedge_scalar(l));
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    gm.b.at(tau * n + i, nu * n + j) = blockval.at(i, j);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                gm.nabla_rel.at(tau * n + i, j) = residues_[tau].at(i, j);
    }
    return gm;
}

CsClass LogConnection::nw_bundle(int n) const {
    return transgress(total_matrix(), n);
}

Form LogConnection::nw_gm(int n) const {
    GaussManinData gm = gm_data();
    Form phi_part = transgress_form(gm.phi_gm, n);
    Form psi_sum = Form::zero(guni_);
    for (const auto& psi : gm.psi) psi_sum += transgress_form(psi, n);
    Form full = transgress_form(gm.b, n);
    if (full != psi_sum)
        throw SelfCheckError(
            "block-trace route disagrees with per-block transgression sum");
    return phi_part - psi_sum;
}

TraceWordCheck check_trace_word(const GaussManinData& gm,
                                const std::vector<bool>& word) {
    if (word.empty()) throw Error("empty trace word");
    auto eval_word = [&](const MatForm& m) {
        MatForm dm = m.d();
        MatForm acc = word.front() ? dm : m;
        for (std::size_t k = 1; k < word.size(); ++k)
            acc = acc * (word[k] ? dm : m);
        return acc.trace();
    };
    Form full = eval_word(gm.b);
    Form diag = Form::zero(gm.b.universe());
    for (const auto& psi : gm.psi) diag += eval_word(psi);
    Form diff = full - diag;
    return {diff.is_zero(), diff};
}

PerturbedSplitting perturb_splitting(const LogConnection& c,
                                     const GaussManinData& gm,
                                     const MatForm& phi_map) {
    std::size_t n = c.rank(), d = c.delta();
    if (phi_map.rows() != n || phi_map.cols() != n * d)
        throw ShapeError("splitting perturbation must be rank x (rank*delta)");
    // The two corrections carry opposite signs; the scalar case pins them.
    MatForm phi_prime = gm.phi_gm - phi_map * gm.nabla_rel;
    MatForm psi_prime = gm.b - gm.nabla_rel * phi_map;
    return {phi_prime, psi_prime};
}

CompatibilityCheck check_gm_compatibility(const LogConnection& c,
                                          const GaussManinData& gm) {
    // Left route: the relative differential applied after the degree-zero
    // part (no Leibniz term; the base 1-forms ride along).
    MatForm lhs = gm.nabla_rel * gm.phi_gm;
    // Right route: the block matrix applied after the relative
    // differential, plus the Leibniz term d(nabla_rel).
    MatForm rhs = gm.b * gm.nabla_rel + gm.nabla_rel.d();
    MatForm diff = lhs - rhs;
    Form witness = Form::zero(c.universe());
    for (std::size_t i = 0; i < diff.rows() && witness.is_zero(); ++i)
        for (std::size_t j = 0; j < diff.cols() && witness.is_zero(); ++j)
            if (!diff.at(i, j).is_zero()) witness = diff.at(i, j);
    return {diff.is_zero(), witness};
}

} // namespace csrr
