#include "csrr/rr_engine.hpp"

#include <algorithm>
#include <chrono>

namespace csrr {

std::int64_t ReportTimer::now() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

PjTable pj_expansion(const LogConnection& c, int n) {
    std::size_t d = c.delta();
    auto rho_g = GenUniverse::make(c.universe()->vars(), d);
    // Connection matrix in the rho algebra: sum_nu A^nu rho_nu + Phi.
    MatForm m = c.phi().with_universe(rho_g);
    for (std::size_t nu = 0; nu < d; ++nu) {
        Form rho = Form::generator(rho_g, rho_g->gen_of_rho(nu + 1));
        m = m + c.residue(nu).with_universe(rho_g).wedge_scalar(rho);
    }
    Form tp = transgress_form(m, n);

    PjTable table{n, {}, tp.rho_extract({}), rho_g};
    // Enumerate nonempty subsets of {1..delta}.
    for (std::size_t mask = 1; mask < (1ull << d); ++mask) {
        std::vector<std::size_t> J;
        for (std::size_t nu = 0; nu < d; ++nu)
            if (mask & (1ull << nu)) J.push_back(nu + 1);
        Form pj = tp.rho_extract(J);
        if (!pj.is_zero()) table.by_subset.emplace(std::move(J), std::move(pj));
    }
    return table;
}

Form subset_dlog_sum(const LogConnection& c, const std::vector<std::size_t>& J) {
    const auto& g = c.universe();
    Form sum = Form::zero(g);
    for (std::size_t t = 1; t <= c.delta(); ++t) {
        if (std::find(J.begin(), J.end(), t) != J.end()) continue;
        Form w = Form::scalar(g, RatFun::one(g->vars()));
        for (std::size_t j : J)
            w = w.wedge(dlog(c.point_value(j - 1) - c.point_value(t - 1), g));
        sum += w;
    }
    return sum;
}

Form subset_dlog_sum(std::size_t delta, const std::vector<std::size_t>& J) {
    std::vector<std::pair<std::string, VarKind>> vars;
    for (std::size_t i = 1; i <= delta; ++i)
        vars.emplace_back("a" + std::to_string(i), VarKind::BasePoint);
    auto u = VarUniverse::make(std::move(vars));
    auto g = GenUniverse::make(u);
    Form sum = Form::zero(g);
    for (std::size_t t = 1; t <= delta; ++t) {
        if (std::find(J.begin(), J.end(), t) != J.end()) continue;
        Form w = Form::scalar(g, RatFun::one(u));
        for (std::size_t j : J)
            w = w.wedge(dlog(RatFun::variable(u, j - 1) - RatFun::variable(u, t - 1), g));
        sum += w;
    }
    return sum;
}

Form rhs_combinatorial(const LogConnection& c, int n) {
    const auto& g = c.universe();
    PjTable table = pj_expansion(c, n);
    Form rhs = Form::zero(g);
    for (const auto& [J, pj] : table.by_subset) {
        Form w = subset_dlog_sum(c, J);
        if (w.is_zero()) continue;
        rhs -= pj.with_universe(g).wedge(w);
    }
    long delta = static_cast<long>(c.delta());
    rhs += table.empty_part.with_universe(g).scaled(rat(1 - delta));
    return rhs;
}

Report verify_rr_symbolic(const LogConnection& c, int n) {
    Report r;
    ReportTimer timer(r);
    r.check = "rr-symbolic";
    r.param("N", std::to_string(c.rank()));
    r.param("delta", std::to_string(c.delta()));
    r.param("n", std::to_string(n));
    Form lhs = c.nw_gm(n);
    Form rhs = rhs_combinatorial(c, n);
    Form diff = lhs - rhs;
    r.param("basic", c.check_basic().basic ? "true" : "false");
    if (diff.is_zero()) {
        r.status = Report::Status::Pass;
    } else {
        r.status = Report::Status::Fail;
        r.witness = diff;
    }
    return r;
}

Report check_dlog_resolvent_identity(std::size_t r_count) {
    Report rep;
    ReportTimer timer(rep);
    rep.check = "dlog-resolvent";
    rep.param("r", std::to_string(r_count));
    if (r_count < 1) throw Error("at least one variable required");
    std::vector<std::pair<std::string, VarKind>> vars;
    for (std::size_t i = 1; i <= r_count; ++i)
        vars.emplace_back("b" + std::to_string(i), VarKind::Param);
    auto u = VarUniverse::make(std::move(vars));
    auto g = GenUniverse::make(u);

    Form lhs = Form::scalar(g, RatFun::one(u));
    for (std::size_t i = 0; i < r_count; ++i)
        lhs = lhs.wedge(dlog(RatFun::variable(u, i), g));

    Form rhs = Form::zero(g);
    for (std::size_t k = 0; k < r_count; ++k) {
        Form term = dlog(RatFun::variable(u, k), g);
        for (std::size_t j = 0; j < r_count; ++j) {
            if (j == k) continue;
            term = term.wedge(
                dlog(RatFun::variable(u, k) - RatFun::variable(u, j), g));
        }
        rhs = (k % 2 == 0) ? rhs + term : rhs - term;
    }
    Form diff = lhs - rhs;
    if (diff.is_zero()) {
        rep.status = Report::Status::Pass;
    } else {
        rep.status = Report::Status::Fail;
        rep.witness = diff;
    }
    return rep;
}

namespace {

// Arithmetic in M = L[t]/(phi), elements as coefficient vectors over the
// monomial basis 1, t, ..., t^(r-1).
struct QuotientRing {
    GenUniversePtr guni;
    std::vector<RatFun> phi; // c_0..c_{r-1}, monic
    std::size_t r;
    // t^(r+k) in the basis, for k = 0..r-2.
    std::vector<std::vector<RatFun>> high_powers;

    explicit QuotientRing(const FiniteAlgebra& fa)
        : guni(fa.guni), phi(fa.phi), r(fa.phi.size()) {
        if (r == 0) throw InputError("monic polynomial must have degree >= 1");
        auto u = guni->vars();
        std::vector<RatFun> tr; // t^r = -sum c_i t^i
        for (std::size_t i = 0; i < r; ++i) tr.push_back(-phi[i]);
        high_powers.push_back(tr);
        for (std::size_t k = 1; k + 1 < r; ++k) {
            // t^(r+k) = t * t^(r+k-1)
            const auto& prev = high_powers.back();
            std::vector<RatFun> next(r, RatFun::zero(u));
            for (std::size_t i = 0; i + 1 < r; ++i) next[i + 1] = prev[i];
            const RatFun& top = prev[r - 1];
            if (!top.is_zero())
                for (std::size_t i = 0; i < r; ++i)
                    next[i] += top * high_powers[0][i];
            high_powers.push_back(std::move(next));
        }
    }

    std::vector<RatFun> zero_elem() const {
        return std::vector<RatFun>(r, RatFun::zero(guni->vars()));
    }

    std::vector<RatFun> mul(const std::vector<RatFun>& a,
                            const std::vector<RatFun>& b) const {
        auto u = guni->vars();
        std::vector<RatFun> conv(2 * r - 1, RatFun::zero(u));
        for (std::size_t i = 0; i < r; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < r; ++j) {
                if (b[j].is_zero()) continue;
                conv[i + j] += a[i] * b[j];
            }
        }
        std::vector<RatFun> out(conv.begin(), conv.begin() + static_cast<long>(r));
        for (std::size_t k = r; k < conv.size(); ++k) {
            if (conv[k].is_zero()) continue;
            const auto& red = high_powers[k - r];
            for (std::size_t i = 0; i < r; ++i) out[i] += conv[k] * red[i];
        }
        return out;
    }

    // Trace of multiplication by a.
    RatFun trace(const std::vector<RatFun>& a) const {
        auto u = guni->vars();
        RatFun tr = RatFun::zero(u);
        for (std::size_t j = 0; j < r; ++j) {
            std::vector<RatFun> ej = zero_elem();
            ej[j] = RatFun::one(u);
            auto prod = mul(a, ej);
            tr += prod[j];
        }
        return tr;
    }

    // Solve (mult by a) x = e_0, i.e. invert a in M.
    std::vector<RatFun> inverse(const std::vector<RatFun>& a) const {
        auto u = guni->vars();
        std::size_t n = r;
        // Columns of the multiplication matrix.
        std::vector<std::vector<RatFun>> m(n, std::vector<RatFun>(n, RatFun::zero(u)));
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<RatFun> ej = zero_elem();
            ej[j] = RatFun::one(u);
            auto col = mul(a, ej);
            for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
        }
        std::vector<RatFun> x(n, RatFun::zero(u));
        std::vector<RatFun> rhs(n, RatFun::zero(u));
        rhs[0] = RatFun::one(u);
        // Gaussian elimination.
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            while (piv < n && m[piv][col].is_zero()) ++piv;
            if (piv == n) throw Error("element is not invertible in the algebra");
            std::swap(m[piv], m[col]);
            std::swap(rhs[piv], rhs[col]);
            for (std::size_t rr = col + 1; rr < n; ++rr) {
                if (m[rr][col].is_zero()) continue;
                RatFun fct = m[rr][col] / m[col][col];
                for (std::size_t cc = col; cc < n; ++cc)
                    m[rr][cc] -= fct * m[col][cc];
                rhs[rr] -= fct * rhs[col];
            }
        }
        for (std::size_t col = n; col-- > 0;) {
            RatFun acc = rhs[col];
            for (std::size_t cc = col + 1; cc < n; ++cc)
                acc -= m[col][cc] * x[cc];
            x[col] = acc / m[col][col];
        }
        return x;
    }
};

} // namespace

Pushforward pushforward_build(const FiniteAlgebra& fa) {
    QuotientRing ring(fa);
    auto g = fa.guni;
    auto u = g->vars();
    std::size_t r = ring.r, n = fa.rank;
    if (fa.a_coeffs.size() > r)
        throw InputError("connection needs at most r matrix coefficients");
    for (const auto& a : fa.a_coeffs) {
        if (a.rows() != n || a.cols() != n)
            throw InputError("connection coefficient matrices must be rank x rank");
        if (!a.entries_homogeneous(1))
            throw InputError("connection coefficient entries must be 1-forms");
    }

    // Gram matrix of the trace form on the monomial basis.
    std::vector<std::vector<RatFun>> gram(r, std::vector<RatFun>(r, RatFun::zero(u)));
    {
        std::vector<std::vector<RatFun>> tpow; // t^k for k = 0..2r-2
        for (std::size_t k = 0; k <= 2 * (r - 1); ++k) {
            auto tk = ring.zero_elem();
            if (k < r)
                tk[k] = RatFun::one(u);
            else
                tk = ring.high_powers[k - r];
            tpow.push_back(tk);
        }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                gram[i][j] = ring.trace(tpow[i + j]);
    }
    // Semisimplicity: the trace form must be nondegenerate.
    {
        MatForm gmat = MatForm::from_scalars(g, gram);
        if (gmat.scalar_det().is_zero())
            throw InputError("zero discriminant: the algebra is not semisimple");
    }

    // d(t): solve phi'(t) dt + (d_L phi)(t) = 0 per base variable.
    std::vector<RatFun> phi_prime = ring.zero_elem();
    for (std::size_t i = 1; i < r; ++i)
        phi_prime[i - 1] = fa.phi[i].scaled(Rat(static_cast<long>(i)));
    phi_prime[r - 1] += RatFun::constant(u, Rat(static_cast<long>(r)));
    auto inv_phi_prime = ring.inverse(phi_prime);

    // dt per variable: dt_v = -(d phi/d v)(t) / phi'(t).
    std::size_t nvars = u->size();
    std::vector<std::vector<RatFun>> dt_v(nvars);
    for (std::size_t v = 0; v < nvars; ++v) {
        auto dphi = ring.zero_elem();
        bool any = false;
        for (std::size_t i = 0; i < r; ++i) {
            RatFun dc = fa.phi[i].derivative(v);
            if (!dc.is_zero()) any = true;
            dphi[i] = -dc;
        }
        dt_v[v] = any ? ring.mul(dphi, inv_phi_prime) : ring.zero_elem();
    }

    // beta[j][i]: coefficient of t^i in d(t^j), a 1-form over L.
    std::vector<std::vector<Form>> beta(
        r, std::vector<Form>(r, Form::zero(g)));
    {
        // d(t^j) = j t^(j-1) dt.
        std::vector<std::vector<RatFun>> tpow; // as above
        for (std::size_t k = 0; k < r; ++k) {
            auto tk = ring.zero_elem();
            tk[k] = RatFun::one(u);
            tpow.push_back(tk);
        }
        for (std::size_t j = 1; j < r; ++j) {
            for (std::size_t v = 0; v < nvars; ++v) {
                if (std::all_of(dt_v[v].begin(), dt_v[v].end(),
                                [](const RatFun& q) { return q.is_zero(); }))
                    continue;
                auto coeff = ring.mul(tpow[j - 1], dt_v[v]);
                for (std::size_t i = 0; i < r; ++i) {
                    RatFun ci = coeff[i].scaled(Rat(static_cast<long>(j)));
                    if (ci.is_zero()) continue;
                    beta[j][i] += Form::term(
                        g, {static_cast<std::uint32_t>(g->gen_of_var(v))}, ci);
                }
            }
        }
    }

    Pushforward out{MatForm(g, r * n, r * n), MatForm(g, r, r), gram,
                    Form::zero(g), Form::zero(g), Form::zero(g)};
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) out.b0.at(i, j) = beta[j][i];

    // big_b: column (i,j) holds the image of t^i e_j.
    // d-part: beta stacks on the bundle identity.
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t ip = 0; ip < r; ++ip) {
            if (beta[i][ip].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                out.big_b.at(ip * n + j, i * n + j) += beta[i][ip];
        }
    // A-part: t^i A_l t^l reduced.
    for (std::size_t l = 0; l < fa.a_coeffs.size(); ++l) {
        const MatForm& al = fa.a_coeffs[l];
        if (al.is_zero()) continue;
        for (std::size_t i = 0; i < r; ++i) {
            // t^(i+l) in the basis.
            std::vector<RatFun> red = ring.zero_elem();
            if (i + l < r) {
                red[i + l] = RatFun::one(u);
            } else {
                red = ring.high_powers[i + l - r];
            }
            for (std::size_t ip = 0; ip < r; ++ip) {
                if (red[ip].is_zero()) continue;
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t j = 0; j < n; ++j) {
                        if (al.at(k, j).is_zero()) continue;
                        out.big_b.at(ip * n + k, i * n + j) +=
                            al.at(k, j).scaled(red[ip]);
                    }
            }
        }
    }

    out.w1 = out.big_b.trace();
    // Tr_{M/L}(sum_l t^l alpha_l) with alpha_l the matrix trace of A_l.
    for (std::size_t l = 0; l < fa.a_coeffs.size(); ++l) {
        Form alpha = fa.a_coeffs[l].trace();
        if (alpha.is_zero()) continue;
        std::vector<RatFun> tl = ring.zero_elem();
        tl[l] = RatFun::one(u);
        out.trace_route += alpha.scaled(ring.trace(tl));
    }
    out.newton_correction = out.b0.trace().scaled(Rat(static_cast<long>(n)));
    return out;
}

std::vector<Report> pushforward_checks(const FiniteAlgebra& fa) {
    std::vector<Report> reports;
    Pushforward pf = pushforward_build(fa);
    auto g = fa.guni;
    auto u = g->vars();
    std::size_t r = fa.phi.size();

    {
        Report rep;
        ReportTimer timer(rep);
        rep.check = "pushforward-trace-pairing";
        rep.param("r", std::to_string(r));
        MatForm gmat = MatForm::from_scalars(g, pf.gram);
        MatForm lhs = gmat.d();
        // d<t^i, t^j> = <del t^i, t^j> + <t^i, del t^j>; with columns of b0
        // holding the connection images this reads B0^t G + G B0.
        MatForm rhs = pf.b0.transpose() * gmat + gmat * pf.b0;
        MatForm diff = lhs - rhs;
        rep.status = diff.is_zero() ? Report::Status::Pass : Report::Status::Fail;
        if (!diff.is_zero()) rep.witness = diff.at(0, 0);
        reports.push_back(std::move(rep));
    }
    {
        Report rep;
        ReportTimer timer(rep);
        rep.check = "pushforward-det-torsion";
        rep.param("r", std::to_string(r));
        MatForm gmat = MatForm::from_scalars(g, pf.gram);
        Form lhs = pf.b0.trace().scaled(rat(2));
        Form rhs = dlog(gmat.scalar_det(), g);
        Form diff = lhs - rhs;
        rep.status = diff.is_zero() ? Report::Status::Pass : Report::Status::Fail;
        if (!diff.is_zero()) rep.witness = diff;
        reports.push_back(std::move(rep));
    }
    {
        Report rep;
        ReportTimer timer(rep);
        rep.check = "pushforward-trace-decomposition";
        Form diff = pf.w1 - pf.trace_route - pf.newton_correction;
        rep.status = diff.is_zero() ? Report::Status::Pass : Report::Status::Fail;
        if (!diff.is_zero()) rep.witness = diff;
        reports.push_back(std::move(rep));
    }

    if (!fa.split_roots.empty()) {
        Report rep;
        ReportTimer timer(rep);
        rep.check = "pushforward-split";
        rep.param("r", std::to_string(r));
        if (fa.split_roots.size() != r)
            throw InputError("split case needs exactly r roots");
        // Verify the factorization prod (t - c_j) == phi.
        {
            std::vector<RatFun> prod{RatFun::one(u)};
            for (const auto& c : fa.split_roots) {
                std::vector<RatFun> next(prod.size() + 1, RatFun::zero(u));
                for (std::size_t i = 0; i < prod.size(); ++i) {
                    next[i + 1] += prod[i];
                    next[i] -= prod[i] * c;
                }
                prod = std::move(next);
            }
            bool ok = prod.size() == r + 1 && prod.back().is_one();
            for (std::size_t i = 0; ok && i < r; ++i)
                ok = prod[i] == fa.phi[i];
            if (!ok) throw InputError("split roots do not multiply out to phi");
        }
        auto eval_at_root = [&](const RatFun& c) {
            MatForm m(g, fa.rank, fa.rank);
            RatFun power = RatFun::one(u);
            for (std::size_t l = 0; l < fa.a_coeffs.size(); ++l) {
                if (!fa.a_coeffs[l].is_zero())
                    m = m + fa.a_coeffs[l].scaled(power);
                power = power * c;
            }
            return m;
        };
        bool all_pass = true;
        bool used_mod_dlog = false;
        for (int deg = 1; deg <= 2 && all_pass; ++deg) {
            Form push_side = transgress_form(pf.big_b, deg);
            Form root_side = Form::zero(g);
            for (const auto& c : fa.split_roots)
                root_side += transgress_form(eval_at_root(c), deg);
            Form diff = push_side - root_side;
            if (diff.is_zero()) continue;
            if (deg == 1) {
                // Expected discrepancy: N * dlog of the Vandermonde unit.
                RatFun unit = RatFun::one(u);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = i + 1; j < r; ++j)
                        unit = unit * (fa.split_roots[j] - fa.split_roots[i]);
                unit = unit.pow(static_cast<int>(fa.rank));
                if (!unit.is_zero() && diff == dlog(unit, g)) {
                    used_mod_dlog = true;
                    rep.witness = dlog(unit, g);
                    rep.param("unit", unit.to_string());
                    continue;
                }
            }
            all_pass = false;
            rep.witness = diff;
        }
        rep.status = !all_pass ? Report::Status::Fail
                     : used_mod_dlog ? Report::Status::PassModDlog
                                     : Report::Status::Pass;
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace csrr
