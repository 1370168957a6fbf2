#include "csrr/numeric_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace csrr {

using C = std::complex<double>;

Poly build_section_numerator(const VarUniversePtr& u,
                             const std::vector<RatFun>& points) {
    if (points.empty()) throw InputError("at least one point required");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!p.is_polynomial())
            throw InputError("points must be polynomial expressions");
        if (p.is_constant() && p.constant_value() == 0)
            throw InputError("marked points must be nonzero");
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (p == points[j])
                throw InputError("marked points must be pairwise distinct");
    }
    auto fiber = u->fiber();
    if (!fiber) throw InputError("universe has no fiber variable");
    Poly z = Poly::variable(u, *fiber);
    Poly total = Poly::zero(u);
    Poly full = Poly::constant(u, Rat(1));
    for (const auto& p : points) full = full * (z - p.num());
    for (std::size_t tau = 0; tau < points.size(); ++tau) {
        Poly prod = points[tau].num();
        for (std::size_t theta = 0; theta < points.size(); ++theta) {
            if (theta == tau) continue;
            prod = prod * (z - points[theta].num());
        }
        total += prod;
    }
    return total - full;
}

SampledConfig sample_configuration(const LogConnection& c, std::mt19937_64& rng,
                                   const NumericConfig& cfg) {
    auto u = c.universe()->vars();
    SampledConfig s;
    s.assignment.assign(u->size(), C(0, 0));
    s.exact.assign(u->size(), Rat(0));
    std::uniform_int_distribution<int> num(-cfg.range, cfg.range);
    std::uniform_int_distribution<int> den(1, 3);
    std::vector<Rat> used;
    for (std::size_t v = 0; v < u->size(); ++v) {
        if (u->kind(v) == VarKind::Fiber) continue;
        for (int guard = 0;; ++guard) {
            if (guard > 200) throw PoleError("could not sample distinct points");
            Rat q = rat(num(rng), den(rng));
            if (q == 0) continue;
            if (u->kind(v) == VarKind::BasePoint &&
                std::find(used.begin(), used.end(), q) != used.end())
                continue;
            if (u->kind(v) == VarKind::BasePoint) used.push_back(q);
            s.exact[v] = q;
            s.assignment[v] = rat_to_complex(q);
            break;
        }
    }
    return s;
}

namespace {

std::vector<C> horner_all(const std::vector<C>& coeffs, C x) {
    // value and derivative
    C p(0, 0), dp(0, 0);
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        dp = dp * x + p;
        p = p * x + coeffs[k];
    }
    return {p, dp};
}

std::vector<C> durand_kerner(std::vector<C> coeffs) {
    // coeffs: c_0..c_d with c_d != 0.
    std::size_t d = coeffs.size() - 1;
    C lead = coeffs.back();
    for (auto& c : coeffs) c /= lead;
    double radius = 1.0;
    for (std::size_t k = 0; k < d; ++k)
        radius = std::max(radius, std::abs(coeffs[k]));
    radius = 1.0 + radius;
    std::vector<C> x(d);
    for (std::size_t k = 0; k < d; ++k) {
        double angle = 2.0 * M_PI * (static_cast<double>(k) + 0.25) /
                       static_cast<double>(d);
        x[k] = std::polar(radius * 0.7, angle);
    }
    for (int iter = 0; iter < 600; ++iter) {
        double worst = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            C p = horner_all(coeffs, x[k])[0];
            C q(1, 0);
            for (std::size_t j = 0; j < d; ++j)
                if (j != k) q *= (x[k] - x[j]);
            C step = p / q;
            x[k] -= step;
            worst = std::max(worst, std::abs(step));
        }
        if (worst < 1e-15 * (1.0 + radius)) break;
    }
    return x;
}

// Antisymmetric numeric wedge of a tensor with a 1-form coefficient vector
// (indexed by generator).
NumericTensor tensor_wedge_vector(const NumericTensor& t,
                                  const std::vector<C>& vec) {
    NumericTensor out;
    for (const auto& [tup, c] : t) {
        for (std::size_t g = 0; g < vec.size(); ++g) {
            if (vec[g] == C(0, 0)) continue;
            if (std::find(tup.begin(), tup.end(), static_cast<std::uint32_t>(g)) !=
                tup.end())
                continue;
            GenTuple merged = tup;
            // insert g keeping the tuple sorted; parity from the jump
            auto pos = std::lower_bound(merged.begin(), merged.end(),
                                        static_cast<std::uint32_t>(g));
            int jumps = static_cast<int>(merged.end() - pos);
            merged.insert(pos, static_cast<std::uint32_t>(g));
            C val = c * vec[g];
            out[merged] += (jumps % 2 == 0) ? val : -val;
        }
    }
    return out;
}

} // namespace

RootData roots_and_derivatives(const LogConnection& c, const SampledConfig& s,
                               const NumericConfig& cfg) {
    auto u = c.universe()->vars();
    std::size_t z = c.fiber_var();
    std::vector<RatFun> pts;
    for (std::size_t nu = 0; nu < c.delta(); ++nu)
        pts.push_back(c.point_value(nu));
    Poly F = build_section_numerator(u, pts);

    // Exact univariate image in z.
    Poly img = F;
    for (std::size_t v = 0; v < u->size(); ++v) {
        if (v == z || !img.depends_on(v)) continue;
        img = img.substitute(v, Poly::constant(u, s.exact[v]));
    }
    std::size_t dz = static_cast<std::size_t>(img.degree_in(z));
    if (dz != c.delta()) throw PoleError("section numerator degenerated");
    std::vector<C> coeffs(dz + 1, C(0, 0));
    for (const auto& [e, q] : img.terms())
        coeffs[static_cast<std::size_t>(e[z])] = rat_to_complex(q);

    RootData rd;
    rd.roots = durand_kerner(coeffs);

    // Backward error.
    double scale = 0.0;
    for (const auto& ck : coeffs) scale = std::max(scale, std::abs(ck));
    for (const auto& beta : rd.roots) {
        double mag = 1.0, powmax = 1.0;
        for (std::size_t k = 0; k <= dz; ++k) {
            powmax = std::max(powmax, mag);
            mag *= std::abs(beta);
        }
        C val = horner_all(coeffs, beta)[0];
        if (std::abs(val) > 1e-12 * scale * powmax * static_cast<double>(dz + 1))
            throw PoleError("root finder backward error too large");
    }
    // Separation and pole collisions.
    double sep_scale = 1.0;
    for (const auto& b : rd.roots) sep_scale = std::max(sep_scale, std::abs(b));
    for (std::size_t i = 0; i < rd.roots.size(); ++i) {
        for (std::size_t j = i + 1; j < rd.roots.size(); ++j)
            if (std::abs(rd.roots[i] - rd.roots[j]) < 1e-6 * sep_scale)
                throw PoleError("clustered roots");
        if (std::abs(rd.roots[i]) < 1e-6 * sep_scale)
            throw PoleError("root collides with the origin");
        for (std::size_t v = 0; v < u->size(); ++v)
            if (u->kind(v) == VarKind::BasePoint &&
                std::abs(rd.roots[i] - s.assignment[v]) < 1e-6 * sep_scale)
                throw PoleError("root collides with a marked point");
    }

    // Implicit derivatives.
    Poly dFdz = F.derivative(z);
    rd.droots.assign(rd.roots.size(), std::vector<C>(u->size(), C(0, 0)));
    for (std::size_t i = 0; i < rd.roots.size(); ++i) {
        std::vector<C> at = s.assignment;
        at[z] = rd.roots[i];
        C fp = dFdz.eval(at);
        if (std::abs(fp) < cfg.den_floor * (1.0 + scale))
            throw PoleError("derivative denominator below floor");
        for (std::size_t v = 0; v < u->size(); ++v) {
            if (u->kind(v) != VarKind::BasePoint) continue;
            Poly dFdv = F.derivative(v);
            rd.droots[i][v] = -dFdv.eval(at) / fp;
        }
    }
    return rd;
}

NumericTensor eval_rhs_direct(const LogConnection& c, int n,
                              const SampledConfig& s, const RootData& roots,
                              const NumericConfig& cfg) {
    const auto& g = c.universe();
    std::size_t z = c.fiber_var();
    std::size_t zgen = g->gen_of_var(z);
    Form nwb = transgress_form(c.total_matrix(), n);

    auto section_tensor = [&](C beta, const std::vector<C>* dbeta) {
        std::vector<C> at = s.assignment;
        at[z] = beta;
        // dz expands over the remaining generators.
        std::vector<C> expansion(g->size() - 1, C(0, 0));
        if (dbeta) {
            std::size_t pos = 0;
            for (std::size_t gi = 0; gi < g->size(); ++gi) {
                if (gi == zgen) continue;
                const Generator& gen = g->gen(gi);
                if (gen.kind == Generator::Kind::VarDiff)
                    expansion[pos] = (*dbeta)[gen.index];
                ++pos;
            }
        }
        std::map<std::size_t, std::vector<C>> ex{{zgen, expansion}};
        return nwb.eval(at, ex, cfg.den_floor);
    };

    NumericTensor acc;
    for (std::size_t i = 0; i < roots.roots.size(); ++i) {
        NumericTensor t = section_tensor(roots.roots[i], &roots.droots[i]);
        for (const auto& [k, v] : t) acc[k] -= v;
    }
    NumericTensor t0 = section_tensor(C(0, 0), nullptr);
    for (const auto& [k, v] : t0) acc[k] += v;
    return acc;
}

double tensor_distance(const NumericTensor& a, const NumericTensor& b) {
    double scale = 1.0;
    for (const auto& [k, v] : a) scale = std::max(scale, std::abs(v));
    for (const auto& [k, v] : b) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        C w = it == b.end() ? C(0, 0) : it->second;
        worst = std::max(worst, std::abs(v - w));
    }
    for (const auto& [k, v] : b)
        if (!a.count(k)) worst = std::max(worst, std::abs(v));
    return worst / scale;
}

Report verify_rr_numeric(const LogConnection& c, int n,
                         const NumericConfig& cfg) {
    Report rep;
    ReportTimer timer(rep);
    rep.check = "rr-numeric";
    rep.seed = cfg.seed;
    rep.param("N", std::to_string(c.rank()));
    rep.param("delta", std::to_string(c.delta()));
    rep.param("n", std::to_string(n));
    rep.param("samples", std::to_string(cfg.samples));
    for (const auto& p : c.points())
        if (!p.symbolic())
            throw InputError("numeric verification needs symbolic points");

    std::mt19937_64 rng(cfg.seed);
    Form lhs = c.nw_gm(n);
    rep.status = Report::Status::Pass;
    for (int sample = 0; sample < cfg.samples; ++sample) {
        bool done = false;
        for (int attempt = 0; attempt < cfg.max_attempts && !done; ++attempt) {
            SampledConfig s = sample_configuration(c, rng, cfg);
            try {
                RootData rd = roots_and_derivatives(c, s, cfg);
                NumericTensor lt = lhs.eval(s.assignment, {}, cfg.den_floor);
                NumericTensor rt = eval_rhs_direct(c, n, s, rd, cfg);
                double dist = tensor_distance(lt, rt);
                if (dist >= cfg.tol) {
                    rep.status = Report::Status::Fail;
                    rep.detail = "sample " + std::to_string(sample) +
                                 ": relative residual " + std::to_string(dist);
                    return rep;
                }
                done = true;
            } catch (const PoleError&) {
                // degenerate configuration; resample
            }
        }
        if (!done) {
            rep.status = Report::Status::Fail;
            rep.detail = "resampling exhausted at sample " + std::to_string(sample);
            return rep;
        }
    }
    return rep;
}

Report verify_root_sum_identities(const LogConnection& c,
                                  const std::vector<std::size_t>& J,
                                  const NumericConfig& cfg) {
    Report rep;
    ReportTimer timer(rep);
    rep.check = "root-sum-identities";
    rep.seed = cfg.seed;
    rep.param("delta", std::to_string(c.delta()));
    {
        std::string js;
        for (auto j : J) js += (js.empty() ? "" : ",") + std::to_string(j);
        rep.param("J", js);
    }
    if (J.empty()) throw InputError("J must be nonempty");
    for (const auto& p : c.points())
        if (!p.symbolic())
            throw InputError("numeric verification needs symbolic points");
    const auto& g = c.universe();
    auto u = g->vars();
    std::size_t z = c.fiber_var();

    std::vector<RatFun> pts;
    for (std::size_t nu = 0; nu < c.delta(); ++nu)
        pts.push_back(c.point_value(nu));
    Poly F = build_section_numerator(u, pts);

    // The alternating middle expression sum_s (-1)^(s-1) dlog F(a_js) ^ ...,
    // built symbolically once.
    Form middle = Form::zero(g);
    for (std::size_t sidx = 0; sidx < J.size(); ++sidx) {
        RatFun fa = RatFun::from_poly(F).substitute(z, c.point_value(J[sidx] - 1));
        if (fa.is_zero()) throw InputError("F vanishes identically at a point");
        Form term = dlog(fa, g);
        for (std::size_t q = 0; q < J.size(); ++q) {
            if (q == sidx) continue;
            term = term.wedge(
                dlog(c.point_value(J[sidx] - 1) - c.point_value(J[q] - 1), g));
        }
        middle = (sidx % 2 == 0) ? middle + term : middle - term;
    }
    Form combinatorial = subset_dlog_sum(c, J);
    Form point_product = Form::scalar(g, RatFun::one(u));
    for (std::size_t j : J)
        point_product = point_product.wedge(dlog(c.point_value(j - 1), g));

    std::mt19937_64 rng(cfg.seed);
    rep.status = Report::Status::Pass;
    for (int sample = 0; sample < cfg.samples; ++sample) {
        bool done = false;
        for (int attempt = 0; attempt < cfg.max_attempts && !done; ++attempt) {
            SampledConfig s = sample_configuration(c, rng, cfg);
            try {
                RootData rd = roots_and_derivatives(c, s, cfg);
                // Root side: sum_i wedge_s dlog(beta_i - a_js).
                NumericTensor root_side;
                for (std::size_t i = 0; i < rd.roots.size(); ++i) {
                    NumericTensor t{{GenTuple{}, C(1, 0)}};
                    for (std::size_t j : J) {
                        std::size_t av = *c.points()[j - 1].sym;
                        C denom = rd.roots[i] - s.assignment[av];
                        if (std::abs(denom) < cfg.den_floor)
                            throw PoleError("root meets a point");
                        std::vector<C> vec(g->size(), C(0, 0));
                        for (std::size_t v = 0; v < u->size(); ++v)
                            if (rd.droots[i][v] != C(0, 0))
                                vec[g->gen_of_var(v)] = rd.droots[i][v] / denom;
                        vec[g->gen_of_var(av)] -= C(1, 0) / denom;
                        t = tensor_wedge_vector(t, vec);
                    }
                    for (const auto& [k, v] : t) root_side[k] += v;
                }
                NumericTensor points_t =
                    point_product.eval(s.assignment, {}, cfg.den_floor);
                NumericTensor comb_t =
                    combinatorial.eval(s.assignment, {}, cfg.den_floor);
                NumericTensor middle_t =
                    middle.eval(s.assignment, {}, cfg.den_floor);

                // Prop: root_side - points = combinatorial.
                NumericTensor lhs44 = root_side;
                for (const auto& [k, v] : points_t) lhs44[k] -= v;
                double d44 = tensor_distance(lhs44, comb_t);
                // Middle expression matches the root side.
                double d45 = tensor_distance(root_side, middle_t);
                if (d44 >= cfg.tol || d45 >= cfg.tol) {
                    rep.status = Report::Status::Fail;
                    rep.detail = "residuals " + std::to_string(d44) + ", " +
                                 std::to_string(d45);
                    return rep;
                }
                done = true;
            } catch (const PoleError&) {
            }
        }
        if (!done) {
            rep.status = Report::Status::Fail;
            rep.detail = "resampling exhausted";
            return rep;
        }
    }
    return rep;
}

} // namespace csrr
