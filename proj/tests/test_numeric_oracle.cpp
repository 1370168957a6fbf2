#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csrr/numeric_oracle.hpp"
#include "csrr/expr.hpp"
#include "csrr/rr_engine.hpp"
#include "testutil.hpp"

using namespace csrr;
using testutil::Rng;
using C = std::complex<double>;

namespace {

GenUniversePtr make_guni(std::size_t delta) {
    std::vector<std::pair<std::string, VarKind>> v;
    for (std::size_t i = 1; i <= delta; ++i)
        v.emplace_back("a" + std::to_string(i), VarKind::BasePoint);
    v.emplace_back("z", VarKind::Fiber);
    v.emplace_back("t1", VarKind::Param);
    v.emplace_back("t2", VarKind::Param);
    return GenUniverse::make(VarUniverse::make(std::move(v)));
}

MatForm scalar_matrix(const GenUniversePtr& g, std::size_t n,
                      const std::vector<std::vector<long>>& rows) {
    MatForm m(g, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m.at(i, j) = Form::from_rat(g, Rat(rows[i][j]));
    return m;
}

std::vector<PointSpec> symbolic_points(std::size_t delta) {
    std::vector<PointSpec> p;
    for (std::size_t i = 0; i < delta; ++i) p.push_back(PointSpec::symbol(i));
    return p;
}

LogConnection random_connection(Rng& rng, const GenUniversePtr& g,
                                std::size_t n, std::size_t delta) {
    auto u = g->vars();
    std::vector<MatForm> residues;
    for (std::size_t nu = 0; nu < delta; ++nu) {
        MatForm a(g, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a.at(i, j) = Form::from_rat(g, testutil::random_rational(rng));
        residues.push_back(a);
    }
    MatForm phi(g, n, n);
    std::size_t t1 = u->require("t1"), t2 = u->require("t2");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Form e = Form::zero(g);
            if (rng() % 2)
                e += Form::term(g, {static_cast<std::uint32_t>(g->gen_of_var(t1))},
                                RatFun::constant(u, testutil::random_rational(rng)) *
                                    RatFun::variable(u, t2));
            if (rng() % 2)
                e += Form::term(g, {static_cast<std::uint32_t>(g->gen_of_var(t2))},
                                RatFun::constant(u, testutil::random_rational(rng)));
            phi.at(i, j) = e;
        }
    return LogConnection(g, n, symbolic_points(delta), residues, phi);
}

} // namespace

TEST_CASE("section numerator") {
    // delta=1, a1=3: F = 6 - z.
    auto u1 = VarUniverse::make({{"z", VarKind::Fiber}});
    Poly f1 = build_section_numerator(u1, {RatFun::constant(u1, rat(3))});
    CHECK(RatFun::from_poly(f1) == parse_ratfun("6 - z", u1));

    // delta=2, a=(1,2): 1(z-2) + 2(z-1) - (z-1)(z-2) = -z^2 + 6z - 6.
    Poly f2 = build_section_numerator(
        u1, {RatFun::constant(u1, rat(1)), RatFun::constant(u1, rat(2))});
    CHECK(RatFun::from_poly(f2) == parse_ratfun("-z^2 + 6*z - 6", u1));

    // Leading coefficient is always -1.
    auto g3 = make_guni(3);
    auto u3 = g3->vars();
    std::vector<RatFun> pts{RatFun::variable(u3, 0), RatFun::variable(u3, 1),
                            RatFun::variable(u3, 2)};
    Poly f3 = build_section_numerator(u3, pts);
    std::size_t z = u3->require("z");
    CHECK(f3.degree_in(z) == 3);
    // Coefficient of z^3: substitute monomial filter by z-degree.
    Poly lead = Poly::zero(u3);
    for (const auto& [e, c] : f3.terms())
        if (e[z] == 3) lead.add_term(e, c);
    CHECK(RatFun::from_poly(lead) ==
          -RatFun::from_poly(Poly::variable(u3, z, 3)));

    CHECK_THROWS_AS(
        build_section_numerator(u1, {RatFun::zero(u1)}), InputError);
    CHECK_THROWS_AS(
        build_section_numerator(
            u1, {RatFun::constant(u1, rat(2)), RatFun::constant(u1, rat(2))}),
        InputError);
}

TEST_CASE("roots and implicit derivatives") {
    NumericConfig cfg;
    // delta=1: beta = 2 a1, derivative 2.
    auto g1 = make_guni(1);
    LogConnection c1(g1, 1, symbolic_points(1), {scalar_matrix(g1, 1, {{1}})},
                     MatForm(g1, 1, 1));
    SampledConfig s1;
    s1.assignment.assign(g1->vars()->size(), C(0, 0));
    s1.exact.assign(g1->vars()->size(), Rat(0));
    s1.exact[0] = rat(3);
    s1.assignment[0] = C(3, 0);
    auto rd1 = roots_and_derivatives(c1, s1, cfg);
    REQUIRE(rd1.roots.size() == 1);
    CHECK(std::abs(rd1.roots[0] - C(6, 0)) < 1e-10);
    CHECK(std::abs(rd1.droots[0][0] - C(2, 0)) < 1e-8);

    // delta=2, a=(1,2): roots of -z^2 + 6z - 6 are 3 +- sqrt(3); the root
    // sum matches the z-coefficient read off the polynomial (Vieta).
    auto g2 = make_guni(2);
    LogConnection c2(g2, 1, symbolic_points(2),
                     {scalar_matrix(g2, 1, {{1}}), scalar_matrix(g2, 1, {{1}})},
                     MatForm(g2, 1, 1));
    SampledConfig s2;
    s2.assignment.assign(g2->vars()->size(), C(0, 0));
    s2.exact.assign(g2->vars()->size(), Rat(0));
    s2.exact[0] = rat(1);
    s2.exact[1] = rat(2);
    s2.assignment[0] = C(1, 0);
    s2.assignment[1] = C(2, 0);
    auto rd2 = roots_and_derivatives(c2, s2, cfg);
    REQUIRE(rd2.roots.size() == 2);
    std::vector<double> vals = {std::abs(rd2.roots[0] - C(3 - std::sqrt(3.0), 0)),
                                std::abs(rd2.roots[0] - C(3 + std::sqrt(3.0), 0))};
    CHECK(std::min(vals[0], vals[1]) < 1e-10);
    CHECK(std::abs(rd2.roots[0] + rd2.roots[1] - C(6, 0)) < 1e-10);

    // Central finite differences confirm the implicit derivatives.
    Rng rng(3);
    NumericConfig fd_cfg;
    for (int trial = 0; trial < 5; ++trial) {
        std::size_t delta = 2 + rng() % 2;
        auto g = make_guni(delta);
        LogConnection c = random_connection(rng, g, 1, delta);
        std::mt19937_64 sampler(100 + trial);
        SampledConfig s = sample_configuration(c, sampler, fd_cfg);
        RootData rd;
        try {
            rd = roots_and_derivatives(c, s, fd_cfg);
        } catch (const PoleError&) {
            continue;
        }
        double h = 1e-6;
        for (std::size_t v = 0; v < delta; ++v) {
            SampledConfig sp = s, sm = s;
            sp.assignment[v] += h;
            sm.assignment[v] -= h;
            sp.exact[v] += rat(1, 1000000);
            sm.exact[v] -= rat(1, 1000000);
            RootData rp, rm;
            try {
                rp = roots_and_derivatives(c, sp, fd_cfg);
                rm = roots_and_derivatives(c, sm, fd_cfg);
            } catch (const PoleError&) {
                continue;
            }
            for (std::size_t i = 0; i < rd.roots.size(); ++i) {
                // match nearest roots
                auto nearest = [&](const RootData& r, C target) {
                    C best = r.roots[0];
                    for (const auto& b : r.roots)
                        if (std::abs(b - target) < std::abs(best - target))
                            best = b;
                    return best;
                };
                C fd = (nearest(rp, rd.roots[i]) - nearest(rm, rd.roots[i])) /
                       (2.0 * h);
                double scale = std::max(1.0, std::abs(rd.droots[i][v]));
                CHECK(std::abs(fd - rd.droots[i][v]) / scale < 1e-5);
            }
        }
    }
}

TEST_CASE("direct evaluation of the bundle side") {
    NumericConfig cfg;
    // delta=1, N=1, n=1: the two section terms cancel.
    auto g1 = make_guni(1);
    LogConnection c1(g1, 1, symbolic_points(1), {scalar_matrix(g1, 1, {{4}})},
                     MatForm(g1, 1, 1));
    std::mt19937_64 rng(5);
    SampledConfig s = sample_configuration(c1, rng, cfg);
    auto rd = roots_and_derivatives(c1, s, cfg);
    NumericTensor t = eval_rhs_direct(c1, 1, s, rd, cfg);
    for (const auto& [k, v] : t) CHECK(std::abs(v) < 1e-9);

    // Against the symbolic combinatorial route, delta=2, n=1 and the
    // nonzero n=2 worked case.
    auto g2 = make_guni(2);
    LogConnection c2(g2, 1, symbolic_points(2),
                     {scalar_matrix(g2, 1, {{2}}), scalar_matrix(g2, 1, {{-3}})},
                     MatForm(g2, 1, 1));
    std::mt19937_64 rng2(7);
    SampledConfig s2 = sample_configuration(c2, rng2, cfg);
    auto rd2 = roots_and_derivatives(c2, s2, cfg);
    NumericTensor direct = eval_rhs_direct(c2, 1, s2, rd2, cfg);
    NumericTensor comb = rhs_combinatorial(c2, 1).eval(s2.assignment);
    CHECK(tensor_distance(direct, comb) < 1e-9);

    auto uu = g2->vars();
    MatForm phi(g2, 1, 1);
    phi.at(0, 0) = Form::term(
        g2, {static_cast<std::uint32_t>(g2->gen_of_var(uu->require("t2")))},
        RatFun::variable(uu, uu->require("t1")));
    LogConnection cw(g2, 1, symbolic_points(2),
                     {scalar_matrix(g2, 1, {{5}}), scalar_matrix(g2, 1, {{11}})},
                     phi);
    std::mt19937_64 rng3(9);
    SampledConfig s3 = sample_configuration(cw, rng3, cfg);
    auto rd3 = roots_and_derivatives(cw, s3, cfg);
    NumericTensor direct2 = eval_rhs_direct(cw, 2, s3, rd3, cfg);
    NumericTensor comb2 = rhs_combinatorial(cw, 2).eval(s3.assignment);
    CHECK(tensor_distance(direct2, comb2) < 1e-9);
    CHECK(!direct2.empty());
}

TEST_CASE("numeric Riemann-Roch verification") {
    NumericConfig cfg;
    cfg.samples = 3;
    Rng rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        std::size_t n = 1 + rng() % 2;
        std::size_t delta = 1 + rng() % 3;
        int deg = 1 + static_cast<int>(rng() % 2);
        auto g = make_guni(delta);
        LogConnection c = random_connection(rng, g, n, delta);
        cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
        auto rep = verify_rr_numeric(c, deg, cfg);
        CHECK(rep.status == Report::Status::Pass);
    }

    // delta=1 degenerate: passes with both sides zero.
    auto g1 = make_guni(1);
    LogConnection c1(g1, 1, symbolic_points(1), {scalar_matrix(g1, 1, {{3}})},
                     MatForm(g1, 1, 1));
    cfg.seed = 2;
    CHECK(verify_rr_numeric(c1, 1, cfg).status == Report::Status::Pass);

    // Mutating a residue entry must break the identity.
    auto g2 = make_guni(2);
    auto u2 = g2->vars();
    MatForm phi(g2, 1, 1);
    phi.at(0, 0) = Form::term(
        g2, {static_cast<std::uint32_t>(g2->gen_of_var(u2->require("t2")))},
        RatFun::variable(u2, u2->require("t1")));
    LogConnection good(g2, 1, symbolic_points(2),
                       {scalar_matrix(g2, 1, {{5}}), scalar_matrix(g2, 1, {{11}})},
                       phi);
    cfg.seed = 3;
    REQUIRE(verify_rr_numeric(good, 2, cfg).status == Report::Status::Pass);
    // Same connection, one residue bumped by +1: compare the mutated
    // Gauss-Manin side against the honest bundle side.
    LogConnection bad(g2, 1, symbolic_points(2),
                      {scalar_matrix(g2, 1, {{6}}), scalar_matrix(g2, 1, {{11}})},
                      phi);
    std::mt19937_64 mrng(17);
    SampledConfig ms = sample_configuration(good, mrng, cfg);
    auto mrd = roots_and_derivatives(good, ms, cfg);
    NumericTensor honest = eval_rhs_direct(good, 2, ms, mrd, cfg);
    NumericTensor mutated = bad.nw_gm(2).eval(ms.assignment);
    CHECK(tensor_distance(honest, mutated) > 1e-3);
}

TEST_CASE("root-sum identities") {
    NumericConfig cfg;
    cfg.samples = 2;
    for (std::size_t delta = 2; delta <= 3; ++delta) {
        auto g = make_guni(delta);
        std::vector<MatForm> res(delta, scalar_matrix(g, 1, {{1}}));
        LogConnection c(g, 1, symbolic_points(delta), res, MatForm(g, 1, 1));
        for (std::size_t mask = 1; mask < (1u << delta); ++mask) {
            std::vector<std::size_t> J;
            for (std::size_t nu = 0; nu < delta; ++nu)
                if (mask & (1u << nu)) J.push_back(nu + 1);
            cfg.seed = 40 + mask;
            auto rep = verify_root_sum_identities(c, J, cfg);
            CHECK(rep.status == Report::Status::Pass);
        }
    }
}
