#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csrr/exterior.hpp"
#include "testutil.hpp"

using namespace csrr;
using testutil::Rng;

namespace {

// Universe with two base points, a fiber and two parameters; three rhos.
VarUniversePtr base_vars() {
    return VarUniverse::make({{"a1", VarKind::BasePoint},
                              {"a2", VarKind::BasePoint},
                              {"z", VarKind::Fiber},
                              {"t1", VarKind::Param},
                              {"t2", VarKind::Param}});
}

Form random_form(Rng& rng, const GenUniversePtr& g, int max_deg = 2,
                 int max_terms = 3) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> deg(0, max_deg);
    Form f = Form::zero(g);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        int k = deg(rng);
        std::vector<std::uint32_t> all(g->size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = static_cast<std::uint32_t>(i);
        std::shuffle(all.begin(), all.end(), rng);
        GenTuple tup(all.begin(), all.begin() + k);
        std::sort(tup.begin(), tup.end());
        f += Form::term(g, tup, testutil::random_ratfun(rng, g->vars()));
    }
    return f;
}

} // namespace

TEST_CASE("wedge basics") {
    auto u = base_vars();
    auto g = GenUniverse::make(u);
    Form dx = Form::generator(g, g->gen_of_var(u->require("a1")));
    Form dy = Form::generator(g, g->gen_of_var(u->require("a2")));
    Form w = dx.wedge(dy);
    CHECK(w == Form::term(g, {0, 1}, RatFun::one(u)));
    CHECK(dx.wedge(dx).is_zero());
    CHECK(dy.wedge(dx) == -w);
}

TEST_CASE("graded commutativity") {
    auto g = GenUniverse::make(base_vars(), 2);
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        int p = static_cast<int>(rng() % 3);
        int q = static_cast<int>(rng() % 3);
        Form a = random_form(rng, g, 3).degree_part(p);
        Form b = random_form(rng, g, 3).degree_part(q);
        Form lhs = a.wedge(b);
        Form rhs = b.wedge(a);
        if ((p * q) % 2 == 1) rhs = -rhs;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("differential") {
    auto u = base_vars();
    auto g = GenUniverse::make(u, 1);
    std::size_t x = u->require("a1"), y = u->require("a2");
    Form xdy = Form::term(g, {static_cast<std::uint32_t>(g->gen_of_var(y))},
                          RatFun::variable(u, x));
    CHECK(xdy.d() == Form::term(g, {0, 1}, RatFun::one(u)));

    // d(dlog f) = 0 for f = x(x-y).
    RatFun f = RatFun::variable(u, x) *
               (RatFun::variable(u, x) - RatFun::variable(u, y));
    CHECK(dlog(f, g).d().is_zero());

    // d(rho1 * x) = dx ^ rho1; the rho generator is closed.
    std::uint32_t rho1 = static_cast<std::uint32_t>(g->gen_of_rho(1));
    Form rx = Form::term(g, {rho1}, RatFun::variable(u, x));
    CHECK(rx.d() == Form::term(g, {0, rho1}, RatFun::one(u)));
}

TEST_CASE("d squared vanishes and graded Leibniz") {
    auto g = GenUniverse::make(base_vars(), 2);
    Rng rng(9);
    for (int i = 0; i < 25; ++i) {
        Form a = random_form(rng, g, 4);
        CHECK(a.d().d().is_zero());
    }
    for (int i = 0; i < 25; ++i) {
        int p = static_cast<int>(rng() % 3);
        Form a = random_form(rng, g, 3).degree_part(p);
        Form b = random_form(rng, g, 3);
        Form lhs = a.wedge(b).d();
        Form rhs = a.d().wedge(b);
        Form tail = a.wedge(b.d());
        rhs = (p % 2 == 0) ? rhs + tail : rhs - tail;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("dlog") {
    auto u = base_vars();
    auto g = GenUniverse::make(u);
    std::size_t z = u->require("z"), a1 = u->require("a1"), a2 = u->require("a2");
    RatFun za1 = RatFun::variable(u, z) - RatFun::variable(u, a1);
    RatFun za2 = RatFun::variable(u, z) - RatFun::variable(u, a2);
    CHECK(dlog(za1 * za2, g) == dlog(za1, g) + dlog(za2, g));
    CHECK(dlog(RatFun::constant(u, rat(7, 3)), g).is_zero());
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        RatFun f = testutil::random_nonzero_ratfun(rng, u);
        RatFun h = testutil::random_nonzero_ratfun(rng, u);
        CHECK(dlog(f * h, g) == dlog(f, g) + dlog(h, g));
        CHECK(dlog(-f, g) == dlog(f, g));
    }
    CHECK_THROWS_AS(dlog(RatFun::zero(u), g), DivisionByZero);
}

TEST_CASE("rho extraction") {
    auto u = base_vars();
    auto g = GenUniverse::make(u, 2);
    std::size_t t1 = u->require("t1"), t2 = u->require("t2");
    // alpha = l1 * dPhi ^ rho1 + l2 * dPhi ^ rho2 with dPhi = dt1 ^ dt2.
    auto dt1 = static_cast<std::uint32_t>(g->gen_of_var(t1));
    auto dt2 = static_cast<std::uint32_t>(g->gen_of_var(t2));
    auto r1 = static_cast<std::uint32_t>(g->gen_of_rho(1));
    auto r2 = static_cast<std::uint32_t>(g->gen_of_rho(2));
    Form alpha = Form::term(g, {dt1, dt2, r1}, RatFun::constant(u, rat(5))) +
                 Form::term(g, {dt1, dt2, r2}, RatFun::constant(u, rat(-2)));
    Form p1 = alpha.rho_extract({1});
    CHECK(p1 == Form::term(g, {dt1, dt2}, RatFun::constant(u, rat(5))));
    CHECK(alpha.rho_extract({}).is_zero());

    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        Form a = random_form(rng, g, 4);
        // Reassemble sum_J eta_J ^ rho_J and compare.
        Form back = Form::zero(g);
        std::vector<std::vector<std::size_t>> subsets = {{}, {1}, {2}, {1, 2}};
        for (const auto& J : subsets) {
            Form rho = Form::scalar(g, RatFun::one(u));
            for (auto nu : J) rho = rho.wedge(Form::generator(g, g->gen_of_rho(nu)));
            back += a.rho_extract(J).wedge(rho);
        }
        CHECK(back == a);
        CHECK(a.rho_extract({1}).rho_free());
    }
}

TEST_CASE("pullback along a section") {
    auto u = base_vars();
    auto g = GenUniverse::make(u);
    std::size_t z = u->require("z"), a1v = u->require("a1");
    RatFun a1 = RatFun::variable(u, a1v);
    RatFun zz = RatFun::variable(u, z);

    Form alpha = dlog(zz - a1, g);
    CHECK(alpha.pullback_fiber(a1 + a1) == dlog(a1, g));

    Form dz = Form::generator(g, g->gen_of_var(z));
    CHECK(dz.pullback_fiber(RatFun::zero(u)).is_zero());

    Form base_only = Form::term(g, {0}, a1 * a1);
    CHECK(base_only.pullback_fiber(RatFun::constant(u, rat(3))) == base_only);

    CHECK_THROWS_AS(dlog(zz - a1, g).pullback_fiber(a1), PoleError);
}

TEST_CASE("pullback is an algebra map commuting with d") {
    auto u = base_vars();
    auto g = GenUniverse::make(u);
    Rng rng(19);
    std::size_t zv = u->require("z");
    for (int i = 0; i < 20; ++i) {
        Form a = random_form(rng, g, 2);
        Form b = random_form(rng, g, 2);
        // A z-free section value.
        RatFun value = testutil::random_ratfun(rng, u);
        for (int guard = 0; value.depends_on(zv) && guard < 50; ++guard)
            value = testutil::random_ratfun(rng, u);
        if (value.depends_on(zv)) continue;
        try {
            Form prod_then_pull = a.wedge(b).pullback_fiber(value);
            Form pull_then_prod =
                a.pullback_fiber(value).wedge(b.pullback_fiber(value));
            Form d_then_pull = a.d().pullback_fiber(value);
            Form pull_then_d = a.pullback_fiber(value).d();
            CHECK(prod_then_pull == pull_then_prod);
            CHECK(d_then_pull == pull_then_d);
        } catch (const PoleError&) {
            // this sample's section hit a pole of the coefficients
        }
    }
}

TEST_CASE("numeric evaluation of forms") {
    auto u = base_vars();
    auto g = GenUniverse::make(u);
    using C = std::complex<double>;
    std::size_t x = u->require("a1"), y = u->require("a2");
    Form f = dlog(RatFun::variable(u, x) - RatFun::variable(u, y), g);
    std::vector<C> at = {C(3, 0), C(1, 0), C(0, 0), C(0, 0), C(0, 0)};
    auto tensor = f.eval(at);
    CHECK(std::abs(tensor.at(GenTuple{0}) - C(0.5, 0)) < 1e-14);
    CHECK(std::abs(tensor.at(GenTuple{1}) + C(0.5, 0)) < 1e-14);
    CHECK(Form::zero(g).eval(at).empty());
}

TEST_CASE("wedge commutes with numeric evaluation") {
    auto u = base_vars();
    auto g = GenUniverse::make(u);
    using C = std::complex<double>;
    Rng rng(23);
    std::uniform_real_distribution<double> coord(0.7, 2.3);
    for (int i = 0; i < 15; ++i) {
        Form a = random_form(rng, g, 2);
        Form b = random_form(rng, g, 2);
        std::vector<C> at;
        for (std::size_t v = 0; v < u->size(); ++v) at.emplace_back(coord(rng), coord(rng) / 3);
        try {
            auto lhs = a.wedge(b).eval(at);
            auto ta = a.eval(at), tb = b.eval(at);
            // Tensor wedge, directly.
            NumericTensor rhs;
            for (const auto& [ka, ca] : ta)
                for (const auto& [kb, cb] : tb) {
                    GenTuple merged = ka;
                    merged.insert(merged.end(), kb.begin(), kb.end());
                    // sort with parity
                    int sign = 1;
                    bool dup = false;
                    for (std::size_t p = 1; p < merged.size() && !dup; ++p)
                        for (std::size_t q = p; q > 0; --q) {
                            if (merged[q - 1] == merged[q]) {
                                dup = true;
                                break;
                            }
                            if (merged[q - 1] > merged[q]) {
                                std::swap(merged[q - 1], merged[q]);
                                sign = -sign;
                            }
                        }
                    if (dup) continue;
                    rhs[merged] += (sign > 0 ? ca * cb : -ca * cb);
                }
            double scale = 1.0;
            for (const auto& [k, v] : lhs) scale = std::max(scale, std::abs(v));
            for (const auto& [k, v] : rhs) scale = std::max(scale, std::abs(v));
            for (const auto& [k, v] : rhs)
                CHECK(std::abs(v - (lhs.count(k) ? lhs.at(k) : C(0, 0))) / scale <
                      1e-10);
            for (const auto& [k, v] : lhs)
                CHECK(std::abs(v - (rhs.count(k) ? rhs.at(k) : C(0, 0))) / scale <
                      1e-10);
        } catch (const PoleError&) {
        }
    }
}

TEST_CASE("degree decomposition") {
    auto g = GenUniverse::make(base_vars(), 1);
    Rng rng(29);
    Form a = random_form(rng, g, 3);
    Form sum = Form::zero(g);
    for (int p = 0; p <= a.max_degree(); ++p) sum += a.degree_part(p);
    CHECK(sum == a);
    CHECK(a.degree_part(a.max_degree() + 2).is_zero());
    auto u = g->vars();
    Form mixed = Form::scalar(g, RatFun::variable(u, 0)) +
                 Form::term(g, {1}, RatFun::variable(u, 1));
    CHECK(mixed.degree_part(1) == Form::term(g, {1}, RatFun::variable(u, 1)));
}

TEST_CASE("error paths") {
    auto u = base_vars();
    auto g = GenUniverse::make(u, 1);
    auto v = VarUniverse::make({{"q", VarKind::Param}});
    auto h = GenUniverse::make(v);
    CHECK_THROWS_AS(Form::generator(g, 0).wedge(Form::generator(h, 0)),
                    UniverseMismatch);
    // pullback rejects rho-carrying forms and fiber-dependent sections
    Form withrho = Form::generator(g, g->gen_of_rho(1));
    CHECK_THROWS_AS(withrho.pullback_fiber(RatFun::one(u)), Error);
    std::size_t z = u->require("z");
    Form plain = Form::generator(g, 0);
    CHECK_THROWS_AS(plain.pullback_fiber(RatFun::variable(u, z)), Error);
}

TEST_CASE("universe extension and projection") {
    auto u = base_vars();
    auto g0 = GenUniverse::make(u);
    auto g2 = GenUniverse::make(u, 2);
    Form f = dlog(RatFun::variable(u, 0) - RatFun::variable(u, 1), g0);
    Form lifted = f.with_universe(g2);
    CHECK(lifted.rho_free());
    CHECK(lifted.with_universe(g0) == f);
    Form withrho = Form::generator(g2, g2->gen_of_rho(1));
    CHECK_THROWS_AS(withrho.with_universe(g0), UniverseMismatch);
}
