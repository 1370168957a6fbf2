#include "csrr/ratfun.hpp"

#include <cassert>

namespace csrr {

RatFun RatFun::from(Poly num, Poly den) {
    check_same_universe(num.universe(), den.universe());
    if (den.is_zero()) throw DivisionByZero("zero denominator");
    const auto& u = num.universe();
    if (num.is_zero())
        return RatFun(std::move(num), Poly::constant(u, Rat(1)), true);
    Poly g = poly_gcd(num, den);
    if (!g.is_constant()) {
        auto qn = divexact(num, g);
        auto qd = divexact(den, g);
        assert(qn && qd);
        num = std::move(*qn);
        den = std::move(*qd);
    }
    // Canonical scale: denominator integer-primitive with positive lead.
    Rat c = den.content();
    if (c != 1) {
        den = den.primitive_part();
        num = num.scaled(Rat(1) / c);
    }
    return RatFun(std::move(num), std::move(den), true);
}

namespace {

// Inputs are reduced fractions; only rescales the denominator to its
// canonical integer-primitive positive-lead form.
Poly scale_only(Poly& num, Poly den) {
    Rat c = den.content();
    if (c != 1) {
        den = den.primitive_part();
        num = num.scaled(Rat(1) / c);
    }
    return den;
}

} // namespace

// Sum of reduced fractions a la Henrici: with g = gcd(d1, d2), the only
// factor the combined numerator can share with the denominator divides g.
RatFun RatFun::add_impl(const RatFun& o, bool negate) const {
    check_same_universe(universe(), o.universe());
    if (is_zero()) return negate ? -o : o;
    if (o.is_zero()) return *this;
    const Poly& n2 = negate ? (-o.num_) : o.num_;
    if (den_ == o.den_) return from(num_ + n2, den_);
    Poly g = poly_gcd(den_, o.den_);
    if (g.is_constant()) {
        Poly num = num_ * o.den_ + n2 * den_;
        if (num.is_zero()) return zero(universe());
        Poly den = scale_only(num, den_ * o.den_);
        return RatFun(std::move(num), std::move(den), true);
    }
    Poly d1r = *divexact(den_, g);
    Poly d2r = *divexact(o.den_, g);
    Poly t = num_ * d2r + n2 * d1r;
    if (t.is_zero()) return zero(universe());
    Poly h = poly_gcd(t, g);
    Poly den = den_ * d2r;
    if (!h.is_constant()) {
        t = *divexact(t, h);
        den = *divexact(den, h);
    }
    den = scale_only(t, std::move(den));
    return RatFun(std::move(t), std::move(den), true);
}

RatFun RatFun::operator+(const RatFun& o) const { return add_impl(o, false); }

RatFun RatFun::operator-(const RatFun& o) const { return add_impl(o, true); }

RatFun RatFun::operator*(const RatFun& o) const {
    check_same_universe(universe(), o.universe());
    if (is_zero() || o.is_zero()) return zero(universe());
    // Cross-cancel; the remaining pieces are pairwise coprime, so the
    // product is already reduced.
    Poly g1 = poly_gcd(num_, o.den_);
    Poly g2 = poly_gcd(o.num_, den_);
    Poly n1 = num_, d2 = o.den_, n2 = o.num_, d1 = den_;
    if (!g1.is_constant()) {
        n1 = *divexact(n1, g1);
        d2 = *divexact(d2, g1);
    }
    if (!g2.is_constant()) {
        n2 = *divexact(n2, g2);
        d1 = *divexact(d1, g2);
    }
    Poly num = n1 * n2;
    Poly den = scale_only(num, d1 * d2);
    return RatFun(std::move(num), std::move(den), true);
}

RatFun RatFun::operator/(const RatFun& o) const {
    return *this * o.inverse();
}

RatFun RatFun::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    Poly num = den_;
    Poly den = scale_only(num, num_);
    return RatFun(std::move(num), std::move(den), true);
}

RatFun RatFun::scaled(const Rat& c) const {
    if (c == 0) return zero(universe());
    return RatFun(num_.scaled(c), den_, true);
}

RatFun RatFun::pow(int e) const {
    if (e == 0) return one(universe());
    RatFun base = e > 0 ? *this : inverse();
    RatFun acc = one(universe());
    for (int i = 0; i < (e > 0 ? e : -e); ++i) acc = acc * base;
    return acc;
}

RatFun RatFun::derivative(std::size_t var) const {
    if (var >= universe()->size()) throw Error("unknown variable");
    Poly dn = num_.derivative(var);
    Poly dd = den_.derivative(var);
    if (dd.is_zero()) return from(dn, den_);
    return from(dn * den_ - num_ * dd, den_ * den_);
}

RatFun RatFun::substitute(std::size_t var, const RatFun& value) const {
    check_same_universe(universe(), value.universe());
    if (var >= universe()->size()) throw Error("unknown variable");
    if (!depends_on(var)) return *this;
    // f(num/den) with f = num_/den_: substitute into each polynomial as a
    // fraction, then combine.  p(x)|_{x=a/b} = P(a,b)/b^deg with P the
    // homogenization.
    auto subst_poly = [&](const Poly& p) -> std::pair<Poly, unsigned> {
        auto d = static_cast<unsigned>(p.degree_in(var));
        std::vector<Poly> by_power(d + 1, Poly::zero(universe()));
        for (const auto& [e, c] : p.terms()) {
            Expt rest = e;
            auto k = static_cast<std::size_t>(e[var]);
            rest[var] = 0;
            by_power[k].add_term(rest, c);
        }
        Poly acc = Poly::zero(universe());
        for (std::size_t k = 0; k <= d; ++k) {
            if (by_power[k].is_zero()) continue;
            acc += by_power[k] * value.num().pow(static_cast<unsigned>(k)) *
                   value.den().pow(d - static_cast<unsigned>(k));
        }
        return {acc, d};
    };
    auto [pn, dn] = subst_poly(num_);
    auto [pd, dd] = subst_poly(den_);
    if (pd.is_zero())
        throw PoleError("substitution produced a zero denominator");
    // num/den = pn * b^(dd) / (pd * b^(dn)) with b = value.den().
    Poly bn = value.den().pow(dd);
    Poly bd = value.den().pow(dn);
    return from(pn * bn, pd * bd);
}

std::complex<double>
RatFun::eval(std::span<const std::complex<double>> assignment,
             double floor) const {
    std::complex<double> n = num_.eval(assignment);
    std::complex<double> d = den_.eval(assignment);
    // Scale of the denominator: sum of term magnitudes, so cancellation is
    // detected relative to the operands rather than absolutely.
    double scale = 0.0;
    for (const auto& [e, c] : den_.terms()) {
        std::complex<double> t = rat_to_complex(c);
        for (std::size_t v = 0; v < e.size(); ++v)
            for (std::int32_t k = 0; k < e[v]; ++k) t *= assignment[v];
        scale += std::abs(t);
    }
    if (std::abs(d) <= floor * std::max(scale, 1.0))
        throw PoleError("numeric evaluation near a pole");
    return n / d;
}

std::string RatFun::to_string() const {
    if (den_.is_constant() && den_.constant_value() == 1)
        return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

} // namespace csrr
