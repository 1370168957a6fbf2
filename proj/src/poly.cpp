#include "csrr/poly.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <sstream>

namespace csrr {

Poly Poly::constant(VarUniversePtr u, Rat c) {
    Poly p(std::move(u));
    if (c != 0) p.terms_.emplace(Expt(p.uni_->size(), 0), std::move(c));
    return p;
}

Poly Poly::variable(VarUniversePtr u, std::size_t var, std::int32_t e) {
    if (var >= u->size()) throw Error("variable index out of range");
    Poly p(std::move(u));
    Expt exp(p.uni_->size(), 0);
    exp[var] = e;
    if (e < 0) throw Error("negative exponent in polynomial");
    p.terms_.emplace(std::move(exp), Rat(1));
    return p;
}

Poly Poly::monomial(VarUniversePtr u, Expt e, Rat c) {
    Poly p(std::move(u));
    if (e.size() != p.uni_->size()) throw Error("exponent vector length mismatch");
    for (auto x : e)
        if (x < 0) throw Error("negative exponent in polynomial");
    if (c != 0) p.terms_.emplace(std::move(e), std::move(c));
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Expt& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw Error("polynomial is not constant");
    return terms_.begin()->second;
}

const Expt& Poly::lead_exponent() const {
    if (terms_.empty()) throw Error("zero polynomial has no leading term");
    return terms_.rbegin()->first;
}

const Rat& Poly::lead_coefficient() const {
    if (terms_.empty()) throw Error("zero polynomial has no leading term");
    return terms_.rbegin()->second;
}

std::int32_t Poly::degree_in(std::size_t var) const {
    std::int32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

long Poly::total_degree() const {
    long d = 0;
    for (const auto& [e, c] : terms_) {
        long t = 0;
        for (auto x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

void Poly::add_term(const Expt& e, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r(uni_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    check_same_universe(uni_, o.uni_);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    check_same_universe(uni_, o.uni_);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    r -= o;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_same_universe(uni_, o.uni_);
    Poly r(uni_);
    if (terms_.empty() || o.terms_.empty()) return r;
    Expt e(uni_->size());
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly Poly::scaled(const Rat& c) const {
    Poly r(uni_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly acc = Poly::constant(uni_, Rat(1));
    Poly base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = (e >>= 1u) ? base * base : base;
    }
    return acc;
}

Poly Poly::derivative(std::size_t var) const {
    if (var >= uni_->size()) throw Error("unknown variable");
    Poly r(uni_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Expt d = e;
        d[var] -= 1;
        r.add_term(d, c * Rat(e[var]));
    }
    return r;
}

Poly Poly::substitute(std::size_t var, const Poly& value) const {
    check_same_universe(uni_, value.universe());
    if (var >= uni_->size()) throw Error("unknown variable");
    // Horner over the powers of `var`.
    std::int32_t top = degree_in(var);
    std::vector<Poly> by_power(static_cast<std::size_t>(top) + 1, Poly::zero(uni_));
    for (const auto& [e, c] : terms_) {
        Expt rest = e;
        auto k = static_cast<std::size_t>(e[var]);
        rest[var] = 0;
        by_power[k].add_term(rest, c);
    }
    Poly acc = by_power[static_cast<std::size_t>(top)];
    for (std::int32_t k = top - 1; k >= 0; --k)
        acc = acc * value + by_power[static_cast<std::size_t>(k)];
    return acc;
}

std::complex<double>
Poly::eval(std::span<const std::complex<double>> assignment) const {
    if (assignment.size() != uni_->size())
        throw Error("assignment size mismatch");
    // Power tables per variable.
    std::vector<std::vector<std::complex<double>>> pows(uni_->size());
    for (std::size_t v = 0; v < uni_->size(); ++v) {
        auto d = static_cast<std::size_t>(degree_in(v));
        pows[v].resize(d + 1);
        pows[v][0] = {1.0, 0.0};
        for (std::size_t k = 1; k <= d; ++k) pows[v][k] = pows[v][k - 1] * assignment[v];
    }
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [e, c] : terms_) {
        std::complex<double> t = rat_to_complex(c);
        for (std::size_t v = 0; v < e.size(); ++v)
            if (e[v] > 0) t *= pows[v][static_cast<std::size_t>(e[v])];
        acc += t;
    }
    return acc;
}

Rat Poly::content() const {
    if (terms_.empty()) return Rat(0);
    Int num_gcd(0), den_lcm(1);
    for (const auto& [e, c] : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
                c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                c.get_den().get_mpz_t());
    }
    Rat c(num_gcd, den_lcm);
    c.canonicalize();
    if (lead_coefficient() < 0) c = -c;
    return c;
}

Poly Poly::primitive_part() const {
    if (terms_.empty()) return *this;
    Rat c = content();
    Poly r(uni_);
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k / c);
    return r;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // Descending grlex: leading term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rat a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool any_var = std::any_of(e.begin(), e.end(), [](auto x) { return x != 0; });
        bool coeff_shown = !any_var || a != 1;
        if (coeff_shown) out << rat_to_string(a);
        bool star = coeff_shown;
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            if (star) out << "*";
            out << uni_->name(v);
            if (e[v] != 1) out << "^" << e[v];
            star = true;
        }
    }
    return out.str();
}

std::optional<Poly> divexact(const Poly& a, const Poly& b) {
    check_same_universe(a.universe(), b.universe());
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    Poly r = a;
    Poly q = Poly::zero(a.universe());
    const Expt& lb = b.lead_exponent();
    const Rat& cb = b.lead_coefficient();
    while (!r.is_zero()) {
        const Expt& lr = r.lead_exponent();
        Expt diff(lr.size());
        for (std::size_t i = 0; i < lr.size(); ++i) {
            diff[i] = lr[i] - lb[i];
            if (diff[i] < 0) return std::nullopt;
        }
        Rat qc = r.lead_coefficient() / cb;
        Poly qt = Poly::monomial(a.universe(), diff, qc);
        q += qt;
        r -= qt * b;
    }
    return q;
}

namespace {

// Univariate view: coefficients of powers of `var`, exponent of `var`
// zeroed out inside each coefficient.
std::vector<Poly> to_univar(const Poly& p, std::size_t var) {
    std::vector<Poly> out(static_cast<std::size_t>(p.degree_in(var)) + 1,
                          Poly::zero(p.universe()));
    for (const auto& [e, c] : p.terms()) {
        Expt rest = e;
        auto k = static_cast<std::size_t>(e[var]);
        rest[var] = 0;
        out[k].add_term(rest, c);
    }
    while (out.size() > 1 && out.back().is_zero()) out.pop_back();
    return out;
}

Poly from_univar(const std::vector<Poly>& coeffs, std::size_t var,
                 const VarUniversePtr& u) {
    Poly acc = Poly::zero(u);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k].is_zero()) continue;
        Poly xk = Poly::variable(u, var, static_cast<std::int32_t>(k));
        acc += coeffs[k] * xk;
    }
    return acc;
}

int udeg(const std::vector<Poly>& f) {
    int d = static_cast<int>(f.size()) - 1;
    while (d >= 0 && f[static_cast<std::size_t>(d)].is_zero()) --d;
    return d;
}

bool uzero(const std::vector<Poly>& f) { return udeg(f) < 0; }

std::vector<Poly> utrim(std::vector<Poly> f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    return f;
}

// Pseudo-remainder of univariate polynomials with Poly coefficients:
// lc(b)^(deg a - deg b + 1) * a = q*b + rem, with the full power of lc(b)
// even when intermediate degrees drop by more than one.
std::vector<Poly> upseudo_rem(std::vector<Poly> a, const std::vector<Poly>& b) {
    int db = udeg(b);
    const Poly& lb = b[static_cast<std::size_t>(db)];
    int da0 = udeg(a);
    int da = da0;
    int rounds = 0;
    while (da >= db) {
        const Poly lead = a[static_cast<std::size_t>(da)];
        for (auto& c : a) c = c * lb;
        ++rounds;
        for (int i = 0; i <= db; ++i) {
            auto idx = static_cast<std::size_t>(da - db + i);
            a[idx] -= lead * b[static_cast<std::size_t>(i)];
        }
        a = utrim(std::move(a));
        da = udeg(a);
        if (a.empty()) break;
    }
    // Degree can drop by more than one per round; top up to the full
    // lc(b)^(da0-db+1) scaling so downstream exact divisions hold.
    for (int k = rounds; k < da0 - db + 1; ++k)
        for (auto& c : a) c = c * lb;
    return a;
}

Poly gcd_many(const std::vector<Poly>& ps) {
    Poly g = Poly::zero(ps.front().universe());
    for (const auto& p : ps) {
        g = poly_gcd(g, p);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

// Sound coprimality certificate: evaluate every variable except `x` at
// points that keep both leading coefficients alive, and take the
// univariate gcd over Q.  Degree 0 there bounds deg_x(gcd) by 0 exactly
// (the specialization of the gcd divides the image gcd, and leading
// coefficients divide leading coefficients).  Returns nullopt when no
// usable evaluation point was found.
std::optional<int> image_gcd_degree(const Poly& a, const Poly& b, std::size_t x) {
    const auto& uni = a.universe();
    int da = a.degree_in(x), db = b.degree_in(x);
    // Fresh points per call; the certificate is one-sided, so only the
    // "coprime" answer is ever trusted, and random points keep spurious
    // shared roots of the images from recurring systematically.
    static thread_local std::mt19937_64 point_rng(0x9e3779b97f4a7c15ull);
    std::optional<int> seen;
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<Rat> vals(uni->size(), Rat(0));
        for (std::size_t v = 0; v < uni->size(); ++v)
            vals[v] = Rat(static_cast<long>(point_rng() % (1u << 20)) + 3);
        auto image = [&](const Poly& p, int dx) {
            std::vector<Rat> img(static_cast<std::size_t>(dx) + 1, Rat(0));
            for (const auto& [e, c] : p.terms()) {
                Rat t = c;
                for (std::size_t v = 0; v < uni->size(); ++v) {
                    if (v == x || e[v] == 0) continue;
                    t *= rat_pow(vals[v], e[v]);
                }
                img[static_cast<std::size_t>(e[x])] += t;
            }
            return img;
        };
        std::vector<Rat> ia = image(a, da), ib = image(b, db);
        if (ia.back() == 0 || ib.back() == 0) continue; // lost the lead, retry
        // Univariate Euclid over Q.
        auto deg = [](const std::vector<Rat>& f) {
            int d = static_cast<int>(f.size()) - 1;
            while (d >= 0 && f[static_cast<std::size_t>(d)] == 0) --d;
            return d;
        };
        std::vector<Rat> r0 = std::move(ia), r1 = std::move(ib);
        if (deg(r0) < deg(r1)) std::swap(r0, r1);
        while (deg(r1) > 0) {
            int d0 = deg(r0), d1 = deg(r1);
            const Rat lead = r0[static_cast<std::size_t>(d0)] /
                             r1[static_cast<std::size_t>(d1)];
            for (int i = 0; i <= d1; ++i)
                r0[static_cast<std::size_t>(d0 - d1 + i)] -=
                    lead * r1[static_cast<std::size_t>(i)];
            while (static_cast<int>(r0.size()) - 1 > deg(r0)) r0.pop_back();
            if (deg(r0) < deg(r1)) std::swap(r0, r1);
        }
        if (deg(r1) == 0) return 0; // nonzero constant remainder: coprime in x
        int d = deg(r0);            // r1 vanished; r0 is the image gcd
        seen = seen ? std::min(*seen, d) : d;
    }
    return seen;
}

// Largest absolute numerator over the integer-primitive coefficients.
Int max_coeff_norm(const Poly& p) {
    Int m(1);
    for (const auto& [e, c] : p.terms()) {
        Int a = abs(c.get_num());
        if (cmp(a, m) > 0) m = a;
    }
    return m;
}

// Heuristic evaluation gcd over Z (integer content included): substitute
// a large integer for one variable, recurse on the un-stripped image,
// reconstruct by balanced base-xi digits, and verify by trial division.
// A wrong content propagates to a failed reconstruction or division one
// level up, so a returned value is always a genuine common divisor.
std::optional<Poly> heu_gcd(const Poly& a, const Poly& b, int depth) {
    const auto& uni = a.universe();
    if (depth > 12) return std::nullopt;
    auto int_content = [](const Poly& p) {
        Int g(0);
        for (const auto& [e, c] : p.terms())
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
        return g;
    };
    if (a.is_constant() || b.is_constant()) {
        Int g;
        mpz_gcd(g.get_mpz_t(), int_content(a).get_mpz_t(),
                int_content(b).get_mpz_t());
        return Poly::constant(uni, Rat(g));
    }
    std::optional<std::size_t> var;
    int best = 0;
    for (std::size_t v = 0; v < uni->size(); ++v) {
        int d = std::max(a.degree_in(v), b.degree_in(v));
        if (d > 0 && (!var || d > best)) {
            var = v;
            best = d;
        }
    }
    if (!var) return Poly::constant(uni, Rat(1));
    std::size_t x = *var;
    int cap = std::min(a.degree_in(x), b.degree_in(x));

    Int na = max_coeff_norm(a), nb = max_coeff_norm(b);
    Int xi = 2 * (cmp(na, nb) < 0 ? na : nb) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        Poly ia = a.substitute(x, Poly::constant(uni, Rat(xi)));
        Poly ib = b.substitute(x, Poly::constant(uni, Rat(xi)));
        if (!ia.is_zero() && !ib.is_zero()) {
            auto gamma = heu_gcd(ia, ib, depth + 1);
            if (gamma && !gamma->is_zero()) {
                // xi-adic reconstruction with balanced digits.
                Poly g = Poly::zero(uni);
                Poly rest = *gamma;
                for (int k = 0; k <= cap && !rest.is_zero(); ++k) {
                    Poly digit = Poly::zero(uni);
                    Poly next = Poly::zero(uni);
                    for (const auto& [e, c] : rest.terms()) {
                        Int n = c.get_num();
                        Int d;
                        mpz_fdiv_r(d.get_mpz_t(), n.get_mpz_t(), xi.get_mpz_t());
                        if (cmp(2 * d, xi) > 0) d -= xi;
                        if (d != 0) digit.add_term(e, Rat(d));
                        Int q = (n - d) / xi;
                        if (q != 0) next.add_term(e, Rat(q));
                    }
                    if (!digit.is_zero()) {
                        Poly xk = Poly::variable(uni, x, k);
                        g += digit * xk;
                    }
                    rest = std::move(next);
                }
                if (rest.is_zero() && !g.is_zero()) {
                    Poly gp = g.primitive_part();
                    if (divexact(a, gp).has_value() && divexact(b, gp).has_value())
                        return g;
                }
            }
        }
        xi = xi * 73794 / 27011 + 17; // grow irrationally-ish and retry
    }
    return std::nullopt;
}

} // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
    check_same_universe(a.universe(), b.universe());
    const auto& uni = a.universe();
    if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
    if (b.is_zero()) return a.primitive_part();

    // Split off the common monomial factor; it is cheap and very common.
    Expt amin = a.terms().begin()->first, bmin = b.terms().begin()->first;
    for (const auto& [e, c] : a.terms())
        for (std::size_t i = 0; i < amin.size(); ++i) amin[i] = std::min(amin[i], e[i]);
    for (const auto& [e, c] : b.terms())
        for (std::size_t i = 0; i < bmin.size(); ++i) bmin[i] = std::min(bmin[i], e[i]);
    Expt cmin(amin.size());
    bool shift = false;
    for (std::size_t i = 0; i < cmin.size(); ++i) {
        cmin[i] = std::min(amin[i], bmin[i]);
        shift = shift || amin[i] > 0 || bmin[i] > 0;
    }
    if (shift) {
        auto strip = [&](const Poly& p, const Expt& m) {
            Poly r = Poly::zero(p.universe());
            for (const auto& [e, c] : p.terms()) {
                Expt d = e;
                for (std::size_t i = 0; i < d.size(); ++i) d[i] -= m[i];
                r.add_term(d, c);
            }
            return r;
        };
        Poly mono = Poly::monomial(uni, cmin, Rat(1));
        return mono * poly_gcd(strip(a, amin), strip(b, bmin));
    }

    Poly pa = a.primitive_part();
    Poly pb = b.primitive_part();
    if (pa.is_constant() || pb.is_constant())
        return Poly::constant(uni, Rat(1));
    if (pa == pb) return pa;
    if (divexact(pb, pa).has_value()) return pa;
    if (divexact(pa, pb).has_value()) return pb;

    // Main variable: a variable both depend on, minimizing the larger degree.
    std::optional<std::size_t> main;
    int best = 0;
    for (std::size_t v = 0; v < uni->size(); ++v) {
        int da = pa.degree_in(v), db = pb.degree_in(v);
        if (da == 0 || db == 0) continue;
        int m = std::max(da, db);
        if (!main || m < best) {
            main = v;
            best = m;
        }
    }
    if (!main) return Poly::constant(uni, Rat(1));
    std::size_t x = *main;

    auto ua = to_univar(pa, x);
    auto ub = to_univar(pb, x);

    // Cheap certificate first: coprime in x means the gcd lives entirely
    // in the x-contents, and the expensive remainder sequence is skipped.
    auto img = image_gcd_degree(pa, pb, x);
    if (img && *img == 0)
        return poly_gcd(gcd_many(ua), gcd_many(ub)).primitive_part();

    // Heuristic evaluation gcd.  Trial division certifies the result as a
    // common divisor; maximality is restored by recursing on the quotients
    // (gcd(a,b) = g * gcd(a/g, b/g) for any common divisor g).  A constant
    // answer proves nothing and falls through.
    if (auto h = heu_gcd(pa, pb, 0)) {
        Poly g0 = h->primitive_part();
        if (!g0.is_constant()) {
            Poly qa = *divexact(pa, g0);
            Poly qb = *divexact(pb, g0);
            return (g0 * poly_gcd(qa, qb)).primitive_part();
        }
    }

    Poly cont_a = gcd_many(ua);
    Poly cont_b = gcd_many(ub);
    Poly cont = poly_gcd(cont_a, cont_b);
    auto divall = [](std::vector<Poly>& f, const Poly& d) {
        for (auto& c : f) {
            auto q = divexact(c, d);
            assert(q);
            c = *q;
        }
    };
    divall(ua, cont_a);
    divall(ub, cont_b);

    // Subresultant pseudo-remainder sequence.
    std::vector<Poly> r0 = std::move(ua), r1 = std::move(ub);
    if (udeg(r0) < udeg(r1)) std::swap(r0, r1);
    Poly g = Poly::constant(uni, Rat(1));
    Poly h = Poly::constant(uni, Rat(1));
    Poly result_pp = Poly::constant(uni, Rat(1));
    while (true) {
        int d = udeg(r0) - udeg(r1);
        std::vector<Poly> rem = upseudo_rem(r0, r1);
        if (uzero(rem)) {
            // r1, stripped of its coefficient content, is the gcd part.
            Poly cont_r = gcd_many(r1);
            divall(r1, cont_r);
            result_pp = from_univar(r1, x, uni);
            break;
        }
        if (udeg(rem) == 0) break; // coprime in x
        Poly divisor = g * h.pow(static_cast<unsigned>(d));
        divall(rem, divisor);
        r0 = std::move(r1);
        r1 = std::move(rem);
        g = r0[static_cast<std::size_t>(udeg(r0))];
        if (d > 0) {
            auto q = divexact(g.pow(static_cast<unsigned>(d)),
                              h.pow(static_cast<unsigned>(d - 1)));
            assert(q);
            h = *q;
        }
    }
    return (cont * result_pp).primitive_part();
}

} // namespace csrr
