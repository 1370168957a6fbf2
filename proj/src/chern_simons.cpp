#include "csrr/chern_simons.hpp"

namespace csrr {

namespace {

// Product of matrix polynomials in t (entries multiply with wedge).
std::vector<MatForm> matpoly_mul(const std::vector<MatForm>& p,
                                 const std::vector<MatForm>& q) {
    const auto& g = p.front().universe();
    std::vector<MatForm> r(p.size() + q.size() - 1,
                           MatForm(g, p.front().rows(), q.front().cols()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) continue;
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (q[j].is_zero()) continue;
            r[i + j] = r[i + j] + p[i] * q[j];
        }
    }
    return r;
}

} // namespace

Form transgress_form(const MatForm& a, int p) {
    if (p < 1) throw Error("transgression degree must be >= 1");
    if (!a.is_square()) throw ShapeError("connection matrix must be square");
    if (!a.entries_homogeneous(1))
        throw DegreeError("connection matrix entries must be 1-forms");
    const auto& g = a.universe();
    // F(tA)^(p-1) as a polynomial in t.
    std::vector<MatForm> power{MatForm::identity(g, a.rows())};
    if (p > 1) {
        std::vector<MatForm> f = curvature_t(a);
        for (int i = 1; i < p; ++i) power = matpoly_mul(power, f);
    }
    Form tp = Form::zero(g);
    for (std::size_t k = 0; k < power.size(); ++k) {
        if (power[k].is_zero()) continue;
        Form ck = trace_prod(a, power[k]);
        // p * integral of t^k over [0,1].
        tp += ck.scaled(rat(p, static_cast<long>(k) + 1));
    }
    return tp;
}

CsClass transgress(const MatForm& a, int p) {
    Form rep = transgress_form(a, p);
    return {p, std::move(rep), CsClass::Modulus::Literal};
}

Form cs_product(const Form& x, const Form& y) { return x.wedge(y.d()); }

CsClass chern_from_newton(std::span<const CsClass> newton, int n) {
    if (n < 1) throw Error("class degree must be >= 1");
    if (static_cast<int>(newton.size()) < n)
        throw Error("chern_from_newton needs Newton classes of degree 1..n");
    for (int k = 1; k <= n; ++k)
        if (newton[static_cast<std::size_t>(k - 1)].p != k)
            throw Error("Newton classes must be ordered by degree starting at 1");
    std::vector<Form> e;
    e.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        // k*e_k = (-1)^(k-1) * (p_k - sum_{i=1}^{k-1} (-1)^(i-1) e_i p_{k-i})
        Form acc = newton[static_cast<std::size_t>(k - 1)].rep;
        for (int i = 1; i < k; ++i) {
            Form term = cs_product(e[static_cast<std::size_t>(i - 1)],
                                   newton[static_cast<std::size_t>(k - i - 1)].rep);
            acc = (i % 2 == 1) ? acc - term : acc + term;
        }
        acc = acc.scaled(rat(k % 2 == 1 ? 1 : -1, k));
        e.push_back(std::move(acc));
    }
    Form rep = e.back();
    auto modulus = n == 1 ? CsClass::Modulus::Literal : CsClass::Modulus::ModExact;
    return {n, std::move(rep), modulus};
}

Form newton_from_chern(std::span<const Form> chern, int n) {
    if (n < 1 || static_cast<int>(chern.size()) < n)
        throw Error("newton_from_chern needs classes of degree 1..n");
    std::vector<Form> p;
    p.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        Form acc = chern[static_cast<std::size_t>(k - 1)].scaled(
            Rat(k % 2 == 1 ? k : -k));
        for (int i = 1; i < k; ++i) {
            Form term = cs_product(chern[static_cast<std::size_t>(i - 1)],
                                   p[static_cast<std::size_t>(k - i - 1)]);
            acc = (i % 2 == 1) ? acc + term : acc - term;
        }
        p.push_back(std::move(acc));
    }
    return p.back();
}

Form gauge_delta(const MatForm& a, const MatForm& g, int p) {
    return transgress_form(gauge(a, g), p) - transgress_form(a, p);
}

} // namespace csrr
