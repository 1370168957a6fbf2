#include "csrr/exterior.hpp"

#include <algorithm>
#include <sstream>

namespace csrr {

Form Form::scalar(GenUniversePtr g, RatFun c) {
    Form f(std::move(g));
    check_same_universe(f.guni_->vars(), c.universe());
    if (!c.is_zero()) f.terms_.emplace(GenTuple{}, std::move(c));
    return f;
}

Form Form::generator(GenUniversePtr g, std::size_t gen_index) {
    Form f(std::move(g));
    if (gen_index >= f.guni_->size()) throw Error("generator index out of range");
    f.terms_.emplace(GenTuple{static_cast<std::uint32_t>(gen_index)},
                     RatFun::one(f.guni_->vars()));
    return f;
}

Form Form::term(GenUniversePtr g, GenTuple tuple, RatFun c) {
    Form f(std::move(g));
    check_same_universe(f.guni_->vars(), c.universe());
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] >= f.guni_->size()) throw Error("generator index out of range");
        if (i > 0 && tuple[i] <= tuple[i - 1])
            throw Error("generator tuple must be strictly increasing");
    }
    if (!c.is_zero()) f.terms_.emplace(std::move(tuple), std::move(c));
    return f;
}

int Form::max_degree() const {
    int d = 0;
    for (const auto& [t, c] : terms_) d = std::max<int>(d, static_cast<int>(t.size()));
    return d;
}

bool Form::is_homogeneous(int degree) const {
    for (const auto& [t, c] : terms_)
        if (static_cast<int>(t.size()) != degree) return false;
    return true;
}

Form Form::degree_part(int p) const {
    Form r(guni_);
    for (const auto& [t, c] : terms_)
        if (static_cast<int>(t.size()) == p) r.terms_.emplace(t, c);
    return r;
}

void Form::add_term(const GenTuple& t, const RatFun& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(t, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Form Form::operator-() const {
    Form r(guni_);
    for (const auto& [t, c] : terms_) r.terms_.emplace(t, -c);
    return r;
}

Form& Form::operator+=(const Form& o) {
    check_same_universe(guni_, o.guni_);
    for (const auto& [t, c] : o.terms_) add_term(t, c);
    return *this;
}

Form& Form::operator-=(const Form& o) {
    check_same_universe(guni_, o.guni_);
    for (const auto& [t, c] : o.terms_) add_term(t, -c);
    return *this;
}

Form Form::operator+(const Form& o) const {
    Form r = *this;
    r += o;
    return r;
}

Form Form::operator-(const Form& o) const {
    Form r = *this;
    r -= o;
    return r;
}

Form Form::scaled(const RatFun& c) const {
    Form r(guni_);
    if (c.is_zero()) return r;
    for (const auto& [t, k] : terms_) r.terms_.emplace(t, k * c);
    return r;
}

Form Form::scaled(const Rat& c) const {
    Form r(guni_);
    if (c == 0) return r;
    for (const auto& [t, k] : terms_) r.terms_.emplace(t, k.scaled(c));
    return r;
}

namespace {

// Merge two strictly increasing tuples; returns false on a repeated
// generator, otherwise fills `out` and sets `sign` to the transposition
// parity of the interleave.
bool merge_tuples(const GenTuple& a, const GenTuple& b, GenTuple& out, int& sign) {
    out.clear();
    out.reserve(a.size() + b.size());
    sign = 1;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining entries of a.
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return true;
}

} // namespace

Form Form::wedge(const Form& o) const {
    check_same_universe(guni_, o.guni_);
    Form r(guni_);
    GenTuple merged;
    int sign;
    for (const auto& [ta, ca] : terms_) {
        for (const auto& [tb, cb] : o.terms_) {
            if (!merge_tuples(ta, tb, merged, sign)) continue;
            RatFun c = ca * cb;
            r.add_term(merged, sign < 0 ? -c : c);
        }
    }
    return r;
}

Form Form::d() const {
    Form r(guni_);
    const auto& vars = guni_->vars();
    GenTuple merged;
    int sign;
    for (const auto& [t, c] : terms_) {
        for (std::size_t v = 0; v < vars->size(); ++v) {
            RatFun dc = c.derivative(v);
            if (dc.is_zero()) continue;
            GenTuple dv{static_cast<std::uint32_t>(guni_->gen_of_var(v))};
            if (!merge_tuples(dv, t, merged, sign)) continue;
            r.add_term(merged, sign < 0 ? -dc : dc);
        }
    }
    return r;
}

bool Form::rho_free() const {
    for (const auto& [t, c] : terms_)
        for (auto g : t)
            if (guni_->is_rho(g)) return false;
    return true;
}

Form Form::rho_extract(const std::vector<std::size_t>& J) const {
    GenTuple want;
    for (std::size_t nu : J)
        want.push_back(static_cast<std::uint32_t>(guni_->gen_of_rho(nu)));
    if (!std::is_sorted(want.begin(), want.end()))
        throw Error("rho index set must be ascending");
    Form r(guni_);
    for (const auto& [t, c] : terms_) {
        GenTuple vars_part, rho_part;
        for (auto g : t)
            (guni_->is_rho(g) ? rho_part : vars_part).push_back(g);
        // Sorted tuples already have variable differentials on the left and
        // rho factors rightmost, so no sign is produced by the split.
        if (rho_part == want) r.add_term(vars_part, c);
    }
    return r;
}

Form Form::substitute_rhos(const std::vector<Form>& values) const {
    if (values.size() != guni_->rho_count())
        throw Error("one substitute per rho generator required");
    for (const auto& v : values) check_same_universe(guni_, v.universe());
    Form r(guni_);
    for (const auto& [t, c] : terms_) {
        GenTuple vars_part;
        std::vector<std::size_t> rhos;
        for (auto g : t) {
            if (guni_->is_rho(g))
                rhos.push_back(guni_->gen(g).index);
            else
                vars_part.push_back(g);
        }
        Form acc = Form::term(guni_, vars_part, c);
        for (auto nu : rhos) acc = acc.wedge(values[nu - 1]);
        r += acc;
    }
    return r;
}

Form Form::pullback_fiber(const RatFun& value) const {
    if (!rho_free()) throw Error("pullback of a form with rho generators");
    auto fiber = guni_->vars()->fiber();
    if (!fiber) throw Error("universe has no fiber variable");
    if (value.depends_on(*fiber))
        throw Error("section value must not involve the fiber variable");
    std::uint32_t zgen = static_cast<std::uint32_t>(guni_->gen_of_var(*fiber));
    Form dval = d_of(value, guni_);
    Form r(guni_);
    for (const auto& [t, c] : terms_) {
        RatFun cs = c.depends_on(*fiber) ? c.substitute(*fiber, value) : c;
        auto pos = std::find(t.begin(), t.end(), zgen);
        if (pos == t.end()) {
            r.add_term(t, cs);
            continue;
        }
        // Move dz to the front, replace it by d(value), wedge back.
        int sign = (pos - t.begin()) % 2 == 0 ? 1 : -1;
        GenTuple rest;
        for (auto g : t)
            if (g != zgen) rest.push_back(g);
        Form tail = Form::term(guni_, rest, sign < 0 ? -cs : cs);
        r += dval.wedge(tail);
    }
    return r;
}

Form Form::with_universe(GenUniversePtr target) const {
    if (!target->vars()->same(*guni_->vars()))
        throw UniverseMismatch("target universe has different variables");
    Form r(std::move(target));
    for (const auto& [t, c] : terms_) {
        for (auto g : t) {
            if (g >= r.guni_->size() || !(r.guni_->gen(g) == guni_->gen(g)))
                throw UniverseMismatch(
                    "form uses a generator absent from the target universe");
        }
        r.terms_.emplace(t, c);
    }
    return r;
}

NumericTensor Form::eval(
    std::span<const std::complex<double>> assignment,
    const std::map<std::size_t, std::vector<std::complex<double>>>& expansions,
    double floor) const {
    using C = std::complex<double>;
    // Output generators: all generators without an expansion.
    std::vector<std::size_t> out_gens;
    std::vector<std::ptrdiff_t> out_pos(guni_->size(), -1);
    for (std::size_t g = 0; g < guni_->size(); ++g) {
        if (expansions.count(g)) continue;
        out_pos[g] = static_cast<std::ptrdiff_t>(out_gens.size());
        out_gens.push_back(g);
    }
    // Per-generator coefficient row over the output generators.
    std::vector<std::vector<C>> row(guni_->size(),
                                    std::vector<C>(out_gens.size(), C(0, 0)));
    for (std::size_t g = 0; g < guni_->size(); ++g) {
        auto it = expansions.find(g);
        if (it == expansions.end()) {
            row[g][static_cast<std::size_t>(out_pos[g])] = C(1, 0);
        } else {
            if (it->second.size() != out_gens.size())
                throw Error("expansion vector length mismatch");
            row[g] = it->second;
        }
    }

    NumericTensor out;
    std::size_t n = out_gens.size();
    for (const auto& [t, c] : terms_) {
        C cv = c.eval(assignment, floor);
        std::size_t k = t.size();
        if (k == 0) {
            out[GenTuple{}] += cv;
            continue;
        }
        if (k > n) continue;
        // Sum over increasing output tuples: determinant of the selected
        // k x k minor of the rows of the wedge factors.
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        auto next_combination = [&]() -> bool {
            for (std::size_t i = k; i-- > 0;) {
                if (idx[i] < n - k + i) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                    return true;
                }
            }
            return false;
        };
        for (;;) {
            // det of minor rows t[0..k), cols idx[0..k) by Laplace-free
            // Gaussian elimination on a small copy.
            std::vector<std::vector<C>> m(k, std::vector<C>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    m[i][j] = row[t[i]][idx[j]];
            C det(1, 0);
            bool zero = false;
            for (std::size_t col = 0; col < k && !zero; ++col) {
                std::size_t piv = col;
                double best = std::abs(m[col][col]);
                for (std::size_t rw = col + 1; rw < k; ++rw)
                    if (std::abs(m[rw][col]) > best) {
                        best = std::abs(m[rw][col]);
                        piv = rw;
                    }
                if (best == 0.0) {
                    zero = true;
                    break;
                }
                if (piv != col) {
                    std::swap(m[piv], m[col]);
                    det = -det;
                }
                det *= m[col][col];
                for (std::size_t rw = col + 1; rw < k; ++rw) {
                    C f = m[rw][col] / m[col][col];
                    for (std::size_t cc = col; cc < k; ++cc)
                        m[rw][cc] -= f * m[col][cc];
                }
            }
            if (!zero) {
                GenTuple key(k);
                for (std::size_t i = 0; i < k; ++i)
                    key[i] = static_cast<std::uint32_t>(out_gens[idx[i]]);
                out[key] += cv * det;
            }
            if (!next_combination()) break;
        }
    }
    // Drop exact zeros to keep tensors tidy.
    for (auto it = out.begin(); it != out.end();) {
        if (it->second == C(0, 0))
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

std::string Form::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream s;
    bool first = true;
    for (const auto& [t, c] : terms_) {
        if (!first) s << " + ";
        first = false;
        s << "(" << c.to_string() << ")";
        for (auto g : t) s << "*" << guni_->gen_name(g);
    }
    return s.str();
}

Form d_of(const RatFun& f, const GenUniversePtr& g) {
    check_same_universe(g->vars(), f.universe());
    Form r = Form::zero(g);
    for (std::size_t v = 0; v < g->vars()->size(); ++v) {
        RatFun df = f.derivative(v);
        if (df.is_zero()) continue;
        r.add_term(GenTuple{static_cast<std::uint32_t>(g->gen_of_var(v))}, df);
    }
    return r;
}

Form dlog(const RatFun& f, const GenUniversePtr& g) {
    if (f.is_zero()) throw DivisionByZero("dlog of zero");
    check_same_universe(g->vars(), f.universe());
    Form r = Form::zero(g);
    for (std::size_t v = 0; v < g->vars()->size(); ++v) {
        RatFun df = f.derivative(v);
        if (df.is_zero()) continue;
        r.add_term(GenTuple{static_cast<std::uint32_t>(g->gen_of_var(v))}, df / f);
    }
    return r;
}

} // namespace csrr
