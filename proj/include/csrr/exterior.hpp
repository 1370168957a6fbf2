#ifndef CSRR_EXTERIOR_HPP
#define CSRR_EXTERIOR_HPP

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csrr/ratfun.hpp"

namespace csrr {

// A degree-1 generator of the exterior algebra: either the differential of
// a universe variable, or a formal closed generator rho_nu (nu >= 1).
struct Generator {
    enum class Kind { VarDiff, Rho };
    Kind kind;
    std::size_t index; // variable index, or 1-based rho index

    bool operator==(const Generator& o) const = default;
};

class GenUniverse;
using GenUniversePtr = std::shared_ptr<const GenUniverse>;

// Ordered generator universe: one differential per variable (in variable
// order), then the formal rho generators.  The ordering is fixed; it is the
// canonical term order of every Form.
class GenUniverse {
  public:
    static GenUniversePtr make(VarUniversePtr vars, std::size_t rho_count = 0) {
        auto g = std::shared_ptr<GenUniverse>(new GenUniverse());
        g->vars_ = std::move(vars);
        for (std::size_t v = 0; v < g->vars_->size(); ++v)
            g->gens_.push_back({Generator::Kind::VarDiff, v});
        for (std::size_t r = 1; r <= rho_count; ++r)
            g->gens_.push_back({Generator::Kind::Rho, r});
        return g;
    }

    const VarUniversePtr& vars() const { return vars_; }
    std::size_t size() const { return gens_.size(); }
    const Generator& gen(std::size_t i) const { return gens_.at(i); }
    std::size_t rho_count() const { return gens_.size() - vars_->size(); }

    std::size_t gen_of_var(std::size_t var) const {
        if (var >= vars_->size()) throw Error("unknown variable");
        return var;
    }
    std::size_t gen_of_rho(std::size_t nu) const {
        if (nu < 1 || nu > rho_count()) throw Error("rho index out of range");
        return vars_->size() + nu - 1;
    }

    std::string gen_name(std::size_t i) const {
        const Generator& g = gen(i);
        return g.kind == Generator::Kind::VarDiff
                   ? "d" + vars_->name(g.index)
                   : "rho" + std::to_string(g.index);
    }

    std::optional<std::size_t> index_of_name(std::string_view name) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gen_name(i) == name) return i;
        return std::nullopt;
    }

    bool is_rho(std::size_t i) const {
        return gen(i).kind == Generator::Kind::Rho;
    }
    // Base generators: differentials of non-fiber variables.
    bool is_base(std::size_t i) const {
        const Generator& g = gen(i);
        return g.kind == Generator::Kind::VarDiff &&
               vars_->kind(g.index) != VarKind::Fiber;
    }

    bool same(const GenUniverse& o) const {
        return this == &o || (vars_->same(*o.vars_) && gens_ == o.gens_);
    }

  private:
    GenUniverse() = default;
    VarUniversePtr vars_;
    std::vector<Generator> gens_;
};

inline void check_same_universe(const GenUniversePtr& a, const GenUniversePtr& b) {
    if (!a || !b || !a->same(*b))
        throw UniverseMismatch("forms live over different generator universes");
}

// Strictly increasing tuple of generator indices.
using GenTuple = std::vector<std::uint32_t>;

// Antisymmetric numeric tensor: complex coefficient per generator tuple.
using NumericTensor = std::map<GenTuple, std::complex<double>>;

// Element of the exterior algebra over the rational function field.
// Mixed degrees are allowed in one value; terms are indexed by strictly
// increasing generator tuples and never carry zero coefficients.
class Form {
  public:
    using TermMap = std::map<GenTuple, RatFun>;

    static Form zero(GenUniversePtr g) { return Form(std::move(g)); }
    static Form scalar(GenUniversePtr g, RatFun c);
    static Form from_rat(GenUniversePtr g, Rat c) {
        auto u = g->vars();
        return scalar(std::move(g), RatFun::constant(u, std::move(c)));
    }
    static Form generator(GenUniversePtr g, std::size_t gen_index);
    static Form term(GenUniversePtr g, GenTuple tuple, RatFun c);

    const GenUniversePtr& universe() const { return guni_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Highest term degree present (0 for the zero form).
    int max_degree() const;
    // Degree if homogeneous (zero form counts as any degree).
    bool is_homogeneous(int degree) const;
    Form degree_part(int p) const;

    Form operator-() const;
    Form operator+(const Form& o) const;
    Form operator-(const Form& o) const;
    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    Form scaled(const RatFun& c) const;
    Form scaled(const Rat& c) const;

    Form wedge(const Form& o) const;
    Form d() const;

    bool operator==(const Form& o) const {
        return guni_->same(*o.guni_) && terms_ == o.terms_;
    }
    bool operator!=(const Form& o) const { return !(*this == o); }

    bool rho_free() const;
    // Coefficient of rho_J: the unique eta_J with alpha = sum eta_J ^ rho_J
    // (rho factors rightmost, ascending).  J lists 1-based rho indices.
    Form rho_extract(const std::vector<std::size_t>& J) const;
    // Replace each rho_nu by the given form, wedged in place (rightmost).
    Form substitute_rhos(const std::vector<Form>& values) const;

    // Pull back along a section of the fiber variable: coefficients get
    // z -> value and dz -> d(value).  `value` must not involve the fiber.
    Form pullback_fiber(const RatFun& value) const;

    // Re-tag over a universe that agrees with the current one on every
    // generator index actually used (e.g. adding or dropping rho's).
    Form with_universe(GenUniversePtr target) const;

    // Numeric evaluation.  Generators listed in `expansions` are replaced
    // by the given coefficient vector over the remaining generators.
    NumericTensor
    eval(std::span<const std::complex<double>> assignment,
         const std::map<std::size_t, std::vector<std::complex<double>>>&
             expansions = {},
         double floor = 1e-12) const;

    std::string to_string() const; // debugging aid

    void add_term(const GenTuple& t, const RatFun& c);

  private:
    explicit Form(GenUniversePtr g) : guni_(std::move(g)) {}
    GenUniversePtr guni_;
    TermMap terms_;
};

// Exterior differential of a field element, as a 1-form.
Form d_of(const RatFun& f, const GenUniversePtr& g);

// dlog f = df/f; additive on products, kills constants.  Requires f != 0.
Form dlog(const RatFun& f, const GenUniversePtr& g);

} // namespace csrr

#endif
