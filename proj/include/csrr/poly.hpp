#ifndef CSRR_POLY_HPP
#define CSRR_POLY_HPP

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csrr/rational.hpp"
#include "csrr/varuniverse.hpp"

namespace csrr {

// Exponent vector over a VarUniverse; one entry per variable.
using Expt = std::vector<std::int32_t>;

// Graded-lexicographic monomial order: total degree first, ties broken
// lexicographically with earlier variables weighing more.
struct GrlexLess {
    bool operator()(const Expt& a, const Expt& b) const {
        long da = 0, db = 0;
        for (auto e : a) da += e;
        for (auto e : b) db += e;
        if (da != db) return da < db;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

// Sparse multivariate polynomial with exact rational coefficients.
// Invariants: no zero coefficients stored; every exponent vector has
// length equal to the universe size.
class Poly {
  public:
    using TermMap = std::map<Expt, Rat, GrlexLess>;

    static Poly zero(VarUniversePtr u) { return Poly(std::move(u)); }
    static Poly constant(VarUniversePtr u, Rat c);
    static Poly variable(VarUniversePtr u, std::size_t var, std::int32_t e = 1);
    static Poly monomial(VarUniversePtr u, Expt e, Rat c);

    const VarUniversePtr& universe() const { return uni_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Value of a constant polynomial (zero polynomial gives 0).
    Rat constant_value() const;
    std::size_t term_count() const { return terms_.size(); }

    // Leading term under grlex.
    const Expt& lead_exponent() const;
    const Rat& lead_coefficient() const;

    std::int32_t degree_in(std::size_t var) const;
    long total_degree() const;
    bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);

    Poly scaled(const Rat& c) const;
    Poly pow(unsigned e) const;

    bool operator==(const Poly& o) const {
        return uni_->same(*o.uni_) && terms_ == o.terms_;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(std::size_t var) const;

    // Substitute a polynomial for one variable (exact composition).
    Poly substitute(std::size_t var, const Poly& value) const;

    std::complex<double>
    eval(std::span<const std::complex<double>> assignment) const;

    // Rational content: the positive rational c with this == c * primitive
    // where primitive has coprime integer coefficients; the sign is chosen
    // so that the primitive part has positive leading coefficient.
    // Zero polynomial has content 0.
    Rat content() const;
    Poly primitive_part() const;

    std::string to_string() const;

    void add_term(const Expt& e, const Rat& c); // accumulate, drop zeros

  private:
    explicit Poly(VarUniversePtr u) : uni_(std::move(u)) {}
    VarUniversePtr uni_;
    TermMap terms_;
};

// Exact division: returns a/b when b divides a, nullopt otherwise.
std::optional<Poly> divexact(const Poly& a, const Poly& b);

// Gcd of two polynomials, normalized to have coprime integer coefficients
// and positive leading coefficient (1 for coprime inputs, never 0 unless
// both inputs are 0).
Poly poly_gcd(const Poly& a, const Poly& b);

} // namespace csrr

#endif
