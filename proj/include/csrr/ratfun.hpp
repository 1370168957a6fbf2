#ifndef CSRR_RATFUN_HPP
#define CSRR_RATFUN_HPP

#include <complex>
#include <span>
#include <string>

#include "csrr/poly.hpp"

namespace csrr {

// Element of the rational function field over the variable universe.
// Canonical form: gcd(num, den) = 1, den has coprime integer coefficients
// and positive leading coefficient (grlex).  Equality of values is equality
// of representations.
class RatFun {
  public:
    static RatFun zero(VarUniversePtr u) {
        return RatFun(Poly::zero(u), Poly::constant(u, Rat(1)), true);
    }
    static RatFun one(VarUniversePtr u) { return constant(u, Rat(1)); }
    static RatFun constant(VarUniversePtr u, Rat c) {
        return RatFun(Poly::constant(u, std::move(c)), Poly::constant(u, Rat(1)),
                      true);
    }
    static RatFun variable(VarUniversePtr u, std::size_t var) {
        return RatFun(Poly::variable(u, var), Poly::constant(u, Rat(1)), true);
    }
    static RatFun from_poly(Poly p) {
        auto u = p.universe();
        return RatFun(std::move(p), Poly::constant(u, Rat(1)), true);
    }
    // Reduce an arbitrary fraction to canonical form.
    static RatFun from(Poly num, Poly den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const VarUniversePtr& universe() const { return num_.universe(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rat constant_value() const {
        return num_.constant_value() / den_.constant_value();
    }
    bool is_polynomial() const { return den_.is_constant(); }
    bool depends_on(std::size_t var) const {
        return num_.depends_on(var) || den_.depends_on(var);
    }

    RatFun operator-() const { return RatFun(-num_, den_, true); }
    RatFun operator+(const RatFun& o) const;
    RatFun operator-(const RatFun& o) const;
    RatFun operator*(const RatFun& o) const;
    RatFun operator/(const RatFun& o) const;
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }

    RatFun inverse() const;
    RatFun scaled(const Rat& c) const;
    RatFun pow(int e) const;

    bool operator==(const RatFun& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RatFun& o) const { return !(*this == o); }

    // Exact quotient-rule derivative.
    RatFun derivative(std::size_t var) const;

    // Exact composition; throws PoleError if the denominator vanishes
    // identically after substitution.
    RatFun substitute(std::size_t var, const RatFun& value) const;

    // Floating evaluation.  Throws PoleError when the evaluated denominator
    // falls below `floor` times its own term-magnitude scale.
    std::complex<double> eval(std::span<const std::complex<double>> assignment,
                              double floor = 1e-12) const;

    std::string to_string() const;

  private:
    RatFun(Poly n, Poly d, bool /*canonical*/)
        : num_(std::move(n)), den_(std::move(d)) {}
    RatFun add_impl(const RatFun& o, bool negate) const;
    Poly num_, den_;
};

} // namespace csrr

#endif
