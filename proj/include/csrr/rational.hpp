#ifndef CSRR_RATIONAL_HPP
#define CSRR_RATIONAL_HPP

#include <complex>
#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "csrr/error.hpp"

namespace csrr {

// Exact rational scalar.  All symbolic coefficients in the engine are Rat.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0 && e < 0) throw DivisionByZero("0 raised to negative power");
    Rat acc(1);
    Rat b = e > 0 ? base : Rat(1) / base;
    for (long i = 0; i < (e > 0 ? e : -e); ++i) acc *= b;
    return acc;
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

inline std::complex<double> rat_to_complex(const Rat& q) {
    return {mpq_get_d(q.get_mpq_t()), 0.0};
}

} // namespace csrr

#endif
