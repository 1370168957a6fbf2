#ifndef CSRR_CHERN_SIMONS_HPP
#define CSRR_CHERN_SIMONS_HPP

#include <span>

#include "csrr/matform.hpp"

namespace csrr {

// Representative of a Chern-Simons class of degree p: a homogeneous
// (2p-1)-form together with the modulus it is meaningful under.
struct CsClass {
    enum class Modulus { Literal, ModExact, ModDlogUnits };
    int p;
    Form rep;
    Modulus modulus;
};

// Transgression of the power-sum invariant polynomial of degree p:
// expand Tr(A ^ F(tA)^{p-1}) as a polynomial in t with form coefficients
// and integrate t over [0,1] exactly, then scale by p.
Form transgress_form(const MatForm& a, int p);
CsClass transgress(const MatForm& a, int p);

// Product of Chern-Simons representatives: x ^ dy.  Degrees add.
Form cs_product(const Form& x, const Form& y);

// Newton's identities with the cs_product multiplication.
// newton_from_chern: p_k = e_1 p_{k-1} - e_2 p_{k-2} + ... + (-1)^{k-1} k e_k.
// chern_from_newton solves the same triangular system for e_n; the result
// carries rational coefficients and is meaningful modulo exact forms.
CsClass chern_from_newton(std::span<const CsClass> newton, int n);
Form newton_from_chern(std::span<const Form> chern, int n);

// TP(gauge(A,g)) - TP(A): closed for every p, and equal to dlog(det g)
// for p = 1.
Form gauge_delta(const MatForm& a, const MatForm& g, int p);

} // namespace csrr

#endif
