// Canonical reduction of a polynomial over coefficient atoms modulo exact
// x-derivatives: terms lying in d/dx(ring) are projected out, so two
// integrands that differ by a total derivative reduce to the same normal
// form. d/dx is graded by (atom name multiset, total derivative weight),
// which keeps every elimination a small exact linear solve.
#ifndef DISPERSYM_MODDERIV_HPP
#define DISPERSYM_MODDERIV_HPP

#include "dispersym/polynomial.hpp"

namespace dispersym {

Polynomial mod_derivatives(const Polynomial& p);

// True when p is a total x-derivative of a polynomial in the atoms.
bool is_total_derivative(const Polynomial& p);

}  // namespace dispersym

#endif
