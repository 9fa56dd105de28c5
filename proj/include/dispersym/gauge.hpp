// Gauge conjugation by exp(-(i/k) int b_{k-1}): kills the (k-1)-st
// coefficient exactly and produces the transformed coefficients as
// polynomials in the original ones. Composing with the necessary-condition
// integrands reproduces the full ungauged condition lists.
#ifndef DISPERSYM_GAUGE_HPP
#define DISPERSYM_GAUGE_HPP

#include "dispersym/diffop.hpp"
#include "dispersym/tarama.hpp"

namespace dispersym {

struct GaugeResult {
    int k = 0;
    DiffOperator transformed;        // coefficient k-1 identically zero
    Polynomial phase_derivative;     // d/dx of -(i/k) int b_{k-1} = -(i/k) b_{k-1}
};

// phi^{-1} o L o phi with phi = exp(-(i/k) int b_{k-1}); exact.
GaugeResult gauge_conjugate(const DiffOperator& L);

// Corollary condition list for k in {5,6}: entry 0 is the boundedness
// condition on Im(b_{k-1}) (exponent 0); entries 1.. are the theorem
// integrands evaluated on the gauge-transformed coefficients and reduced
// modulo derivatives. Coefficients carry letter names a, b, c, d(, e).
ConditionSet corollary_conditions(int k);

}  // namespace dispersym

#endif
