#include "dispersym/gauge.hpp"

#include "dispersym/coeffsym.hpp"
#include "dispersym/modderiv.hpp"

namespace dispersym {

GaugeResult gauge_conjugate(const DiffOperator& L) {
    Polynomial a = L.coeff(L.k - 1);
    // phi^{-1} o D_x o phi = D_x - a/k.
    RayOp repl = RayOp::dx(1) + RayOp::mult_op(a.scale(GaussianRational(Rational(-1, L.k))));
    RayOp spatial = L.spatial().substitute_dx(repl);
    GaugeResult g;
    g.k = L.k;
    g.transformed = DiffOperator::from_spatial(spatial, L.has_Dt);
    g.phase_derivative = a.scale(GaussianRational(Rational(0), Rational(-1, L.k)));
    if (!g.transformed.coeff(L.k - 1).is_zero())
        throw std::logic_error("gauge failed to cancel the (k-1)-st coefficient");
    return g;
}

ConditionSet corollary_conditions(int k) {
    if (k != 5 && k != 6) throw std::invalid_argument("corollary_conditions supports k in {5,6}");
    static const char* letters[] = {"a", "b", "c", "d", "e"};

    // a D^{k-1} + b D^{k-2} + ...; the corollary operators carry no zeroth
    // coefficient, and none of the integrands involves b_0
    DiffOperator L;
    L.k = k;
    for (int j = 1; j < k; ++j) L.coeffs[j] = sym::full(letters[k - 1 - j]);
    GaugeResult g = gauge_conjugate(L);

    ConditionSet cs;
    cs.k = k;
    cs.gauged = true;
    ConditionEntry bound;
    bound.integrand = sym::im(letters[0]);
    bound.exponent = Rational(0);
    bound.source_stage = k - 1;
    cs.entries.push_back(std::move(bound));

    ConditionSet thm = necessary_conditions(k);
    for (auto& entry : thm.entries) {
        Polynomial substituted = entry.integrand;
        for (int alpha = 0; alpha <= k - 2; ++alpha) {
            const std::string name = "b" + std::to_string(alpha);
            const Polynomial value = g.transformed.coeff(alpha);
            substituted = substituted.substitute(name, AtomKind::coeff_re, value.real_part());
            substituted = substituted.substitute(name, AtomKind::coeff_im, value.imag_part());
        }
        ConditionEntry e;
        e.integrand = mod_derivatives(substituted);
        e.exponent = entry.exponent;
        e.source_stage = entry.source_stage;
        cs.entries.push_back(std::move(e));
    }
    return cs;
}

}  // namespace dispersym
