// Stage operators L_(i), gauge symbols Phi_i, and the mechanical
// verification of every L o Phi = Phi o L' (mod S^0) identity, plus both
// Sobolev-conjugated self-adjoint reductions.
//
// "mod S^0" is decided on the positive xi ray at fixed l >= 1: the explicit
// (xi, <xi>_l, l) part of each term is expanded exactly as a series in 1/xi
// (rational binomial coefficients), terms sharing the same opaque factors
// are merged, and every expansion coefficient whose total order exceeds the
// threshold must vanish identically in l and in the coefficient atoms.
#ifndef DISPERSYM_STAGES_HPP
#define DISPERSYM_STAGES_HPP

#include <map>
#include <memory>
#include <string>

#include "dispersym/symbol.hpp"

namespace dispersym {

struct IdentityFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Max order of positive-ray expansion content above `threshold`, or INT_MIN
// when everything at orders > threshold vanishes identically.
int positive_ray_order_above(const SymbolAlgebra& alg, const SymbolExpr& e, int threshold);

// Human-readable listing of the surviving expansion coefficients above the
// threshold (empty string when clean); used by failure reports.
std::string positive_ray_residual_report(const SymbolAlgebra& alg, const SymbolExpr& e,
                                         int threshold);

struct StageSpec {
    int k = 0;
    int index = 0;
    std::string phi_name;
    std::shared_ptr<SymbolAlgebra> algebra;
    std::map<int, Polynomial> source;  // spatial coefficients, source[k] = 1
    std::map<int, Polynomial> target;
    SymbolExpr bracket;  // Phi_i = e^{Phi_{0,i}} * bracket
    SymbolExpr phi;
    int remainder_order = 0;
};

struct ResidualReport {
    std::string name;
    bool pass = false;
    // Highest surviving residual order; INT_MIN when the residual is empty
    // above order 0.
    int residual_order = 0;
    double elapsed_ms = 0.0;
    std::string detail;  // surviving expansion coefficients when failing
};

// (k, i) in {4:(1,2), 5:(1..3), 6:(1..4)}. The k=4 pair runs in the formal
// 1/xi calculus; k=5 and k=6 in the <xi>_l calculus.
StageSpec build_stage(int k, int i, bool fresh_remainders = false);

// compose(L, Phi, 0) - compose(Phi, L', 0), decided mod S^0; also certifies
// order(bracket - 1) <= -1 beforehand. Throws IdentityFailure only via
// verify_identity_or_throw.
ResidualReport verify_identity(StageSpec& spec);
void verify_identity_or_throw(StageSpec& spec);

// Self-adjoint reduction: builds B_s = <D>^s (D^k + A) <D>^{-s} with a
// formal s, the explicit Phi, and checks B_s o Phi - Phi o B_0 = 0 (mod S^0).
// k in {5, 6}. The plain form uses the single <xi> = sqrt(1+xi^2) bracket
// throughout; with ell_uniform_repair the k=6 Phi gains an (s/6)(1-l^2)
// <xi>_l^-4 alpha row and the check runs uniformly in l.
ResidualReport verify_selfadjoint_reduction(int k, bool ell_uniform_repair = false);

// The conjugated operator B_s itself (exposed for tests and the CLI).
DiffOperator selfadjoint_conjugated_operator(int k);
// The self-adjoint A-operators the reductions use (alpha, beta, gamma[, delta]).
DiffOperator selfadjoint_A(int k);

struct FaultScanResult {
    int stage;
    int coefficient_power;  // D_x power whose coefficient was perturbed
    std::string monomial;
    bool detected;
};

// Perturbs each monomial coefficient of each target coefficient (powers >= 1)
// by +delta and reruns the verification; every perturbation must be detected.
std::vector<FaultScanResult> fault_injection_scan(int k, const Rational& delta);

}  // namespace dispersym

#endif
