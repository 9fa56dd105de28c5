// Graded symbol expressions in (x, xi, l): finite sums of terms
//
//     P(x) * xi^a * <xi>_l^(n + f*s) * l^c * (opaque factors) * e^{g*Phi0}
//
// with exact polynomial coefficients. Three gradings:
//   S_mode     -- <xi> = sqrt(xi^2 + 1); no free l powers (l = 1).
//   S_ell_mode -- <xi>_l = sqrt(xi^2 + l^2); l a large parameter.
//   ray_mode   -- formal 1/xi calculus; xi powers of either sign, no
//                 brackets (used by the k=4 toy stages).
// In the bracket modes xi^2 is eliminated through xi^2 = <xi>^2 - l^2, which
// makes {1, xi} x <xi>^Z x l^N a free basis: term-by-term equality is then
// decidable, exactly what the residual checks need.
//
// Opaque factors stand for the Tarama-type integral symbols Phi_{0,i} and
// their xi-derivatives: order(d_xi^n Phi0) = base_order - n, and an optional
// x-rule rewrites d_x(d_xi^n Phi0) as an explicit weight times a coefficient
// function plus a remainder of declared order.
#ifndef DISPERSYM_SYMBOL_HPP
#define DISPERSYM_SYMBOL_HPP

#include <map>
#include <string>
#include <vector>

#include "dispersym/diffop.hpp"
#include "dispersym/polynomial.hpp"

namespace dispersym {

struct UncancelledFormalExponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingXRule : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SymbolMode { S, SEll, Ray };

struct OpaqueFactor {
    std::string name;
    int xi_derivs = 0;
    int x_derivs = 0;

    friend bool operator==(const OpaqueFactor& a, const OpaqueFactor& b) {
        return a.name == b.name && a.xi_derivs == b.xi_derivs && a.x_derivs == b.x_derivs;
    }
    friend bool operator<(const OpaqueFactor& a, const OpaqueFactor& b) {
        if (a.name != b.name) return a.name < b.name;
        if (a.xi_derivs != b.xi_derivs) return a.xi_derivs < b.xi_derivs;
        return a.x_derivs < b.x_derivs;
    }
};

struct TermKey {
    int xi_pow = 0;
    int br_pow = 0;  // integer part of the bracket exponent
    int s_flag = 0;  // -1, 0, +1: formal <xi>^(s*s_flag) factor
    int ell_pow = 0;
    std::vector<OpaqueFactor> opaques;  // sorted
    std::string gauge_name;             // empty iff gauge_pow == 0
    int gauge_pow = 0;

    friend bool operator<(const TermKey& a, const TermKey& b);
    friend bool operator==(const TermKey& a, const TermKey& b);
};

struct SymbolExpr {
    SymbolMode mode = SymbolMode::SEll;
    std::map<TermKey, Polynomial> terms;

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const SymbolExpr& a, const SymbolExpr& b) {
        return a.mode == b.mode && a.terms == b.terms;
    }
};

class SymbolAlgebra {
  public:
    explicit SymbolAlgebra(SymbolMode mode) : mode_(mode) {}

    SymbolMode mode() const { return mode_; }

    // When set, every application of an x-rule mints a distinct remainder
    // atom, so remainder contributions can never cancel between two
    // compositions. Used to certify insensitivity to the unspecified R.
    void set_fresh_remainders(bool on) { fresh_remainders_ = on; }

    // Registers d_xi^0 Phi0 of the given base order. If an x-rule is
    // supplied: d_x Phi0 = weight * h + R with order(R) <= remainder_order.
    // Without a rule the atom cannot be x-differentiated.
    void declare_opaque(const std::string& name, int base_order);
    void declare_opaque(const std::string& name, int base_order, const SymbolExpr& weight,
                        const Polynomial& h, int remainder_order);

    // --- constructors -----------------------------------------------------
    SymbolExpr zero() const;
    SymbolExpr one() const { return coeff(Polynomial(1)); }
    SymbolExpr coeff(const Polynomial& p) const;
    SymbolExpr xi(int a = 1) const;
    SymbolExpr bracket(int n) const;          // <xi>^n
    SymbolExpr bracket_s(int s_flag) const;   // <xi>^(+-s)
    SymbolExpr ell(int c = 1) const;
    SymbolExpr opaque(const std::string& name, int xi_derivs = 0) const;
    SymbolExpr gauge_exp(const std::string& name, int power = 1) const;
    // Spatial symbol of a differential operator: sum coeff_j(x) xi^j.
    SymbolExpr from_diffop(const DiffOperator& L) const;

    // --- ring operations ---------------------------------------------------
    SymbolExpr add(const SymbolExpr& a, const SymbolExpr& b) const;
    SymbolExpr sub(const SymbolExpr& a, const SymbolExpr& b) const;
    SymbolExpr mul(const SymbolExpr& a, const SymbolExpr& b) const;
    SymbolExpr scale(const SymbolExpr& a, const GaussianRational& c) const;

    SymbolExpr deriv_xi(const SymbolExpr& e) const;
    SymbolExpr deriv_x(const SymbolExpr& e);
    SymbolExpr deriv_x(const SymbolExpr& e, int times);

    // --- grading ------------------------------------------------------------
    // Provable upper order bound; throws UncancelledFormalExponent when a
    // term still carries a formal s exponent.
    int order(const SymbolExpr& e) const;
    int term_order(const TermKey& k) const;  // s_flag must be 0
    int stripped_order(const TermKey& k) const;
    // Drops every term of order <= m (s-exponents graded as 0); idempotent.
    SymbolExpr truncate(const SymbolExpr& e, int m) const;

    // Asymptotic composition sum_j (i^{-j}/j!) d_xi^j a * d_x^j b, with the
    // expansion long enough that the first omitted term has order <= cutoff;
    // the result is truncated at cutoff.
    SymbolExpr compose(const SymbolExpr& a, const SymbolExpr& b, int cutoff);

    // <D>^s o P o <D>^{-s} mod S^0 in the l=1 bracket calculus (S mode),
    // returned as a differential operator with coefficients polynomial in
    // the formal parameter s. Throws UncancelledFormalExponent if the
    // cutoff leaves an uncancelled flag above order 0.
    DiffOperator sobolev_conjugate(const DiffOperator& P);

    SymbolExpr substitute_param(const SymbolExpr& e, const std::string& name,
                                const Rational& value) const;

    std::string dump(const SymbolExpr& e) const;  // deterministic ordering

  private:
    struct OpaqueInfo {
        int base_order = 0;
        bool has_rule = false;
        bool is_remainder = false;
        SymbolExpr weight;
        Polynomial h;
        int remainder_order = 0;
    };

    void add_term(SymbolExpr& e, TermKey key, Polynomial coeff) const;
    const OpaqueInfo& info(const std::string& name) const;
    SymbolExpr x_rule_expansion(const OpaqueFactor& f);

    SymbolMode mode_;
    bool fresh_remainders_ = false;
    int fresh_counter_ = 0;
    std::map<std::string, OpaqueInfo> registry_;
};

}  // namespace dispersym

#endif
