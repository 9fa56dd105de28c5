// Exact operator algebra for expressions
//     sum_{l,j} xi^l * P_{l,j}(x) * D_x^j,        D_x = (1/i) d/dx,
// where xi is a formal large real parameter (integer powers of either sign)
// and the P_{l,j} are canonical polynomials over coefficient atoms. This is
// the "ray" calculus: composition, formal adjoints, gauge conjugation and
// exp(a(x)/xi^m) conjugation are all finite exact computations here.
#ifndef DISPERSYM_DIFFOP_HPP
#define DISPERSYM_DIFFOP_HPP

#include <map>
#include <utility>
#include <vector>

#include "dispersym/polynomial.hpp"

namespace dispersym {

class RayOp {
  public:
    using Key = std::pair<int, int>;  // (xi power l, D_x power j)

    RayOp() = default;

    static RayOp zero() { return RayOp(); }
    static RayOp identity() { return mult_op(Polynomial(1)); }
    // Multiplication operator xi^l * c(x).
    static RayOp mult_op(Polynomial c, int l = 0);
    static RayOp dx(int j = 1);
    static RayOp xi(int l = 1);

    bool is_zero() const { return cells_.empty(); }
    const std::map<Key, Polynomial>& cells() const { return cells_; }
    Polynomial cell(int l, int j) const;
    int max_dx_power() const;

    void add_cell(int l, int j, const Polynomial& p);

    RayOp operator-() const;
    friend RayOp operator+(const RayOp& a, const RayOp& b);
    friend RayOp operator-(const RayOp& a, const RayOp& b);
    // Operator composition (noncommutative).
    friend RayOp operator*(const RayOp& a, const RayOp& b);
    RayOp& operator+=(const RayOp& o);
    RayOp scale(const GaussianRational& c) const;
    friend bool operator==(const RayOp& a, const RayOp& b) { return a.cells_ == b.cells_; }

    // Replaces D_x by the given operator (typically D_x + h); exact
    // noncommutative expansion of the powers.
    RayOp substitute_dx(const RayOp& replacement) const;

    // e^{-a/xi^m} o A o e^{a/xi^m}; `a_deriv` is the polynomial a'(x).
    // m = 0 conjugates by e^{-a} with a an x-dependent phase.
    RayOp conjugate_exp(const Polynomial& a_deriv, int m) const;

    // Copy without the cells below the given xi power.
    RayOp drop_cells_below_xi(int lmin) const;

    std::string str() const;

  private:
    std::map<Key, Polynomial> cells_;  // no zero polynomials
};

// The operator L = D_t - D_x^k - sum_{j<k} coeffs[j] * D_x^j. The spatial
// part D_x^k + sum coeffs[j] D_x^j is what enters compositions; D_t rides
// along unchanged.
struct DiffOperator {
    int k = 2;
    bool has_Dt = true;
    int principal_sign = +1;
    std::map<int, Polynomial> coeffs;

    Polynomial coeff(int j) const;
    // D_x^k * sign + sum coeffs[j] D_x^j as a RayOp (no xi powers).
    RayOp spatial() const;
    static DiffOperator from_spatial(const RayOp& op, bool has_Dt = true);

    friend bool operator==(const DiffOperator& a, const DiffOperator& b) {
        return a.k == b.k && a.has_Dt == b.has_Dt && a.principal_sign == b.principal_sign &&
               a.coeffs == b.coeffs;
    }
};

// Formal adjoint: L* = D_t - D_x^k - sum_j B_j D_x^j with
// B_j = sum_{l>=j} binom(l,j) D_x^{l-j}(conj coeff_l). Exact involution.
DiffOperator adjoint(const DiffOperator& L);

// Complete Bell-type coefficients of the expansion
//   e^{-a/xi^m} D_x^p e^{a/xi^m} = sum_{q=1..p} xi^{-mq} c_{p,q}((d^beta a)).
// Returned as polynomials in the derivatives of the full complex symbol
// `name`; depends only on (p, q).
Polynomial exp_conjugation_coefficient(int p, int q, const std::string& name = "a");

}  // namespace dispersym

#endif
