// Polynomial ring over coefficient-derivative atoms with exact
// Gaussian-rational coefficients.
//
// An atom is one of
//   re(name)^(beta)  -- beta-th x-derivative of the real part of a coefficient
//   im(name)^(beta)  -- same for the imaginary part
//   param(name)      -- a formal real scalar (no derivatives)
// Complex-valued coefficient functions are always stored through their
// re/im split, so polynomial identity is decidable by canonical form.
#ifndef DISPERSYM_POLYNOMIAL_HPP
#define DISPERSYM_POLYNOMIAL_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dispersym/rational.hpp"

namespace dispersym {

enum class AtomKind : std::uint8_t { coeff_re = 0, coeff_im = 1, formal_param = 2 };

struct Atom {
    AtomKind kind = AtomKind::coeff_re;
    std::string name;  // "b", "c", "b0".."b4", "alpha", "s", ...
    int deriv = 0;     // beta >= 0; always 0 for formal_param

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.kind == b.kind && a.name == b.name && a.deriv == b.deriv;
    }
    friend bool operator<(const Atom& a, const Atom& b) {
        if (a.name != b.name) return a.name < b.name;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.deriv < b.deriv;
    }
    std::string str() const;
};

inline Atom re_atom(std::string name, int deriv = 0) {
    return Atom{AtomKind::coeff_re, std::move(name), deriv};
}
inline Atom im_atom(std::string name, int deriv = 0) {
    return Atom{AtomKind::coeff_im, std::move(name), deriv};
}
inline Atom param_atom(std::string name) { return Atom{AtomKind::formal_param, std::move(name), 0}; }

// Sorted multiset of atoms, stored as (atom, power) pairs.
class Monomial {
  public:
    Monomial() = default;
    explicit Monomial(const Atom& a) : factors_{{a, 1}} {}

    bool is_constant() const { return factors_.empty(); }
    int total_degree() const;
    const std::vector<std::pair<Atom, int>>& factors() const { return factors_; }

    Monomial times(const Monomial& o) const;
    // Removes one power of the atom at position idx.
    Monomial without_one(std::size_t idx) const;

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.factors_ == b.factors_;
    }
    friend bool operator<(const Monomial& a, const Monomial& b);
    std::string str() const;

    static Monomial from_powers(std::vector<std::pair<Atom, int>> factors);

  private:
    std::vector<std::pair<Atom, int>> factors_;  // sorted by atom, powers >= 1
};

class Polynomial {
  public:
    Polynomial() = default;
    Polynomial(GaussianRational c);
    Polynomial(std::int64_t c) : Polynomial(GaussianRational(c)) {}
    explicit Polynomial(const Atom& a);

    static Polynomial atom(const Atom& a) { return Polynomial(a); }
    static Polynomial constant(GaussianRational c) { return Polynomial(c); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant term (zero if absent).
    GaussianRational constant_term() const;
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, GaussianRational>& terms() const { return terms_; }

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o) { return *this += -o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial scale(const GaussianRational& c) const;

    // d/dx by the Leibniz rule; each atom differentiates as deriv -> deriv+1.
    // Formal parameters are constants.
    Polynomial differentiate() const;
    Polynomial differentiate(int times) const;

    // Complex conjugation: atoms denote real-valued functions, so only the
    // coefficients conjugate.
    Polynomial conj() const;
    // Polynomials with the coefficients' real (imaginary) parts. For a
    // polynomial over real atoms these are Re(p) and Im(p).
    Polynomial real_part() const;
    Polynomial imag_part() const;

    // Substitutes every atom with base name `name` (any derivative order
    // beta) by the beta-th derivative of `value`.
    Polynomial substitute(const std::string& name, AtomKind kind, const Polynomial& value) const;

    // (min alpha, max alpha) over atoms present, reading the coefficient
    // index from names of the form "b<digits>"; nullopt for polynomials with
    // no such atoms.
    std::optional<std::pair<int, int>> support_band() const;

    // Numeric evaluation. `lookup` returns the complex value of an atom.
    std::complex<double> eval(
        const std::function<std::complex<double>(const Atom&)>& lookup) const;

    // Exact evaluation at Gaussian-rational assignments (used by randomized
    // identity tests).
    GaussianRational eval_exact(
        const std::function<GaussianRational(const Atom&)>& lookup) const;

    // Deterministic text dump: sorted monomials, coefficients as
    // "a/b+c/d*i".
    std::string str() const;

  private:
    void prune();
    std::map<Monomial, GaussianRational> terms_;  // no zero coefficients
};

Polynomial operator*(const GaussianRational& c, const Polynomial& p);

}  // namespace dispersym

#endif
