#include "dispersym/coeffsym.hpp"
#include "dispersym/gauge.hpp"
#include "dispersym/modderiv.hpp"
#include "doctest.h"

using namespace dispersym;
using sym::cnst;
using sym::cnst_i;
using sym::full;
using sym::im_of;

namespace {

Polynomial letter_expect(const Polynomial& p) { return mod_derivatives(p.imag_part()); }

}  // namespace

TEST_CASE("identity gauge: b_{k-1} = 0 leaves the operator unchanged") {
    DiffOperator L;
    L.k = 4;
    L.coeffs[2] = full("b");
    L.coeffs[1] = full("c");
    GaugeResult g = gauge_conjugate(L);
    CHECK(g.transformed == L);
}

TEST_CASE("k=2 gauge closed form") {
    DiffOperator L;
    L.k = 2;
    L.coeffs[1] = full("b1");
    L.coeffs[0] = full("b0");
    GaugeResult g = gauge_conjugate(L);
    CHECK(g.transformed.coeff(1).is_zero());
    // (D - b1/2)^2 expansion: b0 - b1^2/4 + (i/2) b1'
    Polynomial expect = full("b0") - (full("b1") * full("b1")).scale(GaussianRational(Rational(1, 4))) +
                        full("b1", 1).scale(GaussianRational(Rational(0), Rational(1, 2)));
    CHECK(g.transformed.coeff(0) == expect);
}

TEST_CASE("gauge followed by the inverse gauge is the identity") {
    DiffOperator L;
    L.k = 5;
    for (int j = 0; j < 5; ++j) L.coeffs[j] = full("b" + std::to_string(j));
    GaugeResult g = gauge_conjugate(L);
    // conjugate back: replace D by D + a/k with the original a
    Polynomial a = L.coeff(4);
    RayOp repl = RayOp::dx(1) + RayOp::mult_op(a.scale(GaussianRational(Rational(1, 5))));
    DiffOperator back = DiffOperator::from_spatial(g.transformed.spatial().substitute_dx(repl));
    CHECK(back == L);
}

TEST_CASE("k=5 transformed b3 reduces to b - (2/5) a^2 modulo derivatives") {
    DiffOperator L;
    L.k = 5;
    L.coeffs[4] = full("a");
    L.coeffs[3] = full("b");
    L.coeffs[2] = full("c");
    L.coeffs[1] = full("d");
    GaugeResult g = gauge_conjugate(L);
    Polynomial got = mod_derivatives(g.transformed.coeff(3).imag_part());
    Polynomial expect = letter_expect(full("b") - cnst(2, 5) * full("a") * full("a"));
    CHECK(got == expect);
}

TEST_CASE("corollary conditions k=5 match the displayed integrands") {
    ConditionSet cs = corollary_conditions(5);
    REQUIRE(cs.entries.size() == 4);
    CHECK(cs.entries[0].integrand == sym::im("a"));
    CHECK(cs.entries[0].exponent == Rational(0));
    CHECK(cs.entries[1].integrand ==
          letter_expect(full("b") - cnst(2, 5) * full("a") * full("a")));
    CHECK(cs.entries[1].exponent == Rational(1, 4));
    CHECK(cs.entries[2].integrand ==
          letter_expect(full("c") - cnst(3, 5) * full("a") * full("b") +
                        cnst(4, 25) * full("a") * full("a") * full("a")));
    CHECK(cs.entries[2].exponent == Rational(1, 2));
    Polynomial a = full("a"), b = full("b"), c = full("c"), d = full("d");
    Polynomial quart = d - cnst(1, 5) * b * b - cnst(2, 5) * a * c + cnst(7, 25) * a * a * b -
                       cnst(7, 125) * a * a * a * a - cnst_i(1, 5) * a.differentiate() * b +
                       cnst(1, 5) * a.differentiate() * a.differentiate();
    CHECK(cs.entries[3].integrand == letter_expect(quart));
    CHECK(cs.entries[3].exponent == Rational(3, 4));
}

TEST_CASE("corollary conditions k=6 match the displayed integrands") {
    ConditionSet cs = corollary_conditions(6);
    REQUIRE(cs.entries.size() == 5);
    Polynomial a = full("a"), b = full("b"), c = full("c"), d = full("d"), e = full("e");
    CHECK(cs.entries[0].integrand == sym::im("a"));
    CHECK(cs.entries[1].integrand == letter_expect(b - cnst(5, 12) * a * a));
    CHECK(cs.entries[1].exponent == Rational(1, 5));
    CHECK(cs.entries[2].integrand ==
          letter_expect(c - cnst(2, 3) * a * b + cnst(5, 27) * a * a * a));
    CHECK(cs.entries[2].exponent == Rational(2, 5));
    Polynomial quart = d - cnst(1, 4) * b * b - cnst(1, 2) * a * c + cnst(3, 8) * a * a * b -
                       cnst(5, 64) * a * a * a * a - cnst_i(1, 4) * a.differentiate() * b +
                       cnst(5, 16) * a.differentiate() * a.differentiate();
    CHECK(cs.entries[3].integrand == letter_expect(quart));
    Polynomial quint = e - cnst(1, 3) * b * c - cnst(1, 3) * a * d + cnst(2, 9) * a * b * b +
                       cnst(2, 9) * a * a * c - cnst(14, 81) * a * a * a * b +
                       cnst(7, 243) * a * a * a * a * a -
                       cnst(4, 9) * a.differentiate(2) * b -
                       cnst_i(1, 3) * a.differentiate() * c +
                       cnst_i(2, 9) * a * a.differentiate() * b -
                       cnst(10, 27) * a * a.differentiate() * a.differentiate();
    CHECK(cs.entries[4].integrand == letter_expect(quint));
    CHECK(cs.entries[4].exponent == Rational(4, 5));
}

TEST_CASE("corollary exponent ladder is 0, 1/(k-1), ..., (k-2)/(k-1)") {
    for (int k : {5, 6}) {
        ConditionSet cs = corollary_conditions(k);
        for (std::size_t idx = 0; idx < cs.entries.size(); ++idx)
            CHECK(cs.entries[idx].exponent == Rational(int(idx), k - 1));
    }
}
