#include "dispersym/coeffsym.hpp"
#include "dispersym/gauge.hpp"
#include "dispersym/modderiv.hpp"
#include "dispersym/tarama.hpp"
#include "doctest.h"

using namespace dispersym;
using sym::cnst;
using sym::cnst_i;

TEST_CASE("base case k=2 matches the direct conjugation oracle") {
    RecursionState st = RecursionState::base_case(2);
    // only nonzero cells: P_{0;0,0} = conj(b0), P_{0;0,2} = 1
    CHECK(st.cell(0, 0) == sym::conj("b0"));
    CHECK(st.cell(0, 2) == Polynomial(1));
    int nonzero = 0;
    for (const auto& [key, p] : st.table().cells()) nonzero += !p.is_zero();
    CHECK(nonzero == 2);
}

TEST_CASE("base case closed form: binomial times adjoint coefficient") {
    for (int k : {3, 4, 5, 6}) {
        RecursionState st = RecursionState::base_case(k);
        DiffOperator L;
        L.k = k;
        for (int j = 0; j <= k - 2; ++j) L.coeffs[j] = sym::full("b" + std::to_string(j));
        DiffOperator Ls = adjoint(L);
        for (int l = 0; l <= k - 2; ++l) {
            for (int j = 0; j <= k; ++j) {
                Polynomial expect;
                if (j + l <= k - 2)
                    expect += Ls.coeff(j + l).scale(GaussianRational(Rational::binomial(j + l, l)));
                if (j == k - l)
                    expect += Polynomial(GaussianRational(Rational::binomial(k, l)));
                CHECK(st.cell(l, j) == expect);
            }
        }
        // P_{k-2;k-2,0} is the conjugated top coefficient itself
        CHECK(st.cell(k - 2, 0) == sym::conj("b" + std::to_string(k - 2)));
        // P_{k-2;0,k} = 1
        CHECK(st.cell(0, k) == Polynomial(1));
    }
}

TEST_CASE("Lemma structure (ii): k=5, m=1 kills the l=3 cell") {
    RecursionState st = RecursionState::base_case(5).advance();
    CHECK(st.cell(3, 0).is_zero());
}

TEST_CASE("verify_structure passes for k=3..6") {
    for (int k : {3, 4, 5, 6}) {
        StructureReport rep = verify_structure(k);
        CHECK(rep.all_pass());
        CHECK(rep.checks.size() >= std::size_t(k - 1));
    }
}

TEST_CASE("fault injection: corrupted cell violates property (iv)") {
    RecursionState st = RecursionState::base_case(5).advance();
    // inject b0-dependence into P_{2;3,1}: min{j+l, k-1-m} = min{4,3} = 3 > 0
    RayOp bad = st.table();
    bad.add_cell(3, 1, sym::full("b0"));
    // rebuild a state around the mutated table through the public surface:
    // structural_failures is exercised via a copy advanced from base; here we
    // check the predicate directly on the mutated polynomial support.
    Polynomial cell = bad.cell(3, 1);
    auto band = cell.support_band();
    REQUIRE(band.has_value());
    CHECK(band->first < 3);
}

TEST_CASE("recursion step throws on a corrupted pivot") {
    // advancing past the last level is rejected
    RecursionState st = RecursionState::base_case(3);
    st = st.advance();
    CHECK_THROWS_AS(st.advance(), std::invalid_argument);
}

TEST_CASE("k=5 level-2 diagonal P_{1;1,0} contains -(1/5) b3^2") {
    RecursionState st = RecursionState::base_case(5);
    while (st.level() < 2) st = st.advance();
    Polynomial diag = st.cell(1, 0);
    // P_{1;1,0} - x_1^(0) lives in P_{2..3} (Lemma (iii) with m' = 2)
    Polynomial delta = diag - sym::conj("b1");
    auto band = delta.support_band();
    REQUIRE(band.has_value());
    CHECK(band->first >= 2);
    // the b3^2 content carries the coefficient -1/5 after conj re-expression
    Polynomial b3sq_part;
    const Polynomial reexpressed = diag.conj();
    for (const auto& [m, c] : reexpressed.terms()) {
        bool pure_b3_sq = m.total_degree() == 2;
        for (const auto& [a, p] : m.factors())
            pure_b3_sq = pure_b3_sq && a.name == "b3" && a.deriv == 0;
        if (pure_b3_sq) {
            Polynomial mono{GaussianRational(c)};
            for (const auto& [a, p] : m.factors())
                for (int t = 0; t < p; ++t) mono *= Polynomial(a);
            b3sq_part += mono;
        }
    }
    Polynomial expect =
        (sym::full("b3") * sym::full("b3")).scale(GaussianRational(Rational(-1, 5)));
    CHECK(b3sq_part == expect);
}

TEST_CASE("necessary_conditions k=5 reproduces Theorem set {Im b, Im c, Im(d - b^2/5)}") {
    ConditionSet cs = necessary_conditions(5);
    REQUIRE(cs.entries.size() == 3);
    CHECK(cs.entries[0].exponent == Rational(1, 4));
    CHECK(cs.entries[1].exponent == Rational(1, 2));
    CHECK(cs.entries[2].exponent == Rational(3, 4));
    CHECK(letter_names(cs.entries[0].integrand, 5) == sym::im("b"));
    CHECK(letter_names(cs.entries[1].integrand, 5) == sym::im("c"));
    Polynomial expect =
        mod_derivatives((sym::full("d") -
                         cnst(1, 5) * sym::full("b") * sym::full("b"))
                            .imag_part());
    CHECK(letter_names(cs.entries[2].integrand, 5) == expect);
}

TEST_CASE("necessary_conditions k=6 reproduces Theorem set incl. Im(e - bc/3)") {
    ConditionSet cs = necessary_conditions(6);
    REQUIRE(cs.entries.size() == 4);
    CHECK(letter_names(cs.entries[0].integrand, 6) == sym::im("b"));
    CHECK(letter_names(cs.entries[1].integrand, 6) == sym::im("c"));
    Polynomial d_expect =
        mod_derivatives((sym::full("d") -
                         cnst(1, 4) * sym::full("b") * sym::full("b"))
                            .imag_part());
    CHECK(letter_names(cs.entries[2].integrand, 6) == d_expect);
    Polynomial e_expect =
        mod_derivatives((sym::full("e") -
                         cnst(1, 3) * sym::full("b") * sym::full("c"))
                            .imag_part());
    CHECK(letter_names(cs.entries[3].integrand, 6) == e_expect);
    CHECK(cs.entries[3].exponent == Rational(4, 5));
}

TEST_CASE("general-k pattern: conditions (i)-(iv) for k=3..7") {
    for (int k = 3; k <= 7; ++k) {
        ConditionSet cs = necessary_conditions(k);
        REQUIRE(cs.entries.size() == std::size_t(k - 2));
        // (i), (ii): literally Im b_{k-2}, Im b_{k-3}
        CHECK(cs.entries[0].integrand == sym::im("b" + std::to_string(k - 2)));
        if (k >= 4) CHECK(cs.entries[1].integrand == sym::im("b" + std::to_string(k - 3)));
        // (iii): Im(b_{k-4} - (k-3)/(2k) b_{k-2}^2)
        if (k >= 5) {
            Polynomial b2 = sym::full("b" + std::to_string(k - 2));
            Polynomial expect = mod_derivatives(
                (sym::full("b" + std::to_string(k - 4)) -
                 (b2 * b2).scale(GaussianRational(Rational(k - 3, 2 * k))))
                    .imag_part());
            CHECK(cs.entries[2].integrand == expect);
        }
        // (iv): Im(b_{k-5} - (k-4)/k b_{k-2} b_{k-3})
        if (k >= 6) {
            Polynomial expect = mod_derivatives(
                (sym::full("b" + std::to_string(k - 5)) -
                 (sym::full("b" + std::to_string(k - 2)) * sym::full("b" + std::to_string(k - 3)))
                     .scale(GaussianRational(Rational(k - 4, k))))
                    .imag_part());
            CHECK(cs.entries[3].integrand == expect);
        }
    }
}
