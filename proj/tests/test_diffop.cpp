#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dispersym/coeffsym.hpp"
#include "dispersym/diffop.hpp"
#include "doctest.h"

using namespace dispersym;
using sym::cnst;
using sym::cnst_i;

namespace {

DiffOperator random_operator(std::mt19937& rng, int k) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 3);
    DiffOperator L;
    L.k = k;
    for (int j = 0; j <= k - 2; ++j) {
        GaussianRational c(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        L.coeffs[j] = sym::full("b" + std::to_string(j)).scale(c);
    }
    return L;
}

}  // namespace

TEST_CASE("ray operator composition matches Leibniz on a simple case") {
    // D o (b .) = b D + (1/i) b'
    RayOp lhs = RayOp::dx(1) * RayOp::mult_op(sym::full("b"));
    RayOp expect = RayOp::mult_op(sym::full("b")) * RayOp::dx(1) +
                   RayOp::mult_op(sym::full("b", 1).scale(-GaussianRational::i()));
    CHECK(lhs == expect);
}

TEST_CASE("adjoint closed form: k=3 with only b1") {
    DiffOperator L;
    L.k = 3;
    L.coeffs[1] = sym::full("b1");
    DiffOperator Ls = adjoint(L);
    CHECK(Ls.coeff(1) == sym::conj("b1"));
    // B_0 = D_x(conj b1) = -i (conj b1)'
    CHECK(Ls.coeff(0) == sym::conj("b1", 1).scale(-GaussianRational::i()));
}

TEST_CASE("adjoint closed form matches binomial formula for k=6") {
    std::mt19937 rng(7);
    DiffOperator L = random_operator(rng, 6);
    DiffOperator Ls = adjoint(L);
    for (int j = 0; j <= 4; ++j) {
        Polynomial expect;
        for (int l = j; l <= 4; ++l)
            expect += L.coeff(l)
                          .conj()
                          .differentiate(l - j)
                          .scale(GaussianRational(Rational::binomial(l, j)) *
                                 GaussianRational::i_pow(-(l - j)));
        CHECK(Ls.coeff(j) == expect);
    }
}

TEST_CASE("adjoint is an exact involution (k=6, random coefficients)") {
    std::mt19937 rng(19);
    for (int iter = 0; iter < 5; ++iter) {
        DiffOperator L = random_operator(rng, 6);
        CHECK(adjoint(adjoint(L)) == L);
    }
    DiffOperator pure;
    pure.k = 4;
    CHECK(adjoint(pure) == pure);
}

TEST_CASE("exp conjugation coefficients are the Bell-polynomial values") {
    // c_{1,1} = -i a'
    CHECK(exp_conjugation_coefficient(1, 1) ==
          sym::full("a", 1).scale(-GaussianRational::i()));
    // c_{2,1} = -a'', c_{2,2} = -(a')^2
    CHECK(exp_conjugation_coefficient(2, 1) == -sym::full("a", 2));
    CHECK(exp_conjugation_coefficient(2, 2) == -(sym::full("a", 1) * sym::full("a", 1)));
    // zero phase: conjugation is the identity
    RayOp id = RayOp::dx(3).conjugate_exp(Polynomial(), 2);
    CHECK(id == RayOp::dx(3));
}

TEST_CASE("exp conjugation coefficients match numerical differentiation") {
    // a(x) = 3/10 sin(x) + 1/5 x^2 at x0; e^{-a/xi^m} D^p e^{a/xi^m}
    const double x0 = 0.37;
    auto aderiv = [&](int beta) -> std::complex<double> {
        double s[] = {std::sin(x0), std::cos(x0), -std::sin(x0), -std::cos(x0), std::sin(x0)};
        double poly[] = {x0 * x0, 2 * x0, 2.0, 0.0, 0.0};
        return 0.3 * s[beta] + 0.2 * poly[beta];
    };
    const int m = 1;
    for (double xi : {4.0, 8.0}) {
        for (int p = 1; p <= 4; ++p) {
            // numerical: D^p = (1/i d/dx)^p of e^{a/xi^m}, differentiated
            // through the Cauchy integral formula (spectrally accurate)
            auto g = [&](std::complex<double> z) {
                return std::exp((0.3 * std::sin(z) + 0.2 * z * z) / xi);
            };
            auto deriv_n = [&](int n) {
                const int N = 64;
                const double r = 0.5;
                std::complex<double> acc = 0.0;
                for (int j = 0; j < N; ++j) {
                    double th = 2.0 * M_PI * j / N;
                    std::complex<double> w = std::polar(r, th);
                    acc += g(x0 + w) * std::polar(1.0, -n * th);
                }
                double fact = 1.0;
                for (int t = 2; t <= n; ++t) fact *= t;
                return acc * fact / (double(N) * std::pow(r, n));
            };
            std::complex<double> numeric =
                std::pow(std::complex<double>(0, -1), p) * deriv_n(p) / g(x0);
            std::complex<double> symbolic = 0.0;
            for (int q = 1; q <= p; ++q) {
                Polynomial cpq = exp_conjugation_coefficient(p, q);
                std::complex<double> val = cpq.eval([&](const Atom& at) {
                    std::complex<double> v = aderiv(at.deriv);
                    return at.kind == AtomKind::coeff_im ? std::complex<double>(0.0) : v;
                });
                symbolic += val * std::pow(xi, -m * q);
            }
            CHECK(std::abs(numeric - symbolic) <= 1e-8 * (1.0 + std::abs(symbolic)));
        }
    }
}

TEST_CASE("substitute_dx reproduces plane-wave conjugation for k=2") {
    // e^{-ix xi} o (D^2 + b0) o e^{ix xi} = (D + xi)^2 + b0
    RayOp op = RayOp::dx(2) + RayOp::mult_op(sym::full("b0"));
    RayOp conj = op.substitute_dx(RayOp::dx(1) + RayOp::xi(1));
    RayOp expect = RayOp::dx(2) + (RayOp::xi(1) * RayOp::dx(1)).scale(GaussianRational(2)) +
                   RayOp::xi(2) + RayOp::mult_op(sym::full("b0"));
    CHECK(conj == expect);
}
