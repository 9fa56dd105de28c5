#include "dispersym/stages.hpp"

#include <chrono>

#include "dispersym/coeffsym.hpp"

namespace dispersym {

namespace {

using sym::cnst;
using sym::cnst_i;
using sym::full;
using sym::im;
using sym::im_of;
using sym::re;
using sym::re_of;

// Binomial coefficient C(n/2, r) for integer n (n may be odd or negative).
Rational half_binomial(int n, int r) {
    Rational acc(1);
    for (int t = 0; t < r; ++t) acc *= Rational(n - 2 * t, 2);
    return acc / Rational::factorial(r);
}

struct GroupKey {
    std::vector<OpaqueFactor> opaques;
    std::string gauge_name;
    int gauge_pow = 0;
    int degree = 0;  // xi-expansion degree
    bool operator<(const GroupKey& o) const {
        if (degree != o.degree) return degree < o.degree;
        if (opaques != o.opaques) return opaques < o.opaques;
        if (gauge_name != o.gauge_name) return gauge_name < o.gauge_name;
        return gauge_pow < o.gauge_pow;
    }
};

}  // namespace

namespace {

void ray_expansion(const SymbolAlgebra& alg, const SymbolExpr& e, int threshold,
                   std::map<GroupKey, Polynomial>& coeffs, std::map<GroupKey, int>& opaque_order) {
    const Atom ell = param_atom("ell");
    for (const auto& [k, p] : e.terms) {
        if (k.s_flag != 0)
            throw UncancelledFormalExponent("residual carries a formal s exponent");
        int o_op = 0;
        for (const auto& f : k.opaques) {
            TermKey single;
            single.opaques.push_back(f);
            o_op += alg.term_order(single);
        }
        // expansion of xi^a <xi>^n l^c as xi -> +inf:
        //   sum_r C(n/2, r) l^{2r + c} xi^{a + n - 2r}
        int a = k.xi_pow, n = k.br_pow, c = k.ell_pow;
        for (int r = 0;; ++r) {
            int d = a + n - 2 * r;
            if (d + o_op <= threshold) break;
            Polynomial contrib = p.scale(GaussianRational(half_binomial(n, r)));
            if (alg.mode() == SymbolMode::SEll)
                for (int t = 0; t < 2 * r + c; ++t) contrib *= Polynomial(ell);
            GroupKey g{k.opaques, k.gauge_name, k.gauge_pow, d};
            coeffs[g] += contrib;
            opaque_order[g] = o_op;
            if (n == 0) break;  // pure power, no tail
        }
    }
}

}  // namespace

int positive_ray_order_above(const SymbolAlgebra& alg, const SymbolExpr& e, int threshold) {
    std::map<GroupKey, Polynomial> coeffs;
    std::map<GroupKey, int> opaque_order;
    ray_expansion(alg, e, threshold, coeffs, opaque_order);
    int worst = std::numeric_limits<int>::min();
    for (const auto& [g, p] : coeffs)
        if (!p.is_zero()) worst = std::max(worst, g.degree + opaque_order[g]);
    return worst;
}

std::string positive_ray_residual_report(const SymbolAlgebra& alg, const SymbolExpr& e,
                                         int threshold) {
    std::map<GroupKey, Polynomial> coeffs;
    std::map<GroupKey, int> opaque_order;
    ray_expansion(alg, e, threshold, coeffs, opaque_order);
    std::string out;
    for (const auto& [g, p] : coeffs) {
        if (p.is_zero()) continue;
        out += "order " + std::to_string(g.degree + opaque_order[g]) + ": xi^" +
               std::to_string(g.degree);
        for (const auto& f : g.opaques)
            out += " * D_xi^" + std::to_string(f.xi_derivs) + "[" + f.name + "]";
        out += " : " + p.str() + "\n";
    }
    return out;
}

namespace {

// d_xi^2 Phi0 + (d_xi Phi0)^2
SymbolExpr d2_combo(const SymbolAlgebra& alg, const std::string& name) {
    return alg.add(alg.opaque(name, 2), alg.mul(alg.opaque(name, 1), alg.opaque(name, 1)));
}
// d_xi^3 Phi0 + 3 d_xi^2 Phi0 d_xi Phi0 + (d_xi Phi0)^3
SymbolExpr d3_combo(const SymbolAlgebra& alg, const std::string& name) {
    SymbolExpr d1 = alg.opaque(name, 1);
    SymbolExpr cube = alg.mul(d1, alg.mul(d1, d1));
    SymbolExpr cross = alg.scale(alg.mul(alg.opaque(name, 2), d1), GaussianRational(3));
    return alg.add(alg.opaque(name, 3), alg.add(cross, cube));
}

Polynomial k4_c1() { return full("c") - cnst(3, 2) * im("b", 1) + cnst_i(1) * re("b", 1); }

Polynomial k5_c1() { return full("c") - cnst(2) * im("b", 1) + cnst_i(3, 2) * re("b", 1); }

Polynomial k5_d1() {
    return full("d") + cnst_i(2) * im("b", 2) - cnst(2, 5) * im("b") * im("b") -
           cnst_i(3, 5) * full("b") * im("b") + cnst_i(1, 5) * re("b") * im("b");
}

Polynomial k5_d2() {
    Polynomial c1p = k5_c1().differentiate();
    return k5_d1() - cnst(2) * im_of(c1p) + cnst_i(1) * re_of(c1p);
}

Polynomial k6_c1() { return full("c") - cnst(5, 2) * im("b", 1) + cnst_i(2) * re("b", 1); }

Polynomial k6_d1() {
    return full("d") + cnst(1, 4) * im("b") * im("b") - cnst_i(1, 2) * im("b") * re("b") +
           cnst_i(10, 3) * im("b", 2);
}

Polynomial k6_e1() {
    return full("e") - cnst_i(1, 3) * im("b") * full("c") + cnst_i(1, 4) * im("b", 1) * im("b") +
           cnst(1, 4) * re("b", 1) * im("b") - cnst(7, 12) * re("b") * im("b", 1) +
           cnst(5, 2) * im("b", 3) + cnst_i(1) * re("b", 3);
}

Polynomial k6_d2() {
    Polynomial c1p = k6_c1().differentiate();
    return k6_d1() - cnst(5, 2) * im_of(c1p) + cnst_i(3, 2) * re_of(c1p);
}

Polynomial k6_e2() {
    Polynomial c1 = k6_c1();
    return k6_e1() - cnst_i(1, 3) * re("b") * im_of(c1) +
           cnst_i(10, 3) * im_of(c1.differentiate(2));
}

Polynomial k6_e3() {
    Polynomial d2p = k6_d2().differentiate();
    return k6_e2() - cnst(5, 2) * im_of(d2p) + cnst_i(1) * re_of(d2p);
}

// Tarama weight in front of the integral defining Phi_{0,i} and the
// coefficient function whose Im it smooths.
void stage_weight(int k, int i, const SymbolAlgebra& alg, SymbolExpr& weight, Polynomial& h) {
    auto lead = [&](int kk, int shift) {
        // (1/kk)(<xi>^{-1-shift} + (l^2/2) <xi>^{-3-shift})
        return alg.add(
            alg.scale(alg.bracket(-1 - shift), GaussianRational(Rational(1, kk))),
            alg.scale(alg.mul(alg.ell(2), alg.bracket(-3 - shift)),
                      GaussianRational(Rational(1, 2 * kk))));
    };
    if (k == 4) {
        weight = alg.scale(alg.xi(-i), GaussianRational(Rational(1, 4)));
        h = i == 1 ? im("b") : im_of(k4_c1());
        return;
    }
    if (k == 5) {
        if (i == 1) {
            weight = lead(5, 0);
            h = im("b");
        } else if (i == 2) {
            weight = alg.scale(alg.bracket(-2), GaussianRational(Rational(1, 5)));
            h = im_of(k5_c1());
        } else {
            weight = alg.scale(alg.bracket(-3), GaussianRational(Rational(1, 5)));
            h = im_of(k5_d2());
        }
        return;
    }
    if (i == 1) {
        weight = lead(6, 0);
        h = im("b");
    } else if (i == 2) {
        // (1/6)(<xi>^-2 + l^2 <xi>^-4): the l^2 row must carry coefficient 1
        // (not 1/2) so that 6 xi^5 * weight = xi^3 + O(xi^-1) on the ray.
        weight = alg.add(
            alg.scale(alg.bracket(-2), GaussianRational(Rational(1, 6))),
            alg.scale(alg.mul(alg.ell(2), alg.bracket(-4)), GaussianRational(Rational(1, 6))));
        h = im_of(k6_c1());
    } else if (i == 3) {
        weight = alg.scale(alg.bracket(-3), GaussianRational(Rational(1, 6)));
        h = im_of(k6_d2());
    } else {
        weight = alg.scale(alg.bracket(-4), GaussianRational(Rational(1, 6)));
        h = im_of(k6_e3());
    }
}

void stage_operators(int k, int i, std::map<int, Polynomial>& source,
                     std::map<int, Polynomial>& target) {
    if (k == 4) {
        Polynomial c1 = k4_c1();
        if (i == 1) {
            source = {{4, cnst(1)}, {2, full("b")}, {1, full("c")}, {0, full("d")}};
            target = {{4, cnst(1)}, {2, re("b")}, {1, full("c") - cnst(3, 2) * im("b", 1)}};
        } else {
            source = {{4, cnst(1)}, {2, re("b")}, {1, cnst_i(-1) * re("b", 1) + c1}};
            target = {{4, cnst(1)}, {2, re("b")}, {1, cnst_i(-1) * re("b", 1) + re_of(c1)}};
        }
        return;
    }
    if (k == 5) {
        Polynomial c1 = k5_c1(), d1 = k5_d1(), d2 = k5_d2();
        Polynomial a1_2 = cnst_i(-3, 2) * re("b", 1);
        Polynomial a2_1 = cnst_i(-1) * re_of(c1.differentiate());
        if (i == 1) {
            source = {{5, cnst(1)}, {3, full("b")}, {2, full("c")}, {1, full("d")}, {0, full("e")}};
            target = {{5, cnst(1)}, {3, re("b")}, {2, full("c") - cnst(2) * im("b", 1)}, {1, d1}};
        } else if (i == 2) {
            source = {{5, cnst(1)}, {3, re("b")}, {2, a1_2 + c1}, {1, d1}};
            target = {{5, cnst(1)}, {3, re("b")}, {2, a1_2 + re_of(c1)},
                      {1, d1 - cnst(2) * im_of(c1.differentiate())}};
        } else {
            source = {{5, cnst(1)}, {3, re("b")}, {2, a1_2 + re_of(c1)}, {1, a2_1 + d2}};
            target = {{5, cnst(1)}, {3, re("b")}, {2, a1_2 + re_of(c1)}, {1, a2_1 + re_of(d2)}};
        }
        return;
    }
    Polynomial c1 = k6_c1(), d1 = k6_d1(), e1 = k6_e1(), d2 = k6_d2(), e2 = k6_e2(),
               e3 = k6_e3();
    Polynomial a1_3 = cnst_i(-2) * re("b", 1);
    Polynomial a1_1 = cnst_i(-1) * re("b", 3);
    Polynomial a2_2 = cnst_i(-3, 2) * re_of(c1.differentiate());
    Polynomial a3_1 = cnst_i(-1) * re_of(d2.differentiate());
    if (i == 1) {
        source = {{6, cnst(1)}, {4, full("b")}, {3, full("c")},
                  {2, full("d")}, {1, full("e")}, {0, full("f")}};
        // the D^1 coefficient is e1 before the self-adjoint regrouping pulls
        // out the -i Re(b''') A-part
        target = {{6, cnst(1)}, {4, re("b")},
                  {3, full("c") - cnst(5, 2) * im("b", 1)}, {2, d1},
                  {1, e1 - cnst_i(1) * re("b", 3)}};
    } else if (i == 2) {
        source = {{6, cnst(1)}, {4, re("b")}, {3, a1_3 + c1}, {2, d1}, {1, a1_1 + e1}};
        target = {{6, cnst(1)}, {4, re("b")}, {3, a1_3 + re_of(c1)},
                  {2, d1 - cnst(5, 2) * im_of(c1.differentiate())}, {1, a1_1 + e2}};
    } else if (i == 3) {
        source = {{6, cnst(1)}, {4, re("b")}, {3, a1_3 + re_of(c1)},
                  {2, a2_2 + d2}, {1, a1_1 + e2}};
        target = {{6, cnst(1)}, {4, re("b")}, {3, a1_3 + re_of(c1)},
                  {2, a2_2 + re_of(d2)},
                  {1, a1_1 + e2 - cnst(5, 2) * im_of(d2.differentiate())}};
    } else {
        source = {{6, cnst(1)}, {4, re("b")}, {3, a1_3 + re_of(c1)},
                  {2, a2_2 + re_of(d2)}, {1, a1_1 + a3_1 + e3}};
        target = {{6, cnst(1)}, {4, re("b")}, {3, a1_3 + re_of(c1)},
                  {2, a2_2 + re_of(d2)}, {1, a1_1 + a3_1 + re_of(e3)}};
    }
}

SymbolExpr stage_bracket(int k, int i, SymbolAlgebra& alg, const std::string& phi) {
    auto dphi = [&](int p) { return alg.opaque(phi, p); };
    auto wrow = [&](SymbolExpr w, const SymbolExpr& derivs, const Polynomial& coeff) {
        return alg.mul(w, alg.mul(derivs, alg.coeff(coeff)));
    };
    if (k == 4) {
        return alg.add(alg.one(),
                       wrow(alg.scale(alg.xi(-1), GaussianRational(Rational(1, 4))), dphi(1),
                            re("b")));
    }
    if (k == 5) {
        if (i == 1) {
            SymbolExpr b = alg.one();
            b = alg.add(b, wrow(alg.scale(alg.bracket(-1), GaussianRational(Rational(1, 5))),
                                dphi(1), re("b")));
            b = alg.add(b, wrow(alg.scale(alg.bracket(-2), GaussianRational(Rational(1, 5))),
                                dphi(1), full("c") + cnst_i(2) * full("b", 1)));
            b = alg.add(b, wrow(alg.scale(alg.bracket(-1), GaussianRational(Rational(-1, 10))),
                                d2_combo(alg, phi), cnst_i(1) * re("b", 1)));
            return b;
        }
        if (i == 2) {
            Polynomial c1 = k5_c1();
            SymbolExpr b = alg.one();
            b = alg.add(b, wrow(alg.scale(alg.bracket(-1), GaussianRational(Rational(1, 5))),
                                dphi(1), re("b")));
            b = alg.add(b, wrow(alg.scale(alg.bracket(-2), GaussianRational(Rational(1, 10))),
                                dphi(1), cnst(2) * c1 + cnst_i(1) * re("b", 1)));
            b = alg.add(b, alg.scale(alg.mul(alg.deriv_x(alg.opaque(phi, 0)), dphi(1)),
                                     -GaussianRational::i()));
            b = alg.add(b, wrow(alg.scale(alg.bracket(-1), GaussianRational(Rational(-1, 10))),
                                d2_combo(alg, phi), cnst_i(1) * re("b", 1)));
            return b;
        }
        Polynomial c1 = k5_c1();
        SymbolExpr b = alg.one();
        b = alg.add(b, wrow(alg.scale(alg.bracket(-1), GaussianRational(Rational(1, 5))),
                            dphi(1), re("b")));
        b = alg.add(b, wrow(alg.scale(alg.bracket(-2), GaussianRational(Rational(1, 5))),
                            dphi(1), re_of(c1) + cnst_i(1, 2) * re("b", 1)));
        b = alg.add(b, wrow(alg.scale(alg.bracket(-1), GaussianRational(Rational(-1, 10))),
                            d2_combo(alg, phi), cnst_i(1) * re("b", 1)));
        return b;
    }
    // k == 6: all four stages share shape; rows 2..4 vary.
    Polynomial c1 = k6_c1(), d1 = k6_d1(), d2 = k6_d2();
    SymbolExpr lead = alg.add(
        alg.scale(alg.bracket(-1), GaussianRational(Rational(1, 6))),
        alg.scale(alg.mul(alg.ell(2), alg.bracket(-3)), GaussianRational(Rational(1, 12))));
    Polynomial row2, row3, row4;
    if (i == 1) {
        row2 = full("c") + cnst_i(5, 2) * full("b", 1);
        row3 = cnst(-35, 72) * full("b", 2) + cnst_i(5, 12) * full("c", 1) +
               cnst(1, 6) * full("d") - cnst(1, 24) * full("b") * full("b") -
               cnst(1, 36) * re("b") * re("b");
        row4 = cnst_i(-1, 12) * full("c", 1) + cnst(5, 24) * full("b", 2) +
               cnst(1, 72) * re("b") * re("b");
    } else if (i == 2) {
        row2 = re_of(c1) + cnst_i(1, 2) * re("b", 1);
        row3 = cnst(1, 6) * d1 + cnst_i(5, 12) * c1.differentiate() + cnst(25, 72) * re("b", 2) -
               cnst(5, 72) * re("b") * re("b");
        row4 = cnst_i(-1, 12) * re_of(c1.differentiate()) + cnst(1, 24) * re("b", 2) +
               cnst(1, 72) * re("b") * re("b");
    } else {
        row2 = re_of(c1) + cnst_i(1, 2) * re("b", 1);
        row3 = cnst(1, 6) * re_of(d2) + cnst_i(1, 6) * re_of(c1.differentiate()) +
               cnst(25, 72) * re("b", 2) - cnst(5, 72) * re("b") * re("b");
        row4 = cnst_i(-1, 12) * re_of(c1.differentiate()) + cnst(1, 24) * re("b", 2) +
               cnst(1, 72) * re("b") * re("b");
    }
    SymbolExpr b = alg.one();
    b = alg.add(b, wrow(lead, dphi(1), re("b")));
    b = alg.add(b, wrow(alg.scale(alg.bracket(-2), GaussianRational(Rational(1, 6))), dphi(1),
                        row2));
    b = alg.add(b, wrow(alg.scale(alg.bracket(-1), GaussianRational(Rational(-1, 12))),
                        d2_combo(alg, phi), cnst_i(1) * re("b", 1)));
    b = alg.add(b, wrow(alg.bracket(-3), dphi(1), row3));
    b = alg.add(b, wrow(alg.bracket(-2), d2_combo(alg, phi), row4));
    b = alg.add(b, wrow(alg.scale(alg.bracket(-1), GaussianRational(Rational(-1, 36))),
                        d3_combo(alg, phi), re("b", 2)));
    return b;
}

SymbolExpr spatial_symbol(const SymbolAlgebra& alg, const std::map<int, Polynomial>& coeffs) {
    SymbolExpr e = alg.zero();
    for (const auto& [j, p] : coeffs) e = alg.add(e, alg.mul(alg.coeff(p), alg.xi(j)));
    return e;
}

}  // namespace

StageSpec build_stage(int k, int i, bool fresh_remainders) {
    bool valid = (k == 4 && (i == 1 || i == 2)) || (k == 5 && i >= 1 && i <= 3) ||
                 (k == 6 && i >= 1 && i <= 4);
    if (!valid) throw std::invalid_argument("no such stage");

    StageSpec spec;
    spec.k = k;
    spec.index = i;
    spec.phi_name = "Phi0" + std::to_string(i);
    spec.remainder_order = -(k - 1);
    spec.algebra = std::make_shared<SymbolAlgebra>(k == 4 ? SymbolMode::Ray : SymbolMode::SEll);
    spec.algebra->set_fresh_remainders(fresh_remainders);
    SymbolAlgebra& alg = *spec.algebra;

    SymbolExpr weight;
    Polynomial h;
    stage_weight(k, i, alg, weight, h);
    alg.declare_opaque(spec.phi_name, 0, weight, h, spec.remainder_order);

    stage_operators(k, i, spec.source, spec.target);
    spec.bracket = stage_bracket(k, i, alg, spec.phi_name);
    spec.phi = alg.mul(alg.gauge_exp(spec.phi_name), spec.bracket);
    return spec;
}

ResidualReport verify_identity(StageSpec& spec) {
    auto t0 = std::chrono::steady_clock::now();
    SymbolAlgebra& alg = *spec.algebra;
    ResidualReport rep;
    rep.name = "k" + std::to_string(spec.k) + " stage " + std::to_string(spec.index);

    // order(Phi_0) <= 0 holds by declaration; certify order(bracket-1) <= -1.
    int bracket_excess = positive_ray_order_above(alg, alg.sub(spec.bracket, alg.one()), -1);
    if (bracket_excess != std::numeric_limits<int>::min())
        throw IdentityFailure(rep.name + ": bracket - 1 has order > -1");

    SymbolExpr lhs = alg.compose(spatial_symbol(alg, spec.source), spec.phi, 0);
    SymbolExpr rhs = alg.compose(spec.phi, spatial_symbol(alg, spec.target), 0);
    SymbolExpr diff = alg.sub(lhs, rhs);
    rep.residual_order = positive_ray_order_above(alg, diff, 0);
    rep.pass = rep.residual_order == std::numeric_limits<int>::min();
    if (!rep.pass) rep.detail = positive_ray_residual_report(alg, diff, 0);
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

void verify_identity_or_throw(StageSpec& spec) {
    ResidualReport rep = verify_identity(spec);
    if (!rep.pass)
        throw IdentityFailure(rep.name + ": residual of order " +
                              std::to_string(rep.residual_order));
}

DiffOperator selfadjoint_A(int k) {
    // D^k + A; A's top coefficient alpha(x) sits at order k-2.
    DiffOperator P;
    P.k = k;
    if (k == 5) {
        P.coeffs[3] = re("alpha");
        P.coeffs[2] = re("beta") + cnst_i(-3, 2) * re("alpha", 1);
        P.coeffs[1] = re("gamma") + cnst_i(-1) * re("beta", 1);
    } else if (k == 6) {
        P.coeffs[4] = re("alpha");
        P.coeffs[3] = re("beta") + cnst_i(-2) * re("alpha", 1);
        P.coeffs[2] = re("gamma") + cnst_i(-3, 2) * re("beta", 1);
        P.coeffs[1] = re("delta") + cnst_i(-1) * re("gamma", 1) + cnst_i(-1) * re("alpha", 3);
    } else {
        throw std::invalid_argument("selfadjoint_A supports k in {5,6}");
    }
    return P;
}

namespace {

SymbolExpr appendix_phi(SymbolAlgebra& alg, int k, bool ell_uniform_repair) {
    Polynomial s = sym::param("s");
    if (k == 5) {
        Polynomial r2 = cnst(-1, 5) * s * re("alpha");
        Polynomial r3 =
            cnst(-1, 5) * s *
            (re("beta") + cnst_i(1) * re("alpha", 1) - cnst_i(1, 2) * s * re("alpha", 1));
        return alg.add(alg.one(), alg.add(alg.mul(alg.bracket(-2), alg.coeff(r2)),
                                          alg.mul(alg.bracket(-3), alg.coeff(r3))));
    }
    Polynomial r2 = cnst(-1, 6) * s * re("alpha");
    Polynomial r3 = cnst(-1, 6) * s *
                    (re("beta") + cnst_i(1) * re("alpha", 1) - cnst_i(1, 2) * s * re("alpha", 1));
    Polynomial r4 =
        cnst(-1, 6) * s *
        (re("gamma") + cnst_i(3, 2) * re("beta", 1) - cnst_i(1, 2) * s * re("beta", 1) +
         (cnst(3, 2) + cnst(3, 4) * s - cnst(1, 6) * s * s) * re("alpha", 2) -
         cnst(1, 2) * re("alpha") * re("alpha") - cnst(1, 12) * s * re("alpha") * re("alpha"));
    SymbolExpr phi = alg.add(alg.one(),
                             alg.add(alg.mul(alg.bracket(-2), alg.coeff(r2)),
                                     alg.add(alg.mul(alg.bracket(-3), alg.coeff(r3)),
                                             alg.mul(alg.bracket(-4), alg.coeff(r4)))));
    if (ell_uniform_repair) {
        // (s/6)(1 - l^2) <xi>^-4 alpha: vanishes at l = 1, and restores the
        // identity uniformly in l (the conjugated operator's +i s alpha' xi
        // term is an l=1 bracket artifact).
        SymbolExpr row = alg.sub(alg.bracket(-4), alg.mul(alg.ell(2), alg.bracket(-4)));
        phi = alg.add(phi, alg.mul(row, alg.coeff(cnst(1, 6) * s * re("alpha"))));
    }
    return phi;
}

}  // namespace

DiffOperator selfadjoint_conjugated_operator(int k) {
    SymbolAlgebra alg(SymbolMode::S);
    return alg.sobolev_conjugate(selfadjoint_A(k));
}

ResidualReport verify_selfadjoint_reduction(int k, bool ell_uniform_repair) {
    auto t0 = std::chrono::steady_clock::now();
    ResidualReport rep;
    rep.name = "k" + std::to_string(k) + " self-adjoint reduction";

    DiffOperator Bs = selfadjoint_conjugated_operator(k);
    DiffOperator B0 = Bs;
    for (auto& [j, p] : B0.coeffs)
        p = p.substitute("s", AtomKind::formal_param, Polynomial(GaussianRational(Rational(0))));

    // The display's brackets and <D>^s share one bracket: l = 1. The
    // repaired variant runs uniformly in l.
    SymbolAlgebra alg(ell_uniform_repair ? SymbolMode::SEll : SymbolMode::S);
    SymbolExpr phi = appendix_phi(alg, k, ell_uniform_repair);
    SymbolExpr lhs = alg.compose(alg.from_diffop(Bs), phi, 0);
    SymbolExpr rhs = alg.compose(phi, alg.from_diffop(B0), 0);
    SymbolExpr diff = alg.sub(lhs, rhs);
    rep.residual_order = positive_ray_order_above(alg, diff, 0);
    rep.pass = rep.residual_order == std::numeric_limits<int>::min();
    if (!rep.pass) rep.detail = positive_ray_residual_report(alg, diff, 0);
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<FaultScanResult> fault_injection_scan(int k, const Rational& delta) {
    std::vector<FaultScanResult> results;
    int stages = k == 4 ? 2 : (k == 5 ? 3 : 4);
    for (int i = 1; i <= stages; ++i) {
        StageSpec clean = build_stage(k, i);
        verify_identity_or_throw(clean);
        SymbolAlgebra& alg = *clean.algebra;
        // composition is bilinear, so the perturbed residual differs from
        // the (empty) clean one by -compose(Phi, bump * xi^j) exactly
        for (const auto& [j, p] : clean.target) {
            if (j < 1 || j >= k) continue;
            for (const auto& [mono, c] : p.terms()) {
                Polynomial bump{GaussianRational(delta)};
                for (const auto& [a, pw] : mono.factors())
                    for (int t = 0; t < pw; ++t) bump *= Polynomial(a);
                SymbolExpr shift =
                    alg.compose(clean.phi, alg.mul(alg.coeff(bump), alg.xi(j)), 0);
                bool detected = positive_ray_order_above(alg, shift, 0) > 0;
                results.push_back({i, j, mono.str(), detected});
            }
        }
    }
    return results;
}

}  // namespace dispersym
