#include "dispersym/symbol.hpp"

#include <algorithm>
#include <sstream>

#include "dispersym/coeffsym.hpp"

namespace dispersym {

bool operator<(const TermKey& a, const TermKey& b) {
    if (a.xi_pow != b.xi_pow) return a.xi_pow < b.xi_pow;
    if (a.br_pow != b.br_pow) return a.br_pow < b.br_pow;
    if (a.s_flag != b.s_flag) return a.s_flag < b.s_flag;
    if (a.ell_pow != b.ell_pow) return a.ell_pow < b.ell_pow;
    if (a.opaques != b.opaques) return a.opaques < b.opaques;
    if (a.gauge_name != b.gauge_name) return a.gauge_name < b.gauge_name;
    return a.gauge_pow < b.gauge_pow;
}

bool operator==(const TermKey& a, const TermKey& b) {
    return a.xi_pow == b.xi_pow && a.br_pow == b.br_pow && a.s_flag == b.s_flag &&
           a.ell_pow == b.ell_pow && a.opaques == b.opaques && a.gauge_name == b.gauge_name &&
           a.gauge_pow == b.gauge_pow;
}

void SymbolAlgebra::declare_opaque(const std::string& name, int base_order) {
    if (registry_.count(name)) throw std::invalid_argument("duplicate opaque atom: " + name);
    OpaqueInfo oi;
    oi.base_order = base_order;
    registry_[name] = std::move(oi);
}

void SymbolAlgebra::declare_opaque(const std::string& name, int base_order,
                                   const SymbolExpr& weight, const Polynomial& h,
                                   int remainder_order) {
    if (registry_.count(name)) throw std::invalid_argument("duplicate opaque atom: " + name);
    OpaqueInfo oi;
    oi.base_order = base_order;
    oi.has_rule = true;
    oi.weight = weight;
    oi.h = h;
    oi.remainder_order = remainder_order;
    registry_[name] = std::move(oi);
}

const SymbolAlgebra::OpaqueInfo& SymbolAlgebra::info(const std::string& name) const {
    auto it = registry_.find(name);
    if (it == registry_.end()) throw std::logic_error("unknown opaque atom: " + name);
    return it->second;
}

SymbolExpr SymbolAlgebra::zero() const {
    SymbolExpr e;
    e.mode = mode_;
    return e;
}

void SymbolAlgebra::add_term(SymbolExpr& e, TermKey key, Polynomial coeff) const {
    if (coeff.is_zero()) return;
    if (mode_ == SymbolMode::Ray) {
        if (key.br_pow != 0 || key.s_flag != 0 || key.ell_pow != 0)
            throw std::invalid_argument("ray mode admits no bracket or l factors");
    } else if (key.xi_pow < 0) {
        throw std::invalid_argument("negative xi power outside ray mode");
    } else if (key.xi_pow >= 2) {
        // xi^2 = <xi>^2 - l^2 (l = 1 in S mode)
        TermKey up = key;
        up.xi_pow -= 2;
        up.br_pow += 2;
        add_term(e, up, coeff);
        TermKey down = key;
        down.xi_pow -= 2;
        if (mode_ == SymbolMode::SEll) down.ell_pow += 2;
        add_term(e, down, -coeff);
        return;
    }
    if (mode_ == SymbolMode::S && key.ell_pow != 0)
        throw std::invalid_argument("free l power in S mode");
    auto [it, inserted] = e.terms.try_emplace(std::move(key), coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) e.terms.erase(it);
    }
}

SymbolExpr SymbolAlgebra::coeff(const Polynomial& p) const {
    SymbolExpr e = zero();
    add_term(e, TermKey{}, p);
    return e;
}

SymbolExpr SymbolAlgebra::xi(int a) const {
    SymbolExpr e = zero();
    TermKey k;
    k.xi_pow = a;
    add_term(e, k, Polynomial(1));
    return e;
}

SymbolExpr SymbolAlgebra::bracket(int n) const {
    SymbolExpr e = zero();
    TermKey k;
    k.br_pow = n;
    add_term(e, k, Polynomial(1));
    return e;
}

SymbolExpr SymbolAlgebra::bracket_s(int s_flag) const {
    SymbolExpr e = zero();
    TermKey k;
    k.s_flag = s_flag;
    add_term(e, k, Polynomial(1));
    return e;
}

SymbolExpr SymbolAlgebra::ell(int c) const {
    SymbolExpr e = zero();
    TermKey k;
    k.ell_pow = c;
    add_term(e, k, Polynomial(1));
    return e;
}

SymbolExpr SymbolAlgebra::opaque(const std::string& name, int xi_derivs) const {
    info(name);
    SymbolExpr e = zero();
    TermKey k;
    k.opaques.push_back(OpaqueFactor{name, xi_derivs, 0});
    add_term(e, k, Polynomial(1));
    return e;
}

SymbolExpr SymbolAlgebra::gauge_exp(const std::string& name, int power) const {
    info(name);
    SymbolExpr e = zero();
    TermKey k;
    if (power != 0) {
        k.gauge_name = name;
        k.gauge_pow = power;
    }
    add_term(e, k, Polynomial(1));
    return e;
}

SymbolExpr SymbolAlgebra::from_diffop(const DiffOperator& L) const {
    SymbolExpr e = zero();
    const RayOp spatial = L.spatial();
    for (const auto& [key, p] : spatial.cells()) {
        if (key.first != 0) throw std::invalid_argument("operator carries xi powers");
        TermKey k;
        k.xi_pow = key.second;
        add_term(e, k, p);
    }
    return e;
}

SymbolExpr SymbolAlgebra::add(const SymbolExpr& a, const SymbolExpr& b) const {
    SymbolExpr e = a;
    for (const auto& [k, p] : b.terms) add_term(e, k, p);
    return e;
}

SymbolExpr SymbolAlgebra::sub(const SymbolExpr& a, const SymbolExpr& b) const {
    SymbolExpr e = a;
    for (const auto& [k, p] : b.terms) add_term(e, k, -p);
    return e;
}

SymbolExpr SymbolAlgebra::scale(const SymbolExpr& a, const GaussianRational& c) const {
    SymbolExpr e = zero();
    if (c.is_zero()) return e;
    for (const auto& [k, p] : a.terms) e.terms[k] = p.scale(c);
    return e;
}

SymbolExpr SymbolAlgebra::mul(const SymbolExpr& a, const SymbolExpr& b) const {
    SymbolExpr e = zero();
    for (const auto& [ka, pa] : a.terms)
        for (const auto& [kb, pb] : b.terms) {
            TermKey k;
            k.xi_pow = ka.xi_pow + kb.xi_pow;
            k.br_pow = ka.br_pow + kb.br_pow;
            k.s_flag = ka.s_flag + kb.s_flag;
            if (k.s_flag < -1 || k.s_flag > 1)
                throw UncancelledFormalExponent("stacked formal s exponents");
            k.ell_pow = ka.ell_pow + kb.ell_pow;
            k.opaques = ka.opaques;
            k.opaques.insert(k.opaques.end(), kb.opaques.begin(), kb.opaques.end());
            std::sort(k.opaques.begin(), k.opaques.end());
            k.gauge_pow = ka.gauge_pow + kb.gauge_pow;
            if (k.gauge_pow != 0) {
                if (ka.gauge_pow != 0 && kb.gauge_pow != 0 && ka.gauge_name != kb.gauge_name)
                    throw std::invalid_argument("mixing distinct gauge prefactors");
                k.gauge_name = ka.gauge_pow != 0 ? ka.gauge_name : kb.gauge_name;
            }
            add_term(e, std::move(k), pa * pb);
        }
    return e;
}

int SymbolAlgebra::stripped_order(const TermKey& k) const {
    int o = k.xi_pow + k.br_pow + k.ell_pow;
    for (const auto& f : k.opaques) o += info(f.name).base_order - f.xi_derivs;
    return o;
}

int SymbolAlgebra::term_order(const TermKey& k) const {
    if (k.s_flag != 0)
        throw UncancelledFormalExponent("term order requested with uncancelled s exponent");
    return stripped_order(k);
}

int SymbolAlgebra::order(const SymbolExpr& e) const {
    if (e.is_zero()) return std::numeric_limits<int>::min();
    int o = std::numeric_limits<int>::min();
    for (const auto& [k, p] : e.terms) o = std::max(o, term_order(k));
    return o;
}

SymbolExpr SymbolAlgebra::truncate(const SymbolExpr& e, int m) const {
    SymbolExpr r = zero();
    for (const auto& [k, p] : e.terms)
        if (stripped_order(k) > m) r.terms.emplace(k, p);
    return r;
}

SymbolExpr SymbolAlgebra::deriv_xi(const SymbolExpr& e) const {
    SymbolExpr r = zero();
    Polynomial s = sym::param("s");
    for (const auto& [k, p] : e.terms) {
        // xi^a factor
        if (k.xi_pow != 0) {
            TermKey nk = k;
            nk.xi_pow -= 1;
            add_term(r, nk, p.scale(GaussianRational(k.xi_pow)));
        }
        // <xi>^(n + f s) factor: d_xi = (n + f s) xi <xi>^(n - 2 + f s)
        if (k.br_pow != 0 || k.s_flag != 0) {
            TermKey nk = k;
            nk.xi_pow += 1;
            nk.br_pow -= 2;
            Polynomial factor = Polynomial(GaussianRational(k.br_pow));
            if (k.s_flag != 0) factor += s.scale(GaussianRational(k.s_flag));
            add_term(r, nk, p * factor);
        }
        // opaque factors
        for (std::size_t idx = 0; idx < k.opaques.size(); ++idx) {
            TermKey nk = k;
            nk.opaques[idx].xi_derivs += 1;
            std::sort(nk.opaques.begin(), nk.opaques.end());
            add_term(r, nk, p);
        }
        // gauge prefactor: d_xi e^{g Phi0} = g (d_xi Phi0) e^{g Phi0}
        if (k.gauge_pow != 0) {
            TermKey nk = k;
            nk.opaques.push_back(OpaqueFactor{k.gauge_name, 1, 0});
            std::sort(nk.opaques.begin(), nk.opaques.end());
            add_term(r, nk, p.scale(GaussianRational(k.gauge_pow)));
        }
    }
    return r;
}

SymbolExpr SymbolAlgebra::x_rule_expansion(const OpaqueFactor& f) {
    const OpaqueInfo& oi = info(f.name);
    if (oi.is_remainder || !oi.has_rule) {
        if (!oi.is_remainder && !oi.has_rule)
            throw MissingXRule("opaque atom " + f.name + " has no x-rule");
        SymbolExpr e = zero();
        TermKey k;
        OpaqueFactor nf = f;
        nf.x_derivs += 1;
        k.opaques.push_back(nf);
        add_term(e, k, Polynomial(1));
        return e;
    }
    // d_x (d_xi^n Phi0) = d_xi^n(weight) * h + d_xi^n R
    SymbolExpr w = oi.weight;
    for (int t = 0; t < f.xi_derivs; ++t) w = deriv_xi(w);
    SymbolExpr e = mul(w, coeff(oi.h));
    std::string rem_name = f.name + ".R";
    if (fresh_remainders_) rem_name += "#" + std::to_string(fresh_counter_++);
    if (!registry_.count(rem_name)) {
        OpaqueInfo ri;
        ri.base_order = oi.remainder_order;
        ri.is_remainder = true;
        registry_[rem_name] = ri;
    }
    TermKey rk;
    rk.opaques.push_back(OpaqueFactor{rem_name, f.xi_derivs, f.x_derivs});
    add_term(e, rk, Polynomial(1));
    return e;
}

SymbolExpr SymbolAlgebra::deriv_x(const SymbolExpr& e) {
    SymbolExpr r = zero();
    for (const auto& [k, p] : e.terms) {
        // coefficient polynomial
        add_term(r, k, p.differentiate());
        // opaque factors
        for (std::size_t idx = 0; idx < k.opaques.size(); ++idx) {
            TermKey rest = k;
            rest.opaques.erase(rest.opaques.begin() + idx);
            SymbolExpr expansion = x_rule_expansion(k.opaques[idx]);
            SymbolExpr rest_expr = zero();
            add_term(rest_expr, rest, p);
            for (const auto& [kk, pp] : mul(rest_expr, expansion).terms) add_term(r, kk, pp);
        }
        // gauge prefactor: d_x e^{g Phi0} = g (d_x Phi0) e^{g Phi0}
        if (k.gauge_pow != 0) {
            SymbolExpr expansion = x_rule_expansion(OpaqueFactor{k.gauge_name, 0, 0});
            SymbolExpr self = zero();
            add_term(self, k, p.scale(GaussianRational(k.gauge_pow)));
            for (const auto& [kk, pp] : mul(self, expansion).terms) add_term(r, kk, pp);
        }
    }
    return r;
}

SymbolExpr SymbolAlgebra::deriv_x(const SymbolExpr& e, int times) {
    SymbolExpr r = e;
    for (int t = 0; t < times; ++t) r = deriv_x(r);
    return r;
}

namespace {
int stripped_expr_order(const SymbolAlgebra& alg, const SymbolExpr& e) {
    int o = std::numeric_limits<int>::min();
    for (const auto& [k, p] : e.terms) o = std::max(o, alg.stripped_order(k));
    return o;
}
}  // namespace

SymbolExpr SymbolAlgebra::compose(const SymbolExpr& a, const SymbolExpr& b, int cutoff) {
    if (a.is_zero() || b.is_zero()) return zero();
    int oa = stripped_expr_order(*this, a);
    int ob = stripped_expr_order(*this, b);
    // first omitted term has order bound oa - jmax + ob <= cutoff
    int jmax = oa + ob - cutoff;
    SymbolExpr acc = zero();
    SymbolExpr da = a;
    SymbolExpr db = b;
    GaussianRational factor(1);
    for (int j = 0; j < jmax; ++j) {
        if (j > 0) {
            da = deriv_xi(da);
            db = deriv_x(db);
            factor = GaussianRational::i_pow(-j) / GaussianRational(Rational::factorial(j));
        }
        if (da.is_zero()) break;
        // d_x^j b computed incrementally in db; d_xi^j a in da
        acc = add(acc, scale(mul(da, db), factor));
    }
    return truncate(acc, cutoff);
}

SymbolExpr SymbolAlgebra::substitute_param(const SymbolExpr& e, const std::string& name,
                                           const Rational& value) const {
    SymbolExpr r = zero();
    Polynomial v = Polynomial(GaussianRational(value));
    for (const auto& [k, p] : e.terms) {
        if (k.s_flag != 0)
            throw UncancelledFormalExponent("cannot substitute into a formal bracket exponent");
        add_term(r, k, p.substitute(name, AtomKind::formal_param, v));
    }
    return r;
}

DiffOperator SymbolAlgebra::sobolev_conjugate(const DiffOperator& P) {
    if (mode_ != SymbolMode::S)
        throw std::invalid_argument("sobolev_conjugate runs in the l=1 bracket calculus");
    SymbolExpr sym = from_diffop(P);
    SymbolExpr lhs = compose(bracket_s(+1), sym, 0);
    SymbolExpr both = compose(lhs, bracket_s(-1), 0);
    // Everything of order > 0 must have its formal exponents cancelled.
    RayOp op;
    for (const auto& [k, p] : both.terms) {
        if (k.s_flag != 0)
            throw UncancelledFormalExponent("cutoff left an uncancelled s exponent");
        if (k.br_pow < 0 || k.br_pow % 2 != 0)
            throw std::logic_error("surviving non-polynomial bracket power");
        // <xi>^{2m} = (xi^2 + 1)^m
        for (int r = 0; r <= k.br_pow / 2; ++r)
            op.add_cell(0, k.xi_pow + 2 * r,
                        p.scale(GaussianRational(Rational::binomial(k.br_pow / 2, r))));
    }
    return DiffOperator::from_spatial(op);
}

std::string SymbolAlgebra::dump(const SymbolExpr& e) const {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, p] : e.terms) {
        if (!first) os << "\n+ ";
        first = false;
        if (k.gauge_pow != 0) {
            os << "exp(" << (k.gauge_pow > 0 ? "" : "-") << k.gauge_name << ")*";
            if (k.gauge_pow != 1 && k.gauge_pow != -1) os << "^" << k.gauge_pow << "*";
        }
        if (k.xi_pow != 0) os << "xi^" << k.xi_pow << "*";
        if (k.br_pow != 0 || k.s_flag != 0) {
            os << "<xi>^(" << k.br_pow;
            if (k.s_flag != 0) os << (k.s_flag > 0 ? "+s" : "-s");
            os << ")*";
        }
        if (k.ell_pow != 0) os << "l^" << k.ell_pow << "*";
        for (const auto& f : k.opaques) {
            os << "D_xi^" << f.xi_derivs << "[";
            for (int t = 0; t < f.x_derivs; ++t) os << "d_x ";
            os << f.name << "]*";
        }
        os << "[" << p.str() << "]";
    }
    return os.str();
}

}  // namespace dispersym
