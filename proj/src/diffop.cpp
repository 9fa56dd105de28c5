#include "dispersym/diffop.hpp"

#include <sstream>
#include <stdexcept>

#include "dispersym/coeffsym.hpp"

namespace dispersym {

RayOp RayOp::mult_op(Polynomial c, int l) {
    RayOp r;
    if (!c.is_zero()) r.cells_[{l, 0}] = std::move(c);
    return r;
}

RayOp RayOp::dx(int j) {
    RayOp r;
    r.cells_[{0, j}] = Polynomial(1);
    return r;
}

RayOp RayOp::xi(int l) {
    RayOp r;
    r.cells_[{l, 0}] = Polynomial(1);
    return r;
}

Polynomial RayOp::cell(int l, int j) const {
    auto it = cells_.find({l, j});
    return it == cells_.end() ? Polynomial() : it->second;
}

int RayOp::max_dx_power() const {
    int m = 0;
    for (const auto& [key, p] : cells_) m = std::max(m, key.second);
    return m;
}

void RayOp::add_cell(int l, int j, const Polynomial& p) {
    if (p.is_zero()) return;
    auto [it, inserted] = cells_.try_emplace({l, j}, p);
    if (!inserted) {
        it->second += p;
        if (it->second.is_zero()) cells_.erase(it);
    }
}

RayOp RayOp::operator-() const {
    RayOp r = *this;
    for (auto& [key, p] : r.cells_) p = -p;
    return r;
}

RayOp& RayOp::operator+=(const RayOp& o) {
    for (const auto& [key, p] : o.cells_) add_cell(key.first, key.second, p);
    return *this;
}

RayOp operator+(const RayOp& a, const RayOp& b) {
    RayOp r = a;
    r += b;
    return r;
}

RayOp operator-(const RayOp& a, const RayOp& b) {
    RayOp r = a;
    r += -b;
    return r;
}

RayOp operator*(const RayOp& a, const RayOp& b) {
    RayOp r;
    for (const auto& [ka, pa] : a.cells_) {
        const auto [la, ja] = ka;
        for (const auto& [kb, pb] : b.cells_) {
            const auto [lb, jb] = kb;
            // D^{ja} o (pb .) = sum_r binom(ja, r) (D^{ja-r} pb) D^r
            for (int rpow = 0; rpow <= ja; ++rpow) {
                int d = ja - rpow;
                Polynomial db = pb.differentiate(d).scale(GaussianRational::i_pow(-d));
                if (db.is_zero()) continue;
                r.add_cell(la + lb, rpow + jb,
                           (pa * db).scale(GaussianRational(Rational::binomial(ja, rpow))));
            }
        }
    }
    return r;
}

RayOp RayOp::scale(const GaussianRational& c) const {
    RayOp r;
    if (c.is_zero()) return r;
    for (const auto& [key, p] : cells_) r.cells_[key] = p.scale(c);
    return r;
}

RayOp RayOp::substitute_dx(const RayOp& replacement) const {
    std::vector<RayOp> powers{RayOp::identity()};
    int jmax = max_dx_power();
    for (int j = 1; j <= jmax; ++j) powers.push_back(powers.back() * replacement);
    RayOp r;
    for (const auto& [key, p] : cells_) {
        const auto [l, j] = key;
        for (const auto& [kr, pr] : powers[j].cells()) {
            // the coefficient p multiplies from the left (it commutes with
            // nothing to its right in powers[j], which is already expanded)
            r.add_cell(l + kr.first, kr.second, p * pr);
        }
    }
    return r;
}

RayOp RayOp::conjugate_exp(const Polynomial& a_deriv, int m) const {
    // e^{-g} D_x e^{g} = D_x + (1/i) g',  g = a/xi^m
    RayOp repl = RayOp::dx(1) + RayOp::mult_op(a_deriv.scale(-GaussianRational::i()), -m);
    return substitute_dx(repl);
}

RayOp RayOp::drop_cells_below_xi(int lmin) const {
    RayOp r;
    for (const auto& [key, p] : cells_)
        if (key.first >= lmin) r.cells_[key] = p;
    return r;
}

std::string RayOp::str() const {
    if (cells_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, p] : cells_) {
        if (!first) os << " + ";
        first = false;
        os << "xi^" << key.first << "*D^" << key.second << "*[" << p.str() << "]";
    }
    return os.str();
}

Polynomial DiffOperator::coeff(int j) const {
    auto it = coeffs.find(j);
    return it == coeffs.end() ? Polynomial() : it->second;
}

RayOp DiffOperator::spatial() const {
    RayOp r = RayOp::dx(k).scale(GaussianRational(principal_sign));
    for (const auto& [j, p] : coeffs) r += RayOp::mult_op(p) * RayOp::dx(j);
    return r;
}

DiffOperator DiffOperator::from_spatial(const RayOp& op, bool has_Dt) {
    DiffOperator L;
    L.has_Dt = has_Dt;
    L.k = op.max_dx_power();
    Polynomial lead = op.cell(0, L.k);
    if (!lead.is_constant() || !lead.constant_term().is_real())
        throw std::invalid_argument("principal coefficient must be a real constant");
    Rational r = lead.constant_term().re();
    if (r == Rational(1))
        L.principal_sign = 1;
    else if (r == Rational(-1))
        L.principal_sign = -1;
    else
        throw std::invalid_argument("principal coefficient must be +-1");
    for (const auto& [key, p] : op.cells()) {
        if (key.first != 0) throw std::invalid_argument("operator carries xi powers");
        if (key.second < L.k) L.coeffs[key.second] = p;
    }
    return L;
}

DiffOperator adjoint(const DiffOperator& L) {
    // (c D^j)* = D^j o (conj c .), expanded in the exact algebra.
    RayOp acc = RayOp::dx(L.k).scale(GaussianRational(L.principal_sign));
    for (const auto& [j, p] : L.coeffs) acc += RayOp::dx(j) * RayOp::mult_op(p.conj());
    return DiffOperator::from_spatial(acc, L.has_Dt);
}

Polynomial exp_conjugation_coefficient(int p, int q, const std::string& name) {
    RayOp conj = RayOp::dx(p).conjugate_exp(sym::full(name, 1), 1);
    return conj.cell(-q, 0);
}

}  // namespace dispersym
