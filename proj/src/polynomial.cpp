#include "dispersym/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

namespace dispersym {

std::string Atom::str() const {
    std::ostringstream os;
    switch (kind) {
        case AtomKind::coeff_re: os << "re(" << name << ")"; break;
        case AtomKind::coeff_im: os << "im(" << name << ")"; break;
        case AtomKind::formal_param: os << name; break;
    }
    for (int t = 0; t < deriv; ++t) os << '\'';
    return os.str();
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& [a, p] : factors_) d += p;
    return d;
}

Monomial Monomial::from_powers(std::vector<std::pair<Atom, int>> factors) {
    std::sort(factors.begin(), factors.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    Monomial m;
    for (auto& [a, p] : factors) {
        if (p == 0) continue;
        if (!m.factors_.empty() && m.factors_.back().first == a)
            m.factors_.back().second += p;
        else
            m.factors_.push_back({std::move(a), p});
    }
    return m;
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial m;
    auto it = factors_.begin();
    auto jt = o.factors_.begin();
    while (it != factors_.end() && jt != o.factors_.end()) {
        if (it->first == jt->first) {
            m.factors_.push_back({it->first, it->second + jt->second});
            ++it;
            ++jt;
        } else if (it->first < jt->first) {
            m.factors_.push_back(*it++);
        } else {
            m.factors_.push_back(*jt++);
        }
    }
    m.factors_.insert(m.factors_.end(), it, factors_.end());
    m.factors_.insert(m.factors_.end(), jt, o.factors_.end());
    return m;
}

Monomial Monomial::without_one(std::size_t idx) const {
    Monomial m = *this;
    if (m.factors_[idx].second > 1)
        --m.factors_[idx].second;
    else
        m.factors_.erase(m.factors_.begin() + idx);
    return m;
}

bool operator<(const Monomial& a, const Monomial& b) {
    // Graded lexicographic: total degree first, then factor-wise.
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    return a.factors_ < b.factors_;
}

std::string Monomial::str() const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, p] : factors_) {
        if (!first) os << '*';
        first = false;
        os << a.str();
        if (p > 1) os << '^' << p;
    }
    return os.str();
}

Polynomial::Polynomial(GaussianRational c) {
    if (!c.is_zero()) terms_[Monomial()] = c;
}

Polynomial::Polynomial(const Atom& a) { terms_[Monomial(a)] = GaussianRational(1); }

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

GaussianRational Polynomial::constant_term() const {
    auto it = terms_.find(Monomial());
    return it == terms_.end() ? GaussianRational() : it->second;
}

void Polynomial::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.is_zero())
            it = terms_.erase(it);
        else
            ++it;
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) {
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    r += b;
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    r += -b;
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            GaussianRational c = ca * cb;
            auto [it, inserted] = r.terms_.try_emplace(ma.times(mb), c);
            if (!inserted) {
                it->second += c;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
    return r;
}

Polynomial operator*(const GaussianRational& c, const Polynomial& p) { return p.scale(c); }

Polynomial Polynomial::scale(const GaussianRational& c) const {
    if (c.is_zero()) return Polynomial();
    Polynomial r = *this;
    for (auto& [m, v] : r.terms_) v *= c;
    return r;
}

Polynomial Polynomial::differentiate() const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
        const auto& factors = m.factors();
        for (std::size_t idx = 0; idx < factors.size(); ++idx) {
            const auto& [a, p] = factors[idx];
            if (a.kind == AtomKind::formal_param) continue;
            Atom bumped = a;
            ++bumped.deriv;
            Monomial nm = m.without_one(idx).times(Monomial(bumped));
            GaussianRational nc = c * GaussianRational(p);
            auto [it, inserted] = r.terms_.try_emplace(std::move(nm), nc);
            if (!inserted) {
                it->second += nc;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
    }
    return r;
}

Polynomial Polynomial::differentiate(int times) const {
    Polynomial r = *this;
    for (int t = 0; t < times; ++t) r = r.differentiate();
    return r;
}

Polynomial Polynomial::conj() const {
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_) c = c.conj();
    return r;
}

Polynomial Polynomial::real_part() const {
    Polynomial r;
    for (const auto& [m, c] : terms_)
        if (!c.re().is_zero()) r.terms_[m] = GaussianRational(c.re());
    return r;
}

Polynomial Polynomial::imag_part() const {
    Polynomial r;
    for (const auto& [m, c] : terms_)
        if (!c.im().is_zero()) r.terms_[m] = GaussianRational(c.im());
    return r;
}

Polynomial Polynomial::substitute(const std::string& name, AtomKind kind,
                                  const Polynomial& value) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
        Polynomial term(c);
        for (const auto& [a, p] : m.factors()) {
            Polynomial factor;
            if (a.kind == kind && a.name == name)
                factor = value.differentiate(a.deriv);
            else
                factor = Polynomial(a);
            for (int t = 0; t < p; ++t) term *= factor;
        }
        r += term;
    }
    return r;
}

std::optional<std::pair<int, int>> Polynomial::support_band() const {
    std::optional<std::pair<int, int>> band;
    for (const auto& [m, c] : terms_)
        for (const auto& [a, p] : m.factors()) {
            if (a.kind == AtomKind::formal_param) continue;
            if (a.name.size() < 2 || a.name[0] != 'b') continue;
            bool digits = true;
            for (std::size_t t = 1; t < a.name.size(); ++t)
                if (!std::isdigit(static_cast<unsigned char>(a.name[t]))) digits = false;
            if (!digits) continue;
            int alpha = std::stoi(a.name.substr(1));
            if (!band)
                band = {alpha, alpha};
            else
                band = {std::min(band->first, alpha), std::max(band->second, alpha)};
        }
    return band;
}

std::complex<double> Polynomial::eval(
    const std::function<std::complex<double>(const Atom&)>& lookup) const {
    std::complex<double> acc = 0.0;
    for (const auto& [m, c] : terms_) {
        std::complex<double> v(c.re().to_double(), c.im().to_double());
        for (const auto& [a, p] : m.factors()) {
            std::complex<double> av = lookup(a);
            for (int t = 0; t < p; ++t) v *= av;
        }
        acc += v;
    }
    return acc;
}

GaussianRational Polynomial::eval_exact(
    const std::function<GaussianRational(const Atom&)>& lookup) const {
    GaussianRational acc(0);
    for (const auto& [m, c] : terms_) {
        GaussianRational v = c;
        for (const auto& [a, p] : m.factors()) {
            GaussianRational av = lookup(a);
            for (int t = 0; t < p; ++t) v *= av;
        }
        acc += v;
    }
    return acc;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '(' << c.str() << ')';
        if (!m.is_constant()) os << '*' << m.str();
    }
    return os.str();
}

}  // namespace dispersym
