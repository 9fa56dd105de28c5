#include "dispersym/rational.hpp"

#include <numeric>
#include <ostream>
#include <sstream>

namespace dispersym {

namespace {

using i128 = __int128;

std::int64_t checked_narrow(i128 v) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw overflow_error("rational arithmetic overflow");
    return std::int64_t(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Rational Rational::from_i128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rational r;
    r.num_ = checked_narrow(n);
    r.den_ = checked_narrow(d);
    return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
    Rational r = from_i128(i128(n), i128(d));
    num_ = r.num_;
    den_ = r.den_;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = checked_narrow(-i128(num_));
    r.den_ = den_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational::from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational::from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

std::string Rational::str() const {
    std::ostringstream os;
    os << num_ << '/' << den_;
    return os.str();
}

Rational Rational::binomial(int n, int r) {
    if (r < 0 || r > n) return Rational(0);
    i128 acc = 1;
    for (int t = 1; t <= r; ++t) {
        acc = acc * (n - r + t) / t;
        if (acc > i128(INT64_MAX)) throw overflow_error("binomial overflow");
    }
    return Rational(checked_narrow(acc));
}

Rational Rational::factorial(int n) {
    i128 acc = 1;
    for (int t = 2; t <= n; ++t) {
        acc *= t;
        if (acc > i128(INT64_MAX)) throw overflow_error("factorial overflow");
    }
    return Rational(checked_narrow(acc));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

GaussianRational GaussianRational::i_pow(int p) {
    int m = ((p % 4) + 4) % 4;
    switch (m) {
        case 0: return GaussianRational(1);
        case 1: return i();
        case 2: return GaussianRational(-1);
        default: return -i();
    }
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.re_ * b.re_ + b.im_ * b.im_;
    if (n.is_zero()) throw std::domain_error("gaussian rational division by zero");
    GaussianRational num = a * b.conj();
    return {num.re() / n, num.im() / n};
}

std::string GaussianRational::str() const {
    std::ostringstream os;
    os << re_.str();
    if (!im_.is_zero()) {
        if (!im_.is_negative())
            os << '+' << im_.str() << "*i";
        else
            os << '-' << (-im_).str() << "*i";
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

}  // namespace dispersym
