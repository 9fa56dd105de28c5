// Exact rational and Gaussian-rational arithmetic on 64-bit normalized
// fractions. All intermediate products go through 128-bit; overflow of the
// reduced result throws instead of wrapping.
#ifndef DISPERSYM_RATIONAL_HPP
#define DISPERSYM_RATIONAL_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace dispersym {

struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);

    double to_double() const { return double(num_) / double(den_); }
    std::string str() const;

    static Rational binomial(int n, int r);
    static Rational factorial(int n);

  private:
    static Rational from_i128(__int128 n, __int128 d);
    std::int64_t num_;
    std::int64_t den_;  // > 0, gcd(|num|, den) == 1
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// re + i*im with exact rational parts.
class GaussianRational {
  public:
    GaussianRational() = default;
    GaussianRational(Rational re) : re_(re) {}
    GaussianRational(std::int64_t n) : re_(Rational(n)) {}
    GaussianRational(Rational re, Rational im) : re_(re), im_(im) {}

    static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }
    // i^p for any integer p (i^-1 = -i).
    static GaussianRational i_pow(int p);

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    GaussianRational conj() const { return {re_, -im_}; }
    GaussianRational operator-() const { return {-re_, -im_}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
        return !(a == b);
    }

    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

    std::string str() const;  // "a/b" or "a/b+c/d*i" / "a/b-c/d*i"

  private:
    Rational re_;
    Rational im_;
};

std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

}  // namespace dispersym

#endif
