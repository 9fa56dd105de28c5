#include "dispersym/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "dispersym/mollifier.hpp"

namespace dispersym {

struct CoeffExpr::Node {
    enum class Kind { number, var_x, add, sub, mul, div, pow, neg, sin, cos, exp, tanh, bump };
    Kind kind;
    GaussianRational value;       // number
    int ipow = 0;                 // pow exponent; bump derivative order
    Rational center, width;       // bump parameters
    NodePtr a, b;

    Node(Kind k) : kind(k) {}
};

// --- construction helpers ---------------------------------------------------

namespace detail {

using NodePtr = std::shared_ptr<const CoeffExpr::Node>;
using Kind = CoeffExpr::Node::Kind;

NodePtr make(Kind k) { return std::make_shared<CoeffExpr::Node>(k); }

NodePtr number(const GaussianRational& v) {
    auto n = std::make_shared<CoeffExpr::Node>(Kind::number);
    n->value = v;
    return n;
}

NodePtr unary(Kind k, NodePtr a) {
    auto n = std::make_shared<CoeffExpr::Node>(k);
    n->a = std::move(a);
    return n;
}

NodePtr binary(Kind k, NodePtr a, NodePtr b) {
    // constant folding keeps printed literals like 1/2 or 3/4*i reparsing to
    // the same node
    if (a->kind == Kind::number && b->kind == Kind::number) {
        switch (k) {
            case Kind::add: return number(a->value + b->value);
            case Kind::sub: return number(a->value - b->value);
            case Kind::mul: return number(a->value * b->value);
            case Kind::div: return number(a->value / b->value);
            default: break;
        }
    }
    auto n = std::make_shared<CoeffExpr::Node>(k);
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr power(NodePtr a, int e) {
    auto n = std::make_shared<CoeffExpr::Node>(Kind::pow);
    n->a = std::move(a);
    n->ipow = e;
    return n;
}

NodePtr bump(Rational c, Rational w, int order) {
    auto n = std::make_shared<CoeffExpr::Node>(Kind::bump);
    n->center = c;
    n->width = w;
    n->ipow = order;
    return n;
}

bool is_zero(const NodePtr& n) {
    return n->kind == Kind::number && n->value.is_zero();
}

// --- parser ------------------------------------------------------------------

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const std::string& what) {
        if (!consume(c)) throw ParseError("unexpected input", pos, what);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (true) {
            if (consume('+'))
                lhs = binary(Kind::add, lhs, parse_term());
            else if (consume('-'))
                lhs = binary(Kind::sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        bool negate = false;
        while (consume('-')) negate = !negate;
        NodePtr lhs = parse_factor();
        while (true) {
            if (consume('*'))
                lhs = binary(Kind::mul, lhs, parse_factor());
            else if (consume('/'))
                lhs = binary(Kind::div, lhs, parse_factor());
            else
                break;
        }
        return negate ? binary(Kind::sub, number(GaussianRational(0)), lhs) : lhs;
    }

    NodePtr parse_factor() {
        NodePtr base = parse_base();
        if (consume('^')) {
            bool neg = consume('-');
            std::size_t start = pos;
            long e = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                e = e * 10 + (text[pos++] - '0');
            if (pos == start) throw ParseError("bad exponent", pos, "integer");
            return power(base, int(neg ? -e : e));
        }
        return base;
    }

    NodePtr parse_base() {
        skip_ws();
        if (pos >= text.size())
            throw ParseError("unexpected end of input", pos, "number, i, x, function or (");
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (c == '(') {
            ++pos;
            NodePtr e = parse_expr();
            expect(')', ")");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        throw ParseError("unexpected character", pos, "number, i, x, function or (");
    }

    NodePtr parse_number() {
        std::size_t start = pos;
        std::int64_t intpart = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            intpart = intpart * 10 + (text[pos++] - '0');
        std::int64_t num = intpart, den = 1;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                num = num * 10 + (text[pos++] - '0');
                den *= 10;
            }
        }
        if (pos == start) throw ParseError("bad number", pos, "digits");
        Rational r(num, den);
        // juxtaposed imaginary literal: 2i
        if (pos < text.size() && text[pos] == 'i' &&
            (pos + 1 == text.size() ||
             !std::isalnum(static_cast<unsigned char>(text[pos + 1])))) {
            ++pos;
            return number(GaussianRational(Rational(0), r));
        }
        return number(GaussianRational(r));
    }

    Rational parse_rational_arg() {
        bool neg = consume('-');
        NodePtr n = parse_number();
        if (n->kind != Kind::number || !n->value.is_real())
            throw ParseError("bump arguments must be real numbers", pos, "number");
        Rational r = n->value.re();
        if (consume('/')) {
            NodePtr d = parse_number();
            if (d->kind != Kind::number || !d->value.is_real())
                throw ParseError("bump arguments must be real numbers", pos, "number");
            r /= d->value.re();
        }
        return neg ? -r : r;
    }

    NodePtr parse_name() {
        std::size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string name = text.substr(start, pos - start);
        if (name == "i") return number(GaussianRational::i());
        if (name == "x") return make(Kind::var_x);
        Kind k;
        if (name == "sin")
            k = Kind::sin;
        else if (name == "cos")
            k = Kind::cos;
        else if (name == "exp")
            k = Kind::exp;
        else if (name == "tanh")
            k = Kind::tanh;
        else if (name == "bump") {
            expect('(', "(");
            Rational c = parse_rational_arg();
            expect(',', ",");
            Rational w = parse_rational_arg();
            expect(')', ")");
            if (!(Rational(0) < w)) throw ParseError("bump width must be positive", pos, "");
            return bump(c, w, 0);
        } else {
            throw ParseError("unknown name '" + name + "'", start, "i, x, sin, cos, exp, tanh, bump");
        }
        expect('(', "(");
        NodePtr arg = parse_expr();
        expect(')', ")");
        return unary(k, arg);
    }
};

NodePtr differentiate(const NodePtr& n) {
    switch (n->kind) {
        case Kind::number: return number(GaussianRational(0));
        case Kind::var_x: return number(GaussianRational(1));
        case Kind::add: return binary(Kind::add, differentiate(n->a), differentiate(n->b));
        case Kind::sub: return binary(Kind::sub, differentiate(n->a), differentiate(n->b));
        case Kind::neg: return unary(Kind::neg, differentiate(n->a));
        case Kind::mul:
            return binary(Kind::add, binary(Kind::mul, differentiate(n->a), n->b),
                          binary(Kind::mul, n->a, differentiate(n->b)));
        case Kind::div:
            // (a/b)' = a'/b - a b'/b^2
            return binary(Kind::sub, binary(Kind::div, differentiate(n->a), n->b),
                          binary(Kind::div, binary(Kind::mul, n->a, differentiate(n->b)),
                                 power(n->b, 2)));
        case Kind::pow: {
            if (n->ipow == 0) return number(GaussianRational(0));
            NodePtr inner = power(n->a, n->ipow - 1);
            NodePtr scaled = binary(Kind::mul, number(GaussianRational(n->ipow)), inner);
            return binary(Kind::mul, scaled, differentiate(n->a));
        }
        case Kind::sin:
            return binary(Kind::mul, unary(Kind::cos, n->a), differentiate(n->a));
        case Kind::cos:
            return unary(Kind::neg,
                         binary(Kind::mul, unary(Kind::sin, n->a), differentiate(n->a)));
        case Kind::exp:
            return binary(Kind::mul, unary(Kind::exp, n->a), differentiate(n->a));
        case Kind::tanh: {
            // (tanh f)' = (1 - tanh^2 f) f'
            NodePtr t = unary(Kind::tanh, n->a);
            NodePtr one = number(GaussianRational(1));
            return binary(Kind::mul, binary(Kind::sub, one, power(t, 2)), differentiate(n->a));
        }
        case Kind::bump: return bump(n->center, n->width, n->ipow + 1);
    }
    throw std::logic_error("unreachable");
}

std::complex<double> evaluate(const NodePtr& n, double x) {
    using C = std::complex<double>;
    switch (n->kind) {
        case Kind::number: return C(n->value.re().to_double(), n->value.im().to_double());
        case Kind::var_x: return C(x);
        case Kind::add: return evaluate(n->a, x) + evaluate(n->b, x);
        case Kind::sub: return evaluate(n->a, x) - evaluate(n->b, x);
        case Kind::neg: return -evaluate(n->a, x);
        case Kind::mul: return evaluate(n->a, x) * evaluate(n->b, x);
        case Kind::div: return evaluate(n->a, x) / evaluate(n->b, x);
        case Kind::pow: {
            C base = evaluate(n->a, x);
            C acc(1.0);
            int e = n->ipow < 0 ? -n->ipow : n->ipow;
            for (int t = 0; t < e; ++t) acc *= base;
            return n->ipow < 0 ? C(1.0) / acc : acc;
        }
        case Kind::sin: return std::sin(evaluate(n->a, x));
        case Kind::cos: return std::cos(evaluate(n->a, x));
        case Kind::exp: return std::exp(evaluate(n->a, x));
        case Kind::tanh: return std::tanh(evaluate(n->a, x));
        case Kind::bump:
            return C(bump_value(x, n->center.to_double(), n->width.to_double(), n->ipow));
    }
    throw std::logic_error("unreachable");
}

void print(const NodePtr& n, std::ostream& os) {
    switch (n->kind) {
        case Kind::number: {
            os << '(' << n->value.str() << ')';
            return;
        }
        case Kind::var_x: os << 'x'; return;
        case Kind::add:
            os << '(';
            print(n->a, os);
            os << '+';
            print(n->b, os);
            os << ')';
            return;
        case Kind::sub:
            os << '(';
            print(n->a, os);
            os << '-';
            print(n->b, os);
            os << ')';
            return;
        case Kind::neg:
            os << "(0-";
            print(n->a, os);
            os << ')';
            return;
        case Kind::mul:
            os << '(';
            print(n->a, os);
            os << '*';
            print(n->b, os);
            os << ')';
            return;
        case Kind::div:
            os << '(';
            print(n->a, os);
            os << '/';
            print(n->b, os);
            os << ')';
            return;
        case Kind::pow:
            os << '(';
            print(n->a, os);
            os << ')' << '^' << n->ipow;
            return;
        case Kind::sin:
        case Kind::cos:
        case Kind::exp:
        case Kind::tanh: {
            const char* names[] = {"sin", "cos", "exp", "tanh"};
            os << names[int(n->kind) - int(Kind::sin)] << '(';
            print(n->a, os);
            os << ')';
            return;
        }
        case Kind::bump:
            os << "bump(" << n->center.str() << ',' << n->width.str() << ')';
            // derivatives of bump have no source syntax; the primes mark the
            // order in diagnostic output only
            for (int t = 0; t < n->ipow; ++t) os << "'";
            return;
    }
}

bool equal(const NodePtr& a, const NodePtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::number: return a->value == b->value;
        case Kind::var_x: return true;
        case Kind::pow: return a->ipow == b->ipow && equal(a->a, b->a);
        case Kind::bump:
            return a->center == b->center && a->width == b->width && a->ipow == b->ipow;
        case Kind::neg:
        case Kind::sin:
        case Kind::cos:
        case Kind::exp:
        case Kind::tanh: return equal(a->a, b->a);
        default: return equal(a->a, b->a) && equal(a->b, b->b);
    }
}

}  // namespace detail

CoeffExpr CoeffExpr::parse(const std::string& text) {
    if (text.empty()) throw ParseError("empty expression", 0, "expression");
    detail::Parser p(text);
    detail::NodePtr n = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("trailing input", p.pos, "end of input");
    return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::derivative() const {
    if (!node_) throw std::logic_error("derivative of empty expression");
    return CoeffExpr(detail::differentiate(node_));
}

CoeffExpr CoeffExpr::derivative(int times) const {
    CoeffExpr e = *this;
    for (int t = 0; t < times; ++t) e = e.derivative();
    return e;
}

std::complex<double> CoeffExpr::eval(double x) const {
    if (!node_) return 0.0;
    return detail::evaluate(node_, x);
}

std::string CoeffExpr::str() const {
    if (!node_) return "0";
    std::ostringstream os;
    detail::print(node_, os);
    return os.str();
}

bool operator==(const CoeffExpr& a, const CoeffExpr& b) {
    if (!a.node_ || !b.node_) return !a.node_ && !b.node_;
    return detail::equal(a.node_, b.node_);
}

}  // namespace dispersym
