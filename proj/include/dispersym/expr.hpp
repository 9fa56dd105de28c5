// Coefficient-expression front end: a small analytic calculator over
//   rational/decimal literals, i, x, + - * / ^, sin, cos, exp, tanh,
//   bump(center, width)
// with exact rational literals, symbolic differentiation closed under the
// node set, and complex evaluation at real x.
#ifndef DISPERSYM_EXPR_HPP
#define DISPERSYM_EXPR_HPP

#include <complex>
#include <memory>
#include <string>

#include "dispersym/rational.hpp"

namespace dispersym {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos, const std::string& expected)
        : std::runtime_error(msg + " at position " + std::to_string(pos) +
                             (expected.empty() ? "" : " (expected " + expected + ")")),
          position(pos) {}
    std::size_t position;
};

class CoeffExpr {
  public:
    CoeffExpr() = default;

    static CoeffExpr parse(const std::string& text);

    bool empty() const { return !node_; }
    CoeffExpr derivative() const;
    CoeffExpr derivative(int times) const;
    std::complex<double> eval(double x) const;
    std::string str() const;

    friend bool operator==(const CoeffExpr& a, const CoeffExpr& b);

    struct Node;  // exposed for the implementation file only

  private:
    using NodePtr = std::shared_ptr<const Node>;
    explicit CoeffExpr(NodePtr n) : node_(std::move(n)) {}
    NodePtr node_;
};

}  // namespace dispersym

#endif
