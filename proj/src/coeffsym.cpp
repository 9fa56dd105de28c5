#include "dispersym/coeffsym.hpp"

namespace dispersym {
namespace sym {

Polynomial full(const std::string& name, int deriv) {
    return Polynomial(re_atom(name, deriv)) +
           Polynomial(im_atom(name, deriv)).scale(GaussianRational::i());
}

Polynomial conj(const std::string& name, int deriv) {
    return Polynomial(re_atom(name, deriv)) -
           Polynomial(im_atom(name, deriv)).scale(GaussianRational::i());
}

Polynomial re(const std::string& name, int deriv) { return Polynomial(re_atom(name, deriv)); }

Polynomial im(const std::string& name, int deriv) { return Polynomial(im_atom(name, deriv)); }

Polynomial param(const std::string& name) { return Polynomial(param_atom(name)); }

Polynomial cnst(std::int64_t num, std::int64_t den) {
    return Polynomial(GaussianRational(Rational(num, den)));
}

Polynomial cnst_i(std::int64_t num, std::int64_t den) {
    return Polynomial(GaussianRational(Rational(0), Rational(num, den)));
}

}  // namespace sym
}  // namespace dispersym
