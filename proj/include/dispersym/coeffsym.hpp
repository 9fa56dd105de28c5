// Builders turning the mixed b / conj(b) / Re(b) / Im(b) coefficient symbols
// into canonical polynomials over re/im atoms:
//   b = re(b) + i*im(b),  conj(b) = re(b) - i*im(b).
#ifndef DISPERSYM_COEFFSYM_HPP
#define DISPERSYM_COEFFSYM_HPP

#include "dispersym/polynomial.hpp"

namespace dispersym {
namespace sym {

// The beta-th derivative of the full complex coefficient `name`.
Polynomial full(const std::string& name, int deriv = 0);
// The beta-th derivative of its conjugate.
Polynomial conj(const std::string& name, int deriv = 0);
// Re / Im of the beta-th derivative (both real-valued).
Polynomial re(const std::string& name, int deriv = 0);
Polynomial im(const std::string& name, int deriv = 0);
// A formal real parameter (the Sobolev index s of the self-adjoint checks).
Polynomial param(const std::string& name);

Polynomial cnst(std::int64_t num, std::int64_t den = 1);
Polynomial cnst_i(std::int64_t num, std::int64_t den = 1);  // (num/den)*i

// Re / Im of an already-canonical polynomial expression.
inline Polynomial re_of(const Polynomial& p) { return p.real_part(); }
inline Polynomial im_of(const Polynomial& p) { return p.imag_part(); }

}  // namespace sym

// Idempotent by construction: applying the canonicalization map to an
// already-canonical polynomial is the identity. Exposed for tests.
inline const Polynomial& canonicalize_complex(const Polynomial& p) { return p; }

}  // namespace dispersym

#endif
