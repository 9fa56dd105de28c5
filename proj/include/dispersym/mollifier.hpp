// The one cutoff used everywhere: chi in C_c^inf(-2,2) with chi = 1 on
// [-1,1], glued by exp(1 - 1/(1-(|t|-1)^2)) on 1 < |t| < 2. Derivatives up
// to order 4 are available in closed form.
#ifndef DISPERSYM_MOLLIFIER_HPP
#define DISPERSYM_MOLLIFIER_HPP

namespace dispersym {

// n-th derivative of chi at t (n = 0..4).
double chi_plateau(double t, int n = 0);

// bump(center, width): chi((x - center)/width), a plateau of half-width
// `width` with smooth skirts out to 2*width; derivative order n <= 4.
double bump_value(double x, double center, double width, int n = 0);

}  // namespace dispersym

#endif
