// Numerical evaluation of the Hoelder-type integral conditions
//   |int_x^y f| <= C |x-y|^theta
// on sampled coefficient data, and of the condition sets produced by the
// symbolic modules.
#ifndef DISPERSYM_HOELDER_HPP
#define DISPERSYM_HOELDER_HPP

#include <map>
#include <string>

#include "dispersym/sampled.hpp"
#include "dispersym/tarama.hpp"

namespace dispersym {

struct MissingCoefficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HoelderReport {
    Rational theta;
    double sup_ratio = 0.0;
    double argmax_x = 0.0;
    double argmax_y = 0.0;
    // max ratio per dyadic separation bucket [2^b dx, 2^{b+1} dx)
    std::vector<std::pair<double, double>> profile;  // (separation, max ratio)
};

// sup over grid pairs of |H(y) - H(x)| / |y-x|^theta with H the cumulative
// trapezoid integral of h. theta in [0,1).
HoelderReport hoelder_ratio(const SampledFunction& h, const Rational& theta);

struct ConditionCheck {
    Rational exponent;
    std::string integrand;  // dumped polynomial
    bool symbolically_zero = false;
    HoelderReport report;
};

struct ConditionCheckReport {
    int k = 0;
    bool gauged = false;
    std::vector<ConditionCheck> entries;
};

// Evaluates each condition integrand pointwise on the sampled coefficients
// (spectral derivatives on the periodic window) and runs hoelder_ratio.
// Coefficient names are the letter names (b, c, d, e; plus a when gauged).
// theta_overrides replaces the exponent of selected entries (0-based).
ConditionCheckReport check_conditions(int k, const std::map<std::string, SampledFunction>& coeffs,
                                      bool gauged = false,
                                      const std::map<std::size_t, Rational>& theta_overrides = {});

}  // namespace dispersym

#endif
