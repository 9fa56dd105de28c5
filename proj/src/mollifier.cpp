#include "dispersym/mollifier.hpp"

#include <cmath>
#include <stdexcept>

namespace dispersym {

double chi_plateau(double t, int n) {
    if (n < 0 || n > 4) throw std::invalid_argument("chi_plateau supports derivatives 0..4");
    double u = std::fabs(t);
    if (u <= 1.0) return n == 0 ? 1.0 : 0.0;
    if (u >= 2.0) return 0.0;
    double v = u - 1.0;       // in (0,1)
    double w = 1.0 - v * v;   // in (0,1)
    double chi = std::exp(1.0 - 1.0 / w);
    if (n == 0) return chi;
    double w2 = w * w, w3 = w2 * w, w4 = w3 * w, w5 = w4 * w;
    double g1 = -2.0 * v / w2;
    double g2 = -2.0 / w2 - 8.0 * v * v / w3;
    double g3 = -24.0 * v / w3 - 48.0 * v * v * v / w4;
    double g4 = -24.0 / w3 - 288.0 * v * v / w4 - 384.0 * v * v * v * v / w5;
    double d;
    switch (n) {
        case 1: d = g1 * chi; break;
        case 2: d = (g2 + g1 * g1) * chi; break;
        case 3: d = (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * chi; break;
        default:
            d = (g4 + 4.0 * g1 * g3 + 3.0 * g2 * g2 + 6.0 * g1 * g1 * g2 +
                 g1 * g1 * g1 * g1) *
                chi;
    }
    // chi is even, so odd derivatives flip sign with t
    return (t < 0.0 && n % 2 == 1) ? -d : d;
}

double bump_value(double x, double center, double width, int n) {
    double scale = 1.0;
    for (int t = 0; t < n; ++t) scale /= width;
    return chi_plateau((x - center) / width, n) * scale;
}

}  // namespace dispersym
