// Numerical probe of the Tarama-type smoothing symbol
//   H(x, xi; l) = int_{-inf}^x chi((y-x)/<xi>_l^q) h(y) dy,
// reporting max_x |H| and max_x |d_x H - h| across a xi sweep together with
// their empirical log-log slopes in <xi>_l.
#ifndef DISPERSYM_TARAMANUM_HPP
#define DISPERSYM_TARAMANUM_HPP

#include <vector>

#include "dispersym/sampled.hpp"

namespace dispersym {

struct TaramaSweepRow {
    double xi = 0.0;
    double bracket = 0.0;  // <xi>_l
    double max_H = 0.0;
    double max_defect = 0.0;
};

struct TaramaSweepReport {
    double q = 0.0;
    double ell = 1.0;
    std::vector<TaramaSweepRow> rows;
    double slope_H = 0.0;       // least-squares slope of log max|H| vs log <xi>
    double slope_defect = 0.0;  // same for the defect
};

// h must be compactly supported inside its grid (SupportOverflow otherwise);
// the x-evaluation window extends 2.5 <xi>_max^q past the support on both
// sides so the decay ramp of H is seen.
TaramaSweepReport tarama_symbol_numeric(const SampledFunction& h, double q, double ell,
                                        const std::vector<double>& xi_grid,
                                        std::size_t x_eval_points = 2048);

}  // namespace dispersym

#endif
