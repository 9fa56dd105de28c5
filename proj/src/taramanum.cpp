#include "dispersym/taramanum.hpp"

#include <algorithm>
#include <cmath>

#include "dispersym/mollifier.hpp"

namespace dispersym {

TaramaSweepReport tarama_symbol_numeric(const SampledFunction& h, double q, double ell,
                                        const std::vector<double>& xi_grid,
                                        std::size_t x_eval_points) {
    h.validate();
    if (q <= 1.0) throw std::invalid_argument("q must exceed 1");
    if (ell < 1.0) throw std::invalid_argument("l must be at least 1");
    if (xi_grid.empty()) throw std::invalid_argument("empty xi grid");

    const std::size_t n = h.size();
    double edge = 0.0;
    for (std::size_t m : {std::size_t(0), std::size_t(1), n - 2, n - 1})
        edge = std::max(edge, std::abs(h.values[m]));
    if (edge > 1e-12) throw SupportOverflow("h must vanish at the grid edges");

    TaramaSweepReport rep;
    rep.q = q;
    rep.ell = ell;

    double smax = 0.0;
    for (double xi : xi_grid) smax = std::max(smax, std::pow(std::hypot(xi, ell), q));

    const double x_lo = h.x0 - 2.5 * smax;
    const double x_hi = h.x0 + h.length() + 2.5 * smax;
    const double dxe = (x_hi - x_lo) / double(x_eval_points - 1);

    for (double xi : xi_grid) {
        const double br = std::hypot(xi, ell);
        const double s = std::pow(br, q);
        TaramaSweepRow row;
        row.xi = xi;
        row.bracket = br;
        for (std::size_t e = 0; e < x_eval_points; ++e) {
            const double x = x_lo + dxe * double(e);
            double H = 0.0, corr = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                const double y = h.x_at(m);
                if (y > x) break;  // integral runs over y <= x
                const double w = (m == 0 || m + 1 == n) ? 0.5 * h.dx : h.dx;
                const double hv = h.values[m].real();
                H += w * chi_plateau((y - x) / s) * hv;
                corr += w * chi_plateau((y - x) / s, 1) * hv;
            }
            // d_x H = h(x) - (1/s) int chi'((y-x)/s) h; the defect drops h(x)
            double defect = -corr / s;
            row.max_H = std::max(row.max_H, std::abs(H));
            row.max_defect = std::max(row.max_defect, std::abs(defect));
        }
        rep.rows.push_back(row);
    }

    auto slope = [&](auto getter) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (const auto& r : rep.rows) {
            double v = getter(r);
            if (v <= 0.0) continue;
            double lx = std::log(r.bracket), ly = std::log(v);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++cnt;
        }
        if (cnt < 2) return 0.0;
        return (double(cnt) * sxy - sx * sy) / (double(cnt) * sxx - sx * sx);
    };
    rep.slope_H = slope([](const TaramaSweepRow& r) { return r.max_H; });
    rep.slope_defect = slope([](const TaramaSweepRow& r) { return r.max_defect; });
    return rep;
}

}  // namespace dispersym
