#include "dispersym/hoelder.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "dispersym/gauge.hpp"

namespace dispersym {

namespace {

int worker_count() {
    if (const char* env = std::getenv("DISPERSYM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

}  // namespace

HoelderReport hoelder_ratio(const SampledFunction& h, const Rational& theta) {
    h.validate();
    if (theta.is_negative() || !(theta < Rational(1)))
        throw std::invalid_argument("theta must lie in [0, 1)");
    const std::size_t n = h.size();
    std::vector<double> re(n);
    for (std::size_t m = 0; m < n; ++m) re[m] = h.values[m].real();
    std::vector<double> H = cumulative_trapezoid(re, h.dx);

    const double th = theta.to_double();
    const int buckets = 64;
    struct Best {
        double ratio = 0.0;
        std::size_t a = 0, b = 0;
        std::vector<double> bucket_max;
        Best() : bucket_max(buckets, 0.0) {}
    };

    const int workers = worker_count();
    std::vector<std::future<Best>> futs;
    for (int w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            Best best;
            for (std::size_t a = std::size_t(w); a < n; a += std::size_t(workers)) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    double sep = double(b - a) * h.dx;
                    double ratio = std::fabs(H[b] - H[a]) / std::pow(sep, th);
                    if (ratio > best.ratio) {
                        best.ratio = ratio;
                        best.a = a;
                        best.b = b;
                    }
                    int bucket = std::min(buckets - 1, int(std::log2(double(b - a)) + 1e-12));
                    best.bucket_max[bucket] = std::max(best.bucket_max[bucket], ratio);
                }
            }
            return best;
        }));
    }
    Best best;
    for (auto& f : futs) {
        Best b = f.get();
        if (b.ratio > best.ratio) {
            best.ratio = b.ratio;
            best.a = b.a;
            best.b = b.b;
        }
        for (int t = 0; t < buckets; ++t)
            best.bucket_max[t] = std::max(best.bucket_max[t], b.bucket_max[t]);
    }

    HoelderReport rep;
    rep.theta = theta;
    rep.sup_ratio = best.ratio;
    rep.argmax_x = h.x_at(best.a);
    rep.argmax_y = h.x_at(best.b);
    for (int t = 0; t < buckets; ++t)
        if (best.bucket_max[t] > 0.0)
            rep.profile.push_back({std::pow(2.0, t) * h.dx, best.bucket_max[t]});
    return rep;
}

ConditionCheckReport check_conditions(int k, const std::map<std::string, SampledFunction>& coeffs,
                                      bool gauged,
                                      const std::map<std::size_t, Rational>& theta_overrides) {
    ConditionSet cs;
    if (gauged) {
        cs = corollary_conditions(k);
    } else {
        cs = necessary_conditions(k);
        for (auto& e : cs.entries) e.integrand = letter_names(e.integrand, k);
    }

    // common grid
    if (coeffs.empty()) throw MissingCoefficient("no coefficient samples given");
    const SampledFunction& first = coeffs.begin()->second;
    first.validate();
    for (const auto& [name, f] : coeffs)
        if (f.size() != first.size() || f.dx != first.dx || f.x0 != first.x0)
            throw std::invalid_argument("coefficient grids must agree");

    // which coefficients are exactly real-valued in the samples
    std::map<std::string, bool> is_real;
    for (const auto& [name, f] : coeffs) {
        bool real = true;
        for (const auto& v : f.values) real = real && v.imag() == 0.0;
        is_real[name] = real;
    }

    // derivative cache: name -> [order] -> samples
    std::map<std::string, std::vector<cvec>> derivs;
    auto deriv_values = [&](const std::string& name, int order) -> const cvec& {
        auto it = coeffs.find(name);
        if (it == coeffs.end()) throw MissingCoefficient("missing coefficient " + name);
        auto& slot = derivs[name];
        while (int(slot.size()) <= order) {
            int p = int(slot.size());
            slot.push_back(p == 0 ? it->second.values
                                  : spectral_derivative(it->second, p).values);
        }
        return slot[std::size_t(order)];
    };

    ConditionCheckReport report;
    report.k = k;
    report.gauged = gauged;
    for (std::size_t idx = 0; idx < cs.entries.size(); ++idx) {
        const auto& entry = cs.entries[idx];
        ConditionCheck check;
        check.exponent = entry.exponent;
        if (auto ov = theta_overrides.find(idx); ov != theta_overrides.end())
            check.exponent = ov->second;
        check.integrand = entry.integrand.str();

        // drop im-atoms of exactly real coefficients symbolically first
        Polynomial p = entry.integrand;
        for (const auto& [name, real] : is_real)
            if (real) p = p.substitute(name, AtomKind::coeff_im, Polynomial());
        if (p.is_zero()) {
            check.symbolically_zero = true;
            check.report.theta = check.exponent;
            report.entries.push_back(std::move(check));
            continue;
        }

        SampledFunction values = first;
        for (std::size_t m = 0; m < values.size(); ++m) {
            std::complex<double> v = p.eval([&](const Atom& a) -> std::complex<double> {
                const cvec& d = deriv_values(a.name, a.deriv);
                return a.kind == AtomKind::coeff_re ? d[m].real() : d[m].imag();
            });
            values.values[m] = v.real();  // integrands are real polynomials
        }
        check.report = hoelder_ratio(values, check.exponent);
        report.entries.push_back(std::move(check));
    }
    return report;
}

}  // namespace dispersym
