#include "dispersym/sampled.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace dispersym {

namespace {

std::mutex plan_mutex;

fftw_plan plan_for(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    cvec buf(n);
    fftw_plan p = fftw_plan_dft_1d(int(n), reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()), sign,
                                   FFTW_ESTIMATE);
    cache[key] = p;
    return p;
}

cvec run_fft(const cvec& u, int sign) {
    if (u.empty()) return {};
    cvec out = u;
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        p = plan_for(u.size(), sign);
    }
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

cvec fft_forward(const cvec& u) { return run_fft(u, FFTW_FORWARD); }

cvec fft_inverse(const cvec& u) {
    cvec out = run_fft(u, FFTW_BACKWARD);
    double inv = 1.0 / double(out.size());
    for (auto& v : out) v *= inv;
    return out;
}

void SampledFunction::validate() const {
    if (values.size() < 2) throw DegenerateGrid("sampled function needs at least 2 points");
    if (!(dx > 0.0)) throw DegenerateGrid("grid spacing must be positive");
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DegenerateGrid("sampled values must be finite");
}

double fft_frequency(std::size_t j, std::size_t n, double length) {
    long sj = long(j) <= long(n) / 2 ? long(j) : long(j) - long(n);
    return 2.0 * M_PI * double(sj) / length;
}

SampledFunction spectral_derivative(const SampledFunction& f, int p) {
    SampledFunction g = f;
    cvec hat = fft_forward(f.values);
    const std::size_t n = hat.size();
    const double L = f.length();
    for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> ixi(0.0, fft_frequency(j, n, L));
        std::complex<double> mult = 1.0;
        for (int t = 0; t < p; ++t) mult *= ixi;
        // the unpaired Nyquist mode of even-order derivatives stays real
        hat[j] *= mult;
    }
    if (n % 2 == 0 && p % 2 == 1) hat[n / 2] = 0.0;
    g.values = fft_inverse(hat);
    return g;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& h, double dx) {
    std::vector<double> H(h.size(), 0.0);
    for (std::size_t m = 1; m < h.size(); ++m)
        H[m] = H[m - 1] + 0.5 * dx * (h[m - 1] + h[m]);
    return H;
}

SampledFunction spectral_antiderivative(const SampledFunction& f) {
    SampledFunction g = f;
    cvec hat = fft_forward(f.values);
    const std::size_t n = hat.size();
    const double L = f.length();
    std::complex<double> mean = hat[0] / double(n);
    hat[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j)
        hat[j] /= std::complex<double>(0.0, fft_frequency(j, n, L));
    if (n % 2 == 0) hat[n / 2] = 0.0;
    g.values = fft_inverse(hat);
    for (std::size_t m = 0; m < n; ++m) g.values[m] += mean * (g.x_at(m) - f.x0);
    return g;
}

}  // namespace dispersym
