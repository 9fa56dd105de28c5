// Uniform-grid sampled functions with FFT-based spectral calculus on the
// periodic extension. The grid covers [x0, x0 + N dx) and represents a
// 2*pi*R-periodic window, R = N dx / (2 pi); mode j carries frequency j/R.
#ifndef DISPERSYM_SAMPLED_HPP
#define DISPERSYM_SAMPLED_HPP

#include <complex>
#include <stdexcept>
#include <vector>

namespace dispersym {

struct DegenerateGrid : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SupportOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using cvec = std::vector<std::complex<double>>;

// In-place-free FFT wrappers (FFTW behind a plan cache).
cvec fft_forward(const cvec& u);   // u_hat[j] = sum_m u[m] e^{-2 pi i j m / N}
cvec fft_inverse(const cvec& u);   // includes the 1/N factor

struct SampledFunction {
    double x0 = 0.0;
    double dx = 1.0;
    cvec values;

    std::size_t size() const { return values.size(); }
    double x_at(std::size_t m) const { return x0 + dx * double(m); }
    double length() const { return dx * double(values.size()); }
    void validate() const;
};

// frequency of FFT bin j on a grid of N points spanning length L
double fft_frequency(std::size_t j, std::size_t n, double length);

// p-th spectral derivative of the periodic extension
SampledFunction spectral_derivative(const SampledFunction& f, int p);

// cumulative trapezoid integral, H[0] = 0
std::vector<double> cumulative_trapezoid(const std::vector<double>& h, double dx);

// spectrally accurate antiderivative on the periodic window: the mean is
// integrated as a linear ramp, the rest through division by (i xi)
SampledFunction spectral_antiderivative(const SampledFunction& f);

}  // namespace dispersym

#endif
