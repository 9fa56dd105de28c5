#include "dispersym/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "dispersym/mollifier.hpp"
#include "dispersym/coeffsym.hpp"
#include "dispersym/tarama.hpp"

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

double l2_norm(const cvec& u, double dx) {
    double acc = 0.0;
    for (const auto& v : u) acc += std::norm(v);
    return std::sqrt(acc * dx);
}

// Variable part V u = i sum_j b_j(x) D^j u, evaluated pseudospectrally.
struct VariablePart {
    const SimConfig& config;
    std::map<int, cvec> arrays;          // b_j samples
    std::vector<double> xi;              // mode frequencies
    std::vector<bool> dealias_mask;

    explicit VariablePart(const SimConfig& c) : config(c), arrays(c.coefficient_arrays()) {
        const std::size_t n = c.N;
        xi.resize(n);
        dealias_mask.assign(n, true);
        for (std::size_t j = 0; j < n; ++j) {
            xi[j] = fft_frequency(j, n, 2.0 * M_PI * c.R);
            if (c.dealias && std::abs(xi[j]) > (2.0 / 3.0) * c.xi_max()) dealias_mask[j] = false;
        }
    }

    bool empty() const { return arrays.empty(); }

    double max_magnitude() const {
        double acc = 0.0;
        for (const auto& [j, b] : arrays) {
            double mb = 0.0;
            for (const auto& v : b) mb = std::max(mb, std::abs(v));
            acc += mb * std::pow(config.xi_max(), j);
        }
        return acc;
    }

    // physical-space application
    cvec apply(const cvec& u) const {
        const std::size_t n = u.size();
        cvec out(n, 0.0);
        cvec hat = fft_forward(u);
        for (const auto& [j, b] : arrays) {
            cvec dj = hat;
            for (std::size_t t = 0; t < n; ++t) {
                double m = 1.0;
                for (int p = 0; p < j; ++p) m *= xi[t];
                dj[t] *= m;
                if (!dealias_mask[t]) dj[t] = 0.0;
            }
            cvec phys = fft_inverse(dj);
            for (std::size_t t = 0; t < n; ++t) out[t] += b[t] * phys[t];
        }
        for (auto& v : out) v *= std::complex<double>(0.0, 1.0);
        if (config.dealias) {
            cvec ohat = fft_forward(out);
            for (std::size_t t = 0; t < n; ++t)
                if (!dealias_mask[t]) ohat[t] = 0.0;
            out = fft_inverse(ohat);
        }
        return out;
    }

    // spectral-space application: F(V(IFFT(hat)))
    cvec apply_hat(const cvec& hat) const { return fft_forward(apply(fft_inverse(hat))); }
};

}  // namespace

void SimConfig::validate() const {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (time_direction != 1 && time_direction != -1)
        throw std::invalid_argument("time_direction must be +-1");
    if (N < 16 || (N & (N - 1)) != 0) throw std::invalid_argument("N must be a power of two >= 16");
    if (!(R > 0.0) || !(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("R, dt, T must be positive");
    for (const auto& [j, e] : coeffs)
        if (j < 0 || j >= k) throw std::invalid_argument("coefficient order outside 0..k-1");
    for (const auto& [j, s] : coeff_samples) {
        if (j < 0 || j >= k) throw std::invalid_argument("coefficient order outside 0..k-1");
        if (s.size() != N) throw std::invalid_argument("coefficient samples must match the grid");
    }
}

std::map<int, cvec> SimConfig::coefficient_arrays() const {
    std::map<int, cvec> arrays;
    for (const auto& [j, e] : coeffs) {
        cvec b(N);
        for (std::size_t m = 0; m < N; ++m) b[m] = e.eval(x_at(m));
        arrays[j] = std::move(b);
    }
    for (const auto& [j, s] : coeff_samples) {
        auto [it, inserted] = arrays.try_emplace(j, s);
        if (!inserted)
            for (std::size_t m = 0; m < N; ++m) it->second[m] += s[m];
    }
    return arrays;
}

std::complex<double> multiplier_oracle(int k, const std::map<int, std::complex<double>>& constants,
                                       double xi, double t) {
    std::complex<double> symbol = std::pow(xi, k);
    for (const auto& [j, c] : constants) symbol += c * std::pow(xi, j);
    return std::exp(std::complex<double>(0.0, t) * symbol);
}

SimResult evolve(const SimConfig& config, const cvec& u0) {
    config.validate();
    if (u0.size() != config.N) throw std::invalid_argument("initial data must match the grid");
    VariablePart V(config);

    if (!V.empty()) {
        double bound = config.stability_constant / V.max_magnitude();
        if (config.dt > bound)
            throw StabilityViolation("dt " + std::to_string(config.dt) + " exceeds the stability bound " +
                                     std::to_string(bound));
    }

    const std::size_t n = config.N;
    const double dx = config.dx();
    const std::size_t steps = std::size_t(std::llround(config.T / config.dt));
    const double h = config.time_direction * config.T / double(steps ? steps : 1);

    // principal multipliers
    cvec e_full(n), e_half(n);
    std::vector<double> xik(n);
    for (std::size_t j = 0; j < n; ++j) {
        double xi = fft_frequency(j, n, 2.0 * M_PI * config.R);
        xik[j] = std::pow(xi, config.k);
        e_full[j] = std::exp(std::complex<double>(0.0, xik[j] * h));
        e_half[j] = std::exp(std::complex<double>(0.0, xik[j] * h * 0.5));
    }

    SimResult result;
    const double norm0 = l2_norm(u0, dx);
    if (norm0 == 0.0) throw std::invalid_argument("zero initial data");
    auto record = [&](double t, const cvec& hat) {
        result.times.push_back(t);
        cvec u = fft_inverse(hat);
        result.l2_norms.push_back(l2_norm(u, dx));
        if (config.hs_norm_s) {
            double s = *config.hs_norm_s;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double xi = fft_frequency(j, n, 2.0 * M_PI * config.R);
                acc += std::pow(1.0 + xi * xi, s) * std::norm(hat[j]) / double(n * n);
            }
            result.hs_norms.push_back(std::sqrt(acc * 2.0 * M_PI * config.R));
        }
        if (result.l2_norms.back() > 1e10 * norm0)
            throw BlowupDetected("norm exceeded the overflow guard");
    };

    cvec hat = fft_forward(u0);
    result.initial_spectrum = hat;
    record(0.0, hat);

    for (std::size_t step = 0; step < steps; ++step) {
        if (config.integrator == Integrator::rk4_if) {
            // RK4 on w = e^{-i xi^k (t-t0)} u_hat, t0 the step start
            auto nl = [&](const cvec& w, int half_units) -> cvec {
                // half_units: 0, 1 (tau = h/2), 2 (tau = h)
                cvec shifted = w;
                if (half_units == 1)
                    for (std::size_t j = 0; j < n; ++j) shifted[j] *= e_half[j];
                else if (half_units == 2)
                    for (std::size_t j = 0; j < n; ++j) shifted[j] *= e_full[j];
                cvec vh = V.empty() ? cvec(n, 0.0) : V.apply_hat(shifted);
                if (half_units == 1)
                    for (std::size_t j = 0; j < n; ++j) vh[j] /= e_half[j];
                else if (half_units == 2)
                    for (std::size_t j = 0; j < n; ++j) vh[j] /= e_full[j];
                return vh;
            };
            cvec w = hat;
            cvec k1 = nl(w, 0);
            cvec w2(n), w3(n), w4(n);
            for (std::size_t j = 0; j < n; ++j) w2[j] = w[j] + 0.5 * h * k1[j];
            cvec k2 = nl(w2, 1);
            for (std::size_t j = 0; j < n; ++j) w3[j] = w[j] + 0.5 * h * k2[j];
            cvec k3 = nl(w3, 1);
            for (std::size_t j = 0; j < n; ++j) w4[j] = w[j] + h * k3[j];
            cvec k4 = nl(w4, 2);
            for (std::size_t j = 0; j < n; ++j)
                hat[j] = e_full[j] *
                         (w[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        } else {
            // Strang: half principal, Cayley midpoint for V, half principal
            for (std::size_t j = 0; j < n; ++j) hat[j] *= e_half[j];
            if (!V.empty()) {
                // Cayley midpoint for u_t = V u: (I - (h/2)V) u+ = (I + (h/2)V) u,
                // solved by fixed point; time-symmetric and norm-preserving
                // for self-adjoint generators
                cvec u = fft_inverse(hat);
                cvec vu = V.apply(u);
                cvec rhs(n);
                for (std::size_t j = 0; j < n; ++j) rhs[j] = u[j] + 0.5 * h * vu[j];
                cvec up = rhs;
                for (int it = 0; it < 400; ++it) {
                    cvec vup = V.apply(up);
                    cvec next(n);
                    double delta = 0.0, scale = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        next[j] = rhs[j] + 0.5 * h * vup[j];
                        delta += std::norm(next[j] - up[j]);
                        scale += std::norm(next[j]);
                    }
                    up.swap(next);
                    if (delta <= 1e-26 * std::max(scale, 1e-300)) break;
                    if (it == 399)
                        throw StabilityViolation("Cayley iteration failed to converge; reduce dt");
                }
                hat = fft_forward(up);
            }
            for (std::size_t j = 0; j < n; ++j) hat[j] *= e_half[j];
        }
        std::size_t done = step + 1;
        if (done % config.record_every == 0 || done == steps) record(double(done) * h, hat);
    }

    result.final_spectrum = hat;
    result.final_state = fft_inverse(hat);
    result.growth_factor = result.l2_norms.back() / result.l2_norms.front();
    return result;
}

cvec wavepacket(const SimConfig& config, const WavepacketSpec& spec, const cvec* psi) {
    const std::size_t n = config.N;
    const double width = std::pow(spec.xi0, spec.m);
    const double window = 2.0 * M_PI * config.R;
    if (2.0 * width > 0.9 * window)
        throw SupportOverflow("wavepacket support does not fit in the window");
    cvec v(n);
    for (std::size_t m = 0; m < n; ++m) {
        double x = config.x_at(m);
        // wrap the distance into [-window/2, window/2)
        double d = std::remainder(x - spec.x1, window);
        // profile in C_c^inf(-1,1): plateau scaled by 2
        double f = spec.amplitude * chi_plateau(2.0 * d / width);
        std::complex<double> phase(0.0, spec.xi0 * x);
        if (psi) phase += (*psi)[m];
        v[m] = f == 0.0 ? 0.0 : std::exp(phase) * f;
    }
    if (spec.normalize) {
        double nn = l2_norm(v, config.dx());
        if (nn > 0.0)
            for (auto& z : v) z /= nn;
    }
    return v;
}

std::vector<SweepRow> frequency_sweep(const SimConfig& config, const std::vector<double>& xis,
                                      int m) {
    std::vector<SweepRow> rows(xis.size());
    const int workers = std::min<int>(worker_count(), int(xis.size()));
    std::vector<std::future<void>> futs;
    for (int w = 0; w < workers; ++w)
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t idx = std::size_t(w); idx < xis.size(); idx += std::size_t(workers)) {
                WavepacketSpec spec;
                spec.xi0 = xis[idx];
                spec.x1 = M_PI * config.R;
                spec.m = m;
                cvec u0 = wavepacket(config, spec);
                SimResult res = evolve(config, u0);
                rows[idx] = {xis[idx], res.growth_factor};
            }
        }));
    for (auto& f : futs) f.get();
    return rows;
}

namespace {

// psi_{k-2-m}(xi; x) = -sum_{q=1}^m (i / (k xi^q)) int_0^x P_{k-1-q;k-1-q,0}
cvec duality_phase(const SimConfig& config, int m, double xi,
                   const std::map<int, cvec>& arrays) {
    const std::size_t n = config.N;
    cvec psi(n, 0.0);
    if (m == 0) return psi;
    // derivative arrays per coefficient
    std::map<std::string, std::vector<cvec>> derivs;
    auto deriv_values = [&](const std::string& name, int order) -> const cvec& {
        int j = std::stoi(name.substr(1));
        auto& slot = derivs[name];
        while (int(slot.size()) <= order) {
            int p = int(slot.size());
            SampledFunction f{0.0, config.dx(), {}};
            auto it = arrays.find(j);
            f.values = it == arrays.end() ? cvec(n, 0.0) : it->second;
            slot.push_back(p == 0 ? f.values : spectral_derivative(f, p).values);
        }
        return slot[std::size_t(order)];
    };

    RecursionState state = RecursionState::base_case(config.k);
    for (int q = 1; q <= m; ++q) {
        while (state.level() < q - 1) state = state.advance_pruned();
        Polynomial P = state.cell(config.k - 1 - q, 0);
        SampledFunction integrand{0.0, config.dx(), cvec(n, 0.0)};
        for (std::size_t t = 0; t < n; ++t)
            integrand.values[t] = P.eval([&](const Atom& a) -> std::complex<double> {
                const cvec& d = deriv_values(a.name, a.deriv);
                return a.kind == AtomKind::coeff_re ? d[t].real() : d[t].imag();
            });
        SampledFunction anti = spectral_antiderivative(integrand);
        std::complex<double> factor =
            std::complex<double>(0.0, -1.0) / (double(config.k) * std::pow(xi, q));
        for (std::size_t t = 0; t < n; ++t) psi[t] += factor * anti.values[t];
    }
    return psi;
}

}  // namespace

cvec duality_probe_spectral_route(const SimConfig& config, int m, double xi,
                                  const WavepacketSpec& packet) {
    config.validate();
    const std::size_t n = config.N;
    std::map<int, cvec> arrays = config.coefficient_arrays();
    cvec psi = duality_phase(config, m, xi, arrays);
    cvec v = wavepacket(config, packet, &psi);

    // adjoint coefficients B_j evaluated on the grid
    DiffOperator L;
    L.k = config.k;
    for (const auto& [j, b] : arrays) L.coeffs[j] = sym::full("b" + std::to_string(j));
    DiffOperator Ls = adjoint(L);
    std::map<std::string, std::vector<cvec>> derivs;
    auto deriv_values = [&](const std::string& name, int order) -> const cvec& {
        int j = std::stoi(name.substr(1));
        auto& slot = derivs[name];
        while (int(slot.size()) <= order) {
            int p = int(slot.size());
            SampledFunction f{0.0, config.dx(), {}};
            auto it = arrays.find(j);
            f.values = it == arrays.end() ? cvec(n, 0.0) : it->second;
            slot.push_back(p == 0 ? f.values : spectral_derivative(f, p).values);
        }
        return slot[std::size_t(order)];
    };

    // L* v = D_t v - D^k v - sum B_j D^j v at t = 0;
    // D_t v = xi^k v - i k xi^{k-1-m} e^{i x xi + psi} f'(arg)
    cvec out(n, 0.0);
    {
        // D^k v through the xi^k multiplier
        cvec hat = fft_forward(v);
        for (std::size_t j = 0; j < n; ++j) {
            double freq = fft_frequency(j, n, 2.0 * M_PI * config.R);
            hat[j] *= std::pow(freq, config.k);
        }
        cvec dkv = fft_inverse(hat);
        for (std::size_t t = 0; t < n; ++t) out[t] -= dkv[t];
    }
    for (int j = 0; j <= config.k - 2; ++j) {
        Polynomial Bj = Ls.coeff(j);
        if (Bj.is_zero()) continue;
        cvec hat = fft_forward(v);
        for (std::size_t t = 0; t < n; ++t) {
            double freq = fft_frequency(t, n, 2.0 * M_PI * config.R);
            hat[t] *= std::pow(freq, j);
        }
        cvec djv = fft_inverse(hat);
        for (std::size_t t = 0; t < n; ++t) {
            std::complex<double> bj = Bj.eval([&](const Atom& a) -> std::complex<double> {
                const cvec& d = deriv_values(a.name, a.deriv);
                return a.kind == AtomKind::coeff_re ? d[t].real() : d[t].imag();
            });
            out[t] -= bj * djv[t];
        }
    }
    // D_t v
    const double width = std::pow(packet.xi0, packet.m);
    double packet_norm = 1.0;
    {
        cvec raw = wavepacket(config, [&] {
            WavepacketSpec s = packet;
            s.normalize = false;
            return s;
        }(), &psi);
        if (packet.normalize) {
            double nn = l2_norm(raw, config.dx());
            packet_norm = nn > 0.0 ? nn : 1.0;
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        double x = config.x_at(t);
        double d = std::remainder(x - packet.x1, 2.0 * M_PI * config.R);
        double fp = packet.amplitude * 2.0 / width * chi_plateau(2.0 * d / width, 1);
        std::complex<double> phase = std::exp(std::complex<double>(0.0, packet.xi0 * x) + psi[t]);
        std::complex<double> dtv =
            std::pow(xi, config.k) * v[t] -
            std::complex<double>(0.0, 1.0) * double(config.k) *
                std::pow(xi, config.k - 1 - packet.m) * phase * fp / packet_norm;
        out[t] += dtv;
    }
    // conjugate away the plane wave and psi for comparison purposes
    for (std::size_t t = 0; t < n; ++t) {
        double x = config.x_at(t);
        out[t] *= std::exp(-std::complex<double>(0.0, packet.xi0 * x) - psi[t]);
    }
    return out;
}

cvec duality_probe_table_route(const SimConfig& config, int m, double xi,
                               const WavepacketSpec& packet) {
    config.validate();
    const std::size_t n = config.N;
    std::map<int, cvec> arrays = config.coefficient_arrays();

    std::map<std::string, std::vector<cvec>> derivs;
    auto deriv_values = [&](const std::string& name, int order) -> const cvec& {
        int j = std::stoi(name.substr(1));
        auto& slot = derivs[name];
        while (int(slot.size()) <= order) {
            int p = int(slot.size());
            SampledFunction f{0.0, config.dx(), {}};
            auto it = arrays.find(j);
            f.values = it == arrays.end() ? cvec(n, 0.0) : it->second;
            slot.push_back(p == 0 ? f.values : spectral_derivative(f, p).values);
        }
        return slot[std::size_t(order)];
    };

    // profile and its derivatives sampled on the grid (periodic, compact)
    const double width = std::pow(packet.xi0, packet.m);
    SampledFunction f{0.0, config.dx(), cvec(n, 0.0)};
    for (std::size_t t = 0; t < n; ++t) {
        double d = std::remainder(config.x_at(t) - packet.x1, 2.0 * M_PI * config.R);
        f.values[t] = packet.amplitude * chi_plateau(2.0 * d / width);
    }
    double fnorm = 1.0;
    if (packet.normalize) {
        // the packet normalization divides by ||e^{psi} f||, matching the
        // spectral route; recompute it here
        cvec psi = duality_phase(config, m, xi, arrays);
        cvec raw(n);
        for (std::size_t t = 0; t < n; ++t)
            raw[t] = std::exp(std::complex<double>(0.0, packet.xi0 * config.x_at(t)) + psi[t]) *
                     f.values[t];
        double nn = l2_norm(raw, config.dx());
        fnorm = nn > 0.0 ? nn : 1.0;
    }
    std::vector<cvec> fderiv{f.values};
    for (int p = 1; p <= config.k; ++p) fderiv.push_back(spectral_derivative(f, p).values);

    RecursionState state = RecursionState::base_case(config.k);
    while (state.level() < m) state = state.advance();

    cvec out(n, 0.0);
    for (const auto& [key, P] : state.table().cells()) {
        const auto [l, j] = key;
        double xipow = std::pow(xi, l);
        for (std::size_t t = 0; t < n; ++t) {
            std::complex<double> pv = P.eval([&](const Atom& a) -> std::complex<double> {
                const cvec& d = deriv_values(a.name, a.deriv);
                return a.kind == AtomKind::coeff_re ? d[t].real() : d[t].imag();
            });
            // D^j f(arg) with arg scaling xi^{-m}: (1/i)^j xi^{-mj} f^(j)
            std::complex<double> djf = fderiv[std::size_t(j)][t];
            djf *= std::pow(std::complex<double>(0.0, -1.0), j);
            out[t] -= xipow * std::pow(xi, -packet.m * j) * pv * djf;
        }
    }
    for (auto& z : out) z /= fnorm;
    return out;
}

DualityProbeResult duality_probe(const SimConfig& config, int m, double xi,
                                 const WavepacketSpec& packet) {
    DualityProbeResult res;
    res.xi = xi;
    res.predicted_power = std::pow(xi, config.k - 2 - m);

    std::map<int, cvec> arrays = config.coefficient_arrays();
    res.psi = duality_phase(config, m, xi, arrays);
    cvec v = wavepacket(config, packet, &res.psi);
    double vn = l2_norm(v, config.dx());
    if (vn == 0.0) {
        res.no_packet = true;
        return res;
    }
    cvec conjugated = duality_probe_spectral_route(config, m, xi, packet);
    // restore |e^{psi}| when measuring the L2 size of L* v itself
    cvec full(config.N);
    for (std::size_t t = 0; t < config.N; ++t)
        full[t] = conjugated[t] * std::exp(res.psi[t].real());
    res.residual_ratio = l2_norm(full, config.dx()) / vn;
    return res;
}

}  // namespace dispersym
