// fourier.hpp — half-line Fourier transforms of uniformly sampled functions
//
// Both routes evaluate the same trapezoid sum
//
//     F(nu) = h * sum_n w_n f_n exp(i nu t_n),   t_n = n h,  w_0 = w_N = 1/2
//
// one by direct summation at arbitrary nu, the other on the FFT bin grid
// nu_m = 2 pi m / (N_fft h) via FFTW.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace qdrf::fourier {

using cplx = std::complex<double>;

/// Direct trapezoid evaluation at each requested angular frequency.
inline std::vector<cplx> half_line_direct(std::span<const cplx> f, double h,
                                          std::span<const double> nu) {
    std::vector<cplx> out(nu.size());
    const std::size_t n = f.size();
    if (n < 2) return out;
    constexpr std::size_t kReanchor = 128;
    for (std::size_t k = 0; k < nu.size(); ++k) {
        const cplx step = std::polar(1.0, nu[k] * h);
        cplx phase = 1.0;
        cplx acc = 0.5 * f[0];
        for (std::size_t i = 1; i < n; ++i) {
            if (i % kReanchor == 0)
                phase = std::polar(1.0, nu[k] * h * static_cast<double>(i));
            else
                phase *= step;
            acc += (i + 1 == n ? 0.5 : 1.0) * f[i] * phase;
        }
        out[k] = acc * h;
    }
    return out;
}

/// Transform on the FFT grid. Result index m corresponds to nu_m = m * dnu for
/// m in [-N/2, N/2), stored in natural (not wrapped) order.
struct FftResult {
    double dnu{0.0};
    std::ptrdiff_t m_min{0};
    std::vector<cplx> values;

    double nu(std::size_t i) const { return (static_cast<double>(m_min) + static_cast<double>(i)) * dnu; }

    /// Linear interpolation in nu; zero outside the table.
    cplx at(double nu_value) const {
        const double x = nu_value / dnu - static_cast<double>(m_min);
        if (!(x >= 0.0) || x > static_cast<double>(values.size() - 1)) return 0.0;
        const auto i = static_cast<std::size_t>(x);
        if (i + 1 >= values.size()) return values.back();
        const double t = x - static_cast<double>(i);
        return (1.0 - t) * values[i] + t * values[i + 1];
    }
};

// FFTW planning is not thread-safe; execution is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

class FftPlan {
public:
    explicit FftPlan(std::size_t n)
        : n_(n),
          in_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))),
          out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (!in_ || !out_) throw std::bad_alloc();
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }

    std::size_t size() const { return n_; }
    cplx* input() { return reinterpret_cast<cplx*>(in_); }
    const cplx* output() const { return reinterpret_cast<const cplx*>(out_); }
    void execute() { fftw_execute(plan_); }

private:
    std::size_t n_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan plan_{};
};

inline FftResult half_line_fft(std::span<const cplx> f, double h, std::size_t n_fft) {
    if (n_fft < 2 * f.size())
        throw std::invalid_argument("half_line_fft: n_fft must be at least twice the sample count");
    FftPlan plan(n_fft);
    cplx* in = plan.input();
    for (std::size_t i = 0; i < n_fft; ++i) in[i] = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        in[i] = (i == 0 || i + 1 == f.size() ? 0.5 : 1.0) * f[i];
    plan.execute();

    FftResult r;
    r.dnu = 2.0 * std::numbers::pi / (static_cast<double>(n_fft) * h);
    r.m_min = -static_cast<std::ptrdiff_t>(n_fft / 2);
    r.values.resize(n_fft);
    const cplx* out = plan.output();
    for (std::size_t i = 0; i < n_fft; ++i) {
        const std::ptrdiff_t m = r.m_min + static_cast<std::ptrdiff_t>(i);
        const std::size_t idx = m < 0 ? static_cast<std::size_t>(m + static_cast<std::ptrdiff_t>(n_fft))
                                      : static_cast<std::size_t>(m);
        r.values[i] = out[idx] * h;
    }
    return r;
}

} // namespace qdrf::fourier
