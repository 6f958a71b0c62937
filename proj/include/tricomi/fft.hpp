#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace tricomi {

namespace detail {
// FFTW plan creation/destruction is not thread-safe; executions on private
// buffers are.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

/// Complex FFT workspace for one grid size. Forward transform is normalized
/// by 1/n so that spectrum[0] is the mean of the samples.
class Fft {
public:
    explicit Fft(int n) : n_(n) {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        buf_ = fftw_alloc_complex(n);
        fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }

    void forward(const std::vector<double>& u, std::vector<std::complex<double>>& uhat) {
        uhat.resize(n_);
        for (int i = 0; i < n_; ++i) {
            buf_[i][0] = u[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        const double inv = 1.0 / n_;
        for (int i = 0; i < n_; ++i) uhat[i] = {buf_[i][0] * inv, buf_[i][1] * inv};
    }

    void inverse(const std::vector<std::complex<double>>& uhat, std::vector<double>& u) {
        for (int i = 0; i < n_; ++i) {
            buf_[i][0] = uhat[i].real();
            buf_[i][1] = uhat[i].imag();
        }
        fftw_execute(bwd_);
        u.resize(n_);
        for (int i = 0; i < n_; ++i) u[i] = buf_[i][0];
    }

    /// d^2u/dx^2 by spectral differentiation on a box of half-width L.
    void second_derivative(const std::vector<double>& u, std::vector<double>& out, double L) {
        forward(u, spec_);
        const double pi = 3.14159265358979323846;
        for (int k = 0; k < n_; ++k) {
            int kk = (k <= n_ / 2) ? k : k - n_;
            double xi = pi * kk / L;
            spec_[k] *= -xi * xi;
        }
        inverse(spec_, out);
    }

    /// du/dx by spectral differentiation (Nyquist mode dropped).
    void derivative(const std::vector<double>& u, std::vector<double>& out, double L) {
        forward(u, spec_);
        const double pi = 3.14159265358979323846;
        for (int k = 0; k < n_; ++k) {
            int kk = (k <= n_ / 2) ? k : k - n_;
            double xi = (k == n_ / 2) ? 0.0 : pi * kk / L;
            spec_[k] *= std::complex<double>(0.0, xi);
        }
        inverse(spec_, out);
    }

    /// Zero all modes with |k| > n/3 (the standard 2/3 dealiasing filter).
    void dealias_23(std::vector<double>& u) {
        forward(u, spec_);
        for (int k = 0; k < n_; ++k) {
            int kk = (k <= n_ / 2) ? k : k - n_;
            if (std::abs(kk) > n_ / 3) spec_[k] = 0.0;
        }
        inverse(spec_, u);
    }

private:
    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
    std::vector<std::complex<double>> spec_;
};

} // namespace tricomi
