#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "polar/torus_grid.hpp"

namespace polar {

namespace detail {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

using RealBuffer = std::unique_ptr<double, FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex, FftwFree>;

/// Cached r2c / c2r plans for one grid size. Plans are created under a lock
/// (the FFTW planner is not thread safe); execution uses the new-array API
/// on freshly allocated, aligned buffers and is safe to run concurrently.
class FftPlans {
public:
    static const FftPlans& for_size(int n) {
        static std::mutex mutex;
        static std::map<int, std::unique_ptr<FftPlans>> cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto& slot = cache[n];
        if (!slot) slot.reset(new FftPlans(n));
        return *slot;
    }

    ~FftPlans() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

    int n() const noexcept { return n_; }
    std::size_t spectrum_size() const noexcept { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }

    RealBuffer alloc_real() const { return RealBuffer(fftw_alloc_real(static_cast<std::size_t>(n_) * n_)); }
    ComplexBuffer alloc_complex() const { return ComplexBuffer(fftw_alloc_complex(spectrum_size())); }

    void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(forward_, in, out); }
    void backward(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(backward_, in, out); }

private:
    explicit FftPlans(int n) : n_(n) {
        RealBuffer r = alloc_real();
        ComplexBuffer c = alloc_complex();
        forward_ = fftw_plan_dft_r2c_2d(n, n, r.get(), c.get(), FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_c2r_2d(n, n, c.get(), r.get(), FFTW_ESTIMATE);
    }

    int n_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

/// Applies the Fourier multiplier m(mu) to f, where mu is the stencil eigenvalue
/// of each mode. m(0) must be 1 for mass conservation.
template <typename Multiplier>
ScalarField apply_spectral_multiplier(const ScalarField& f, Multiplier m) {
    const TorusGrid& g = f.grid();
    const int n = g.n();
    const FftPlans& plans = FftPlans::for_size(n);
    RealBuffer real = plans.alloc_real();
    ComplexBuffer spec = plans.alloc_complex();
    std::copy(f.values().begin(), f.values().end(), real.get());
    plans.forward(real.get(), spec.get());

    const int half = n / 2 + 1;
    std::vector<double> mx(half), my(n);
    for (int k = 0; k < half; ++k) mx[k] = stencil_eigenvalue(g, k, 0);
    for (int k = 0; k < n; ++k) my[k] = stencil_eigenvalue(g, 0, k);

    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (int ky = 0; ky < n; ++ky) {
        for (int kx = 0; kx < half; ++kx) {
            const double factor = m(mx[kx] + my[ky]) * scale;
            fftw_complex& c = spec.get()[static_cast<std::size_t>(ky) * half + kx];
            c[0] *= factor;
            c[1] *= factor;
        }
    }
    plans.backward(spec.get(), real.get());
    ScalarField out(g);
    std::copy(real.get(), real.get() + g.size(), out.values().begin());
    return out;
}

}  // namespace detail

/// Solves (I - tau * laplacian) w = f exactly by diagonalizing the periodic stencil.
inline ScalarField implicit_heat_solve(const ScalarField& f, double tau) {
    if (tau < 0.0) throw Error(ErrorCode::NegativeTime, "implicit_heat_solve with tau < 0");
    if (tau == 0.0) return f;
    return detail::apply_spectral_multiplier(f, [tau](double mu) { return 1.0 / (1.0 + tau * mu); });
}

/// exp(t * laplacian) f, the discrete heat semigroup.
inline ScalarField heat_semigroup(const ScalarField& f, double t) {
    if (t < 0.0) throw Error(ErrorCode::NegativeTime, "heat_semigroup with t < 0");
    if (t == 0.0) return f;
    return detail::apply_spectral_multiplier(f, [t](double mu) { return std::exp(-t * mu); });
}

}  // namespace polar
