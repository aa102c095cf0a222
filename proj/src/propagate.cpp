#include "oam/modes.hpp"
#include "oam/detail/fft2.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <vector>

namespace oam::detail {

void fft2(FieldArray& a, bool inverse) {
    Eigen::FFT<double> fft;
    const int ny = static_cast<int>(a.rows());
    const int nx = static_cast<int>(a.cols());
    std::vector<Complex> in, out;
    in.resize(std::max(nx, ny));
    out.resize(std::max(nx, ny));
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) in[ix] = a(iy, ix);
        if (inverse) fft.inv(out.data(), in.data(), nx);
        else fft.fwd(out.data(), in.data(), nx);
        for (int ix = 0; ix < nx; ++ix) a(iy, ix) = out[ix];
    }
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) in[iy] = a(iy, ix);
        if (inverse) fft.inv(out.data(), in.data(), ny);
        else fft.fwd(out.data(), in.data(), ny);
        for (int iy = 0; iy < ny; ++iy) a(iy, ix) = out[iy];
    }
}

double fft_frequency(int i, int n, double d) {
    const int k = (i <= n / 2) ? i : i - n;
    return k / (n * d);
}

} // namespace oam::detail

namespace oam {

using detail::fft2;
using detail::fft_frequency;

TransverseField propagate(const TransverseField& f, double z) {
    if (z == 0.0) return f;
    const GridSpec& g = f.grid;
    const double k0 = kTwoPi / g.wavelength;

    TransverseField out = f;
    fft2(out.amplitude, false);

    // Occupied bandwidth of the field, for the anti-aliasing check: the
    // highest spatial frequency whose spectral energy exceeds 1e-8 of the
    // spectral peak.
    const double peak = out.amplitude.abs2().maxCoeff();
    double ft_max = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double fy = fft_frequency(iy, g.ny, g.dx);
        for (int ix = 0; ix < g.nx; ++ix) {
            if (std::norm(out.amplitude(iy, ix)) < 1e-8 * peak) continue;
            const double fx = fft_frequency(ix, g.nx, g.dx);
            ft_max = std::max(ft_max, std::hypot(fx, fy));
        }
    }
    // A ray at transverse frequency ft walks off by z*lambda*ft; it must not
    // wrap around the periodic window.
    const double walkoff = std::abs(z) * g.wavelength * ft_max;
    if (walkoff > 0.25 * std::min(g.windowX(), g.windowY())) {
        throw std::domain_error("propagate: aliasing detected, field bandwidth too "
                                "large for this distance on this grid");
    }

    for (int iy = 0; iy < g.ny; ++iy) {
        const double ky = kTwoPi * fft_frequency(iy, g.ny, g.dx);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double kx = kTwoPi * fft_frequency(ix, g.nx, g.dx);
            const double kt2 = kx * kx + ky * ky;
            Complex h;
            if (kt2 <= k0 * k0) {
                h = std::polar(1.0, z * std::sqrt(k0 * k0 - kt2));
            } else {
                // evanescent
                h = std::exp(-std::abs(z) * std::sqrt(kt2 - k0 * k0));
            }
            out.amplitude(iy, ix) *= h;
        }
    }

    fft2(out.amplitude, true);
    return out;
}

} // namespace oam
