#include "oam/phase_ref.hpp"
#include "oam/modes.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oam {

CameraImage render_reference(double phi, const GridSpec& g, double w0,
                             double noise_level, Rng* rng) {
    const TransverseField plus = lg_field({+1, 0, w0}, g);
    const TransverseField minus = lg_field({-1, 0, w0}, g);
    CameraImage img(g);
    const Complex ph = std::polar(1.0, phi);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            img.intensity(iy, ix) =
                std::norm(plus.amplitude(iy, ix) + ph * minus.amplitude(iy, ix));

    if (noise_level > 0.0) {
        if (!rng) throw std::invalid_argument("render_reference: rng required for noise");
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                img.intensity(iy, ix) = std::max(
                    0.0, img.intensity(iy, ix) * (1.0 + noise_level * rng->normal()));
    }
    return img;
}

double extract_phase(const CameraImage& img) {
    const GridSpec& g = img.grid;
    const double total_raw = img.intensity.sum();
    if (total_raw <= 0.0)
        throw std::invalid_argument("extract_phase: empty image");

    // background floor: 5th percentile
    std::vector<double> v(img.intensity.data(), img.intensity.data() + img.intensity.size());
    const std::size_t k = v.size() / 20;
    std::nth_element(v.begin(), v.begin() + k, v.end());
    const double floor = v[k];

    double m00 = 0.0, mx = 0.0, my = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double w = std::max(0.0, img.intensity(iy, ix) - floor);
            m00 += w;
            mx += w * g.x(ix);
            my += w * g.y(iy);
        }
    if (m00 <= 0.0)
        throw std::domain_error("extract_phase: degenerate image");
    const double cx = mx / m00, cy = my / m00;

    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double w = std::max(0.0, img.intensity(iy, ix) - floor);
            const double dxp = g.x(ix) - cx, dyp = g.y(iy) - cy;
            mu20 += w * dxp * dxp;
            mu02 += w * dyp * dyp;
            mu11 += w * dxp * dyp;
        }

    const double aniso = std::hypot(mu20 - mu02, 2.0 * mu11) / (mu20 + mu02);
    if (aniso < 1e-3)
        throw std::domain_error("extract_phase: degenerate image, isotropic second moments");

    const double theta = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);
    double phi = std::fmod(2.0 * theta, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    return phi;
}

int bin_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    const int b = static_cast<int>(std::floor(w / (kTwoPi / 60.0)));
    return std::min(b, 59);
}

double bin_center(int bin) {
    return (bin + 0.5) * kTwoPi / 60.0;
}

} // namespace oam
