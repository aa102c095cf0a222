#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oam/phase_ref.hpp"
#include "oam/modes.hpp"

#include <cmath>

using namespace oam;

namespace {

constexpr double kW0 = 50e-6;
const double kDeg = kPi / 180.0;

double circ_err(double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    if (d > kPi) d = kTwoPi - d;
    return d;
}

} // namespace

TEST_CASE("render/extract round trip is accurate to 1 degree, noiseless") {
    const GridSpec g = GridSpec::forWaist(kW0, 128);
    for (int k = 0; k < 60; ++k) {
        const double phi = (k + 0.5) * kTwoPi / 60.0;
        const double est = extract_phase(render_reference(phi, g, kW0));
        CHECK(circ_err(est, phi) < 1.0 * kDeg);
    }
}

TEST_CASE("lobe orientation follows the half-angle law") {
    const GridSpec g = GridSpec::forWaist(kW0, 128);
    // phi = pi puts the lobes along the vertical axis: intensity at the top
    // should dominate the horizontal axis
    const CameraImage img = render_reference(kPi, g, kW0);
    const int c = g.nx / 2, off = static_cast<int>(kW0 / g.dx);
    CHECK(img.intensity(c + off, c) > 10.0 * img.intensity(c, c + off));
}

TEST_CASE("pure doughnut image is degenerate") {
    const GridSpec g = GridSpec::forWaist(kW0, 128);
    const TransverseField r = lg_field({+1, 0, kW0}, g);
    CameraImage ring(g);
    ring.intensity = r.amplitude.abs2();
    CHECK_THROWS_AS((void)extract_phase(ring), std::domain_error);
}

TEST_CASE("5% shot noise keeps the round trip inside one bin for 99% of trials") {
    const GridSpec g = GridSpec::forWaist(kW0, 96);
    Rng rng(2024);
    int ok = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        const double phi = kTwoPi * rng.uniform();
        const CameraImage img = render_reference(phi, g, kW0, 0.05, &rng);
        if (circ_err(extract_phase(img), phi) < 6.0 * kDeg) ++ok;
    }
    CHECK(ok >= static_cast<int>(0.99 * trials));
}

TEST_CASE("rotation equivariance: rotating the image by 90 deg shifts phase by pi") {
    const GridSpec g = GridSpec::forWaist(kW0, 128);
    const double phi = 0.8;
    const CameraImage img = render_reference(phi, g, kW0);
    CameraImage rot(g);
    // rotate by +90 degrees: source point of (x2,y2) is (y2,-x2); with
    // pixel-center coords x(i) = (i - n/2) dx this maps to integer indices
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const int sx = iy;                 // x_src = y2
            const int sy_off = -(ix - g.nx / 2); // y_src = -x2
            const int sy = sy_off + g.ny / 2;
            if (sy < 0 || sy >= g.ny) continue;
            rot.intensity(iy, ix) = img.intensity(sy, sx);
        }
    const double est = extract_phase(rot);
    CHECK(circ_err(est, phi + kPi) < 1.0 * kDeg);
}

TEST_CASE("bin_phase boundaries, monotonicity, surjectivity") {
    const double bw = kTwoPi / 60.0;
    CHECK(bin_phase(0.0) == 0);
    CHECK(bin_phase(bw - 1e-9) == 0);
    CHECK(bin_phase(bw) == 1);
    CHECK(bin_phase(kTwoPi - 1e-9) == 59);
    CHECK(bin_phase(kTwoPi) == 0);
    CHECK(bin_phase(-1e-9) == 59);
    int prev = -1;
    std::vector<bool> seen(60, false);
    for (int k = 0; k < 600; ++k) {
        const int b = bin_phase(k * kTwoPi / 600.0);
        CHECK(b >= prev - 59); // monotone within one period
        if (k > 0 && k < 599) CHECK(b >= prev);
        prev = b;
        seen[b] = true;
    }
    for (int b = 0; b < 60; ++b) CHECK(seen[b]);
    CHECK(bin_phase(bin_center(17)) == 17);
}

TEST_CASE("noise requires an rng") {
    const GridSpec g = GridSpec::forWaist(kW0, 64);
    CHECK_THROWS_AS((void)render_reference(0.0, g, kW0, 0.05, nullptr),
                    std::invalid_argument);
}
