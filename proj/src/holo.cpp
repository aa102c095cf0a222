#include "oam/holo.hpp"
#include "oam/detail/fft2.hpp"

#include <cmath>

namespace oam {

namespace {

double wrap2pi(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

} // namespace

PhasePattern slm_qubit_pattern(const OamQubit& q, int nx, int ny, double pitch) {
    const OamQubit qn = q.normalized();
    PhasePattern p(nx, ny, pitch);

    const bool pole_r = std::abs(qn.beta) < 1e-12;
    const bool pole_l = std::abs(qn.alpha) < 1e-12;

    // Phase reference: zero on the lobe axis, so equal superpositions come
    // out as clean 0/pi sectors.
    double ref = 0.0;
    if (!pole_r && !pole_l) {
        const double axis = 0.5 * std::arg(qn.beta / qn.alpha);
        ref = std::arg(qn.alpha * std::polar(1.0, axis) +
                       qn.beta * std::polar(1.0, -axis));
    }

    for (int iy = 0; iy < ny; ++iy) {
        const double y = (iy - ny / 2) * pitch;
        for (int ix = 0; ix < nx; ++ix) {
            const double x = (ix - nx / 2) * pitch;
            const double theta = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
            double phi;
            if (pole_r) {
                phi = theta + std::arg(qn.alpha);
            } else if (pole_l) {
                phi = -theta + std::arg(qn.beta);
            } else {
                phi = std::arg(qn.alpha * std::polar(1.0, theta) +
                               qn.beta * std::polar(1.0, -theta)) - ref;
            }
            p.phase(iy, ix) = wrap2pi(phi);
        }
    }
    return p;
}

PhasePattern fork_pattern(const ForkSpec& spec, int nx, int ny, double pitch) {
    if (spec.blaze_period <= 2.0 * pitch)
        throw std::domain_error("fork_pattern: blaze period undersampled");
    PhasePattern p(nx, ny, pitch);
    for (int iy = 0; iy < ny; ++iy) {
        const double y = (iy - ny / 2) * pitch - spec.center_y;
        for (int ix = 0; ix < nx; ++ix) {
            const double x = (ix - nx / 2) * pitch - spec.center_x;
            const double theta = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
            p.phase(iy, ix) =
                wrap2pi(spec.delta_l * theta + kTwoPi * x / spec.blaze_period);
        }
    }
    return p;
}

TransverseField apply_pattern(const TransverseField& f, const PhasePattern& p) {
    if (p.phase.size() == 0)
        throw std::invalid_argument("apply_pattern: empty pattern");
    TransverseField out = f;
    const GridSpec& g = f.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            const int px = static_cast<int>(std::lround(x / p.pitch)) + p.nx / 2;
            const int py = static_cast<int>(std::lround(y / p.pitch)) + p.ny / 2;
            if (px < 0 || px >= p.nx || py < 0 || py >= p.ny)
                throw std::invalid_argument("apply_pattern: field grid extends "
                                            "outside the pattern");
            out.amplitude(iy, ix) *= std::polar(1.0, p.phase(py, px));
        }
    }
    return out;
}

Complex project_arm(const TransverseField& f, Arm arm, double fiber_waist) {
    const GridSpec& g = f.grid;
    const int unwind = (arm == Arm::Right) ? -1 : +1;
    TransverseField shifted = f;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            const double theta = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
            shifted.amplitude(iy, ix) *= std::polar(1.0, unwind * theta);
        }
    }
    const TransverseField fiber = lg_field({0, 0, fiber_waist}, g);
    return overlap(fiber, shifted);
}

Complex project_arm_physical(const TransverseField& f, Arm arm,
                             double fiber_waist, double blaze_period) {
    const GridSpec& g = f.grid;
    const int delta_l = (arm == Arm::Right) ? -1 : +1;

    // Fork sampled directly on the field grid.
    TransverseField forked = f;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            const double theta = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
            const double phi = std::fmod(delta_l * theta + kTwoPi * x / blaze_period, kTwoPi);
            forked.amplitude(iy, ix) *= std::polar(1.0, phi < 0 ? phi + kTwoPi : phi);
        }
    }

    // Fiber mode brought back to the input plane with the first-order tilt.
    TransverseField fiber = lg_field({0, 0, fiber_waist}, g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            fiber.amplitude(iy, ix) *= std::polar(1.0, kTwoPi * g.x(ix) / blaze_period);

    // Fourier (focal) plane: keep only the first-order window, then take the
    // spectral inner product (Parseval).
    detail::fft2(forked.amplitude, false);
    detail::fft2(fiber.amplitude, false);
    const double f1 = 1.0 / blaze_period;
    Complex acc(0.0, 0.0);
    for (int iy = 0; iy < g.ny; ++iy) {
        const double fy = detail::fft_frequency(iy, g.ny, g.dx);
        if (std::abs(fy) > 0.5 * f1) continue;
        for (int ix = 0; ix < g.nx; ++ix) {
            const double fx = detail::fft_frequency(ix, g.nx, g.dx);
            if (std::abs(fx - f1) > 0.5 * f1) continue;
            acc += std::conj(fiber.amplitude(iy, ix)) * forked.amplitude(iy, ix);
        }
    }
    return acc * g.dx * g.dx / (static_cast<double>(g.nx) * g.ny);
}

double arm_mode_match(double w0, double fiber_waist) {
    // <G(wf) | e^{-i theta} LG(+1,0,w0)> by radial quadrature.
    const double rmax = 6.0 * std::max(w0, fiber_waist);
    const int n = 4000;
    const double dr = rmax / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = i * dr;
        const double gw = std::sqrt(2.0 / kPi) / fiber_waist *
                          std::exp(-r * r / (fiber_waist * fiber_waist));
        const double lg = std::sqrt(2.0 / kPi) / w0 * (std::sqrt(2.0) * r / w0) *
                          std::exp(-r * r / (w0 * w0));
        const double weight = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += weight * gw * lg * kTwoPi * r * dr;
    }
    return acc * acc;
}

double optimal_fiber_waist(double w0) {
    // Golden-section maximization of the mode match.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.3 * w0, b = 3.0 * w0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    while (b - a > 1e-4 * w0) {
        if (arm_mode_match(w0, c) > arm_mode_match(w0, d)) b = d;
        else a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    return 0.5 * (a + b);
}

double blaze_first_order_efficiency(double blaze_period, double pitch, int n) {
    if (blaze_period <= 2.0 * pitch)
        throw std::domain_error("blaze_first_order_efficiency: undersampled blaze");
    Eigen::VectorXcd u(n);
    for (int i = 0; i < n; ++i)
        u(i) = std::polar(1.0, wrap2pi(kTwoPi * i * pitch / blaze_period));

    // DFT, energy within half an order of the first-order frequency.
    const double f1 = 1.0 / blaze_period;
    double first = 0.0, total = 0.0;
    for (int k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        for (int i = 0; i < n; ++i)
            acc += u(i) * std::polar(1.0, -kTwoPi * k * i / n);
        const double e = std::norm(acc);
        total += e;
        const double fk = detail::fft_frequency(k, n, pitch);
        if (std::abs(fk - f1) < 0.5 * f1) first += e;
    }
    return first / total;
}

} // namespace oam
