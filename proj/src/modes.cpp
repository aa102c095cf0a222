#include "oam/modes.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace oam {

OamQubit bloch_state(double theta, double phi) {
    return {Complex(std::cos(0.5 * theta), 0.0),
            std::polar(std::sin(0.5 * theta), phi)};
}

OamQubit cardinal_state(char name) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (name) {
        case 'R': return {1.0, 0.0};
        case 'L': return {0.0, 1.0};
        case 'H': return {s, s};
        case 'V': return {s, -s};
        case 'D': return {s, Complex(0.0, s)};
        case 'A': return {s, Complex(0.0, -s)};
        default: throw std::invalid_argument("cardinal_state: unknown state name");
    }
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

TransverseField lg_field(const ModeIndex& m, const GridSpec& g) {
    m.validate();
    g.validate();

    const int al = std::abs(m.l);
    const double w0 = m.w0;
    const double norm = std::sqrt(2.0 * factorial(m.p) / (kPi * factorial(m.p + al))) / w0;

    TransverseField f(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            const double r2 = x * x + y * y;
            const double rho = 2.0 * r2 / (w0 * w0);
            const double theta = (r2 > 0.0) ? std::atan2(y, x) : 0.0;
            const double radial = norm * std::pow(std::sqrt(rho), al) *
                                  std::assoc_laguerre(m.p, al, rho) *
                                  std::exp(-r2 / (w0 * w0));
            f.amplitude(iy, ix) = std::polar(radial, m.l * theta);
        }
    }

    const double captured = f.squaredNorm();
    if (std::abs(1.0 - captured) > 1e-4)
        throw std::domain_error("lg_field: grid too small, mode energy outside window > 1e-4");
    f.normalize();
    return f;
}

TransverseField qubit_field(const OamQubit& q, double w0, const GridSpec& g) {
    const OamQubit qn = q.normalized();
    TransverseField r = lg_field({+1, 0, w0}, g);
    TransverseField l = lg_field({-1, 0, w0}, g);
    TransverseField out(g);
    out.amplitude = qn.alpha * r.amplitude + qn.beta * l.amplitude;
    out.normalize();
    return out;
}

double azimuthal_energy_fraction(const TransverseField& f, int l) {
    const GridSpec& g = f.grid;
    const int nbins = std::max(g.nx, g.ny) / 2;
    const double rmax = 0.5 * std::min(g.windowX(), g.windowY());
    const double dr = rmax / nbins;

    std::vector<Complex> acc(nbins, Complex(0.0, 0.0));
    std::vector<int> count(nbins, 0);
    double total = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            const double r = std::hypot(x, y);
            total += std::norm(f.amplitude(iy, ix));
            const int bin = static_cast<int>(r / dr);
            if (bin >= nbins) continue;
            const double theta = (r > 0.0) ? std::atan2(y, x) : 0.0;
            acc[bin] += f.amplitude(iy, ix) * std::polar(1.0, -l * theta);
            count[bin] += 1;
        }
    }
    if (total <= 0.0) return 0.0;
    double energy = 0.0;
    for (int b = 0; b < nbins; ++b)
        if (count[b] > 0) energy += std::norm(acc[b]) / count[b];
    return energy / total;
}

} // namespace oam
