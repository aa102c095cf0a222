#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "oam/constants.hpp"

namespace oam {

using Complex = std::complex<double>;
using FieldArray = Eigen::ArrayXXcd; // (ny rows, nx cols)

struct GridSpec {
    int nx = 512;
    int ny = 512;
    double dx = 1.5625e-6;                 // pixel pitch, m
    double wavelength = kCsD2Wavelength;   // m

    void validate() const {
        if (nx < 32 || ny < 32)
            throw std::invalid_argument("GridSpec: nx, ny must be >= 32");
        if (dx <= 0.0)
            throw std::invalid_argument("GridSpec: dx must be positive");
        if (wavelength <= 0.0)
            throw std::invalid_argument("GridSpec: wavelength must be positive");
    }

    double windowX() const { return nx * dx; }
    double windowY() const { return ny * dx; }

    // Pixel-center coordinate, origin at the grid center.
    double x(int ix) const { return (ix - nx / 2) * dx; }
    double y(int iy) const { return (iy - ny / 2) * dx; }

    bool operator==(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && dx == o.dx && wavelength == o.wavelength;
    }

    // Default window rule: 16 x waist keeps the LG Gram matrix below 1e-6.
    static GridSpec forWaist(double w0, int n = 512) {
        GridSpec g;
        g.nx = g.ny = n;
        g.dx = 16.0 * w0 / n;
        return g;
    }
};

struct TransverseField {
    GridSpec grid;
    FieldArray amplitude; // amplitude(iy, ix)

    TransverseField() = default;
    explicit TransverseField(const GridSpec& g)
        : grid(g), amplitude(FieldArray::Zero(g.ny, g.nx)) {}

    double squaredNorm() const {
        return amplitude.abs2().sum() * grid.dx * grid.dx;
    }
    double norm() const { return std::sqrt(squaredNorm()); }

    TransverseField& normalize() {
        const double n = norm();
        if (n > 0.0) amplitude /= n;
        return *this;
    }
};

// Discrete L2 inner product, conjugate-linear in the first argument.
inline Complex overlap(const TransverseField& a, const TransverseField& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("overlap: grid mismatch");
    return (a.amplitude.conjugate() * b.amplitude).sum() * a.grid.dx * a.grid.dx;
}

} // namespace oam
