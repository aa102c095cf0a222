#pragma once

#include <complex>
#include <stdexcept>

#include "oam/grid.hpp"

namespace oam {

struct ModeIndex {
    int l = 0;          // azimuthal index (signed)
    int p = 0;          // radial index
    double w0 = 50e-6;  // waist, m

    void validate() const {
        if (p < 0) throw std::invalid_argument("ModeIndex: p must be >= 0");
        if (w0 <= 0.0) throw std::invalid_argument("ModeIndex: w0 must be positive");
    }
};

// Logical qubit on the {|R> = LG(+1,0), |L> = LG(-1,0)} basis.
// Channel outputs are allowed to be unnormalized; normalized() restores
// the unit-norm state.
struct OamQubit {
    Complex alpha{1.0, 0.0}; // amplitude on |R>
    Complex beta{0.0, 0.0};  // amplitude on |L>

    double squaredNorm() const { return std::norm(alpha) + std::norm(beta); }

    OamQubit normalized() const {
        const double n = std::sqrt(squaredNorm());
        if (n <= 0.0) throw std::invalid_argument("OamQubit: zero state");
        return {alpha / n, beta / n};
    }
};

// alpha = cos(theta/2), beta = e^{i phi} sin(theta/2).
OamQubit bloch_state(double theta, double phi);

// The six cardinal states.
OamQubit cardinal_state(char name); // one of R,L,H,V,D,A

// LG_p^l at its waist plane, L2-normalized on the grid.
// Throws std::domain_error if more than 1e-4 of the mode energy would fall
// outside the grid window.
TransverseField lg_field(const ModeIndex& m, const GridSpec& g);

// alpha*LG(+1,0) + beta*LG(-1,0), normalized.
TransverseField qubit_field(const OamQubit& q, double w0, const GridSpec& g);

// Angular-spectrum propagation over distance z. Throws std::domain_error
// when the band-limit criterion for distance z is violated.
TransverseField propagate(const TransverseField& f, double z);

// Fraction of field energy in the azimuthal harmonic e^{i l theta},
// summed over all radial shapes. The fractions over l sum to 1.
double azimuthal_energy_fraction(const TransverseField& f, int l);

} // namespace oam
