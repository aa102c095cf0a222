#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

#include "oam/modes.hpp"

namespace oam {

// Outcome order: R, L, H, V, D, A.
enum Outcome { kR = 0, kL, kH, kV, kD, kA };
inline constexpr std::array<char, 6> kOutcomeNames = {'R', 'L', 'H', 'V', 'D', 'A'};

struct CountsTable {
    std::array<double, 6> counts{};      // >= 0
    std::array<double, 6> background{};  // per-outcome background estimate
    std::array<double, 6> pulses{};      // pulses per setting
    bool clamped = false;                // set when a subtraction hit zero

    void validate() const {
        for (int i = 0; i < 6; ++i)
            if (counts[i] < 0.0 || background[i] < 0.0)
                throw std::invalid_argument("CountsTable: negative entries");
    }
};

struct StokesVector {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0, sigma3 = 0.0;
};

using DensityMatrix2 = Eigen::Matrix2cd;

// S3 = pR - pL, S1 = pH - pV, S2 = pD - pA, each basis pair normalized on
// its own. Poisson uncertainties per component; extra_phase_sigma (rad) adds
// the interferometer phase-bin contribution to the equatorial components in
// quadrature. Throws std::invalid_argument on an empty basis pair.
StokesVector stokes_from_counts(const CountsTable& t, double extra_phase_sigma = 0.0);

// rho = (I + S.sigma)/2 on the {|R>,|L>} basis.
DensityMatrix2 reconstruct(const StokesVector& s);

// Nearest trace-1 PSD matrix: eigenvalue clipping with renormalization.
DensityMatrix2 physical_project(const DensityMatrix2& rho);

// <psi| rho |psi>
double fidelity(const DensityMatrix2& rho, const OamQubit& psi);

// Propagated 1-sigma uncertainty of fidelity(rho(S), psi).
double fidelity_sigma(const StokesVector& s, const OamQubit& psi);

// counts - background, clamped at zero (flagged); background zeroed after.
CountsTable background_subtract(const CountsTable& t);

double trace_distance(const DensityMatrix2& a, const DensityMatrix2& b);

// Exact outcome probabilities for a state, as a noiseless CountsTable.
CountsTable exact_counts(const DensityMatrix2& rho, double pulses = 1.0);

} // namespace oam
