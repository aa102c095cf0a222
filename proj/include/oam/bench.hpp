#pragma once

#include <stdexcept>

namespace oam {

struct BenchmarkInput {
    double mean_photons = 0.6;  // nbar
    double efficiency = 0.15;   // eta in (0,1]
    double efficiency_sigma = 0.02;
    double fidelity = 0.925;
    double fidelity_sigma = 0.02;

    void validate() const {
        if (mean_photons <= 0.0)
            throw std::invalid_argument("BenchmarkInput: nbar must be > 0");
        if (efficiency <= 0.0 || efficiency > 1.0)
            throw std::invalid_argument("BenchmarkInput: efficiency must be in (0,1]");
    }
};

// (N+1)/(N+2): best intercept-resend fidelity for an N-photon state.
double classical_fidelity_fock(int n_photons);

// Best classical fidelity for a Poissonian source of mean nbar when the
// memory responds on only a fraction eta of the pulses: the optimal cheat
// accepts pulses from the largest photon number downward (fractionally at
// the cutoff) until the acceptance probability reaches eta, and averages
// (N+1)/(N+2) over the accepted pulses. With include_vacuum = false, N = 0
// pulses are excluded from both the acceptance budget and the average.
double classical_threshold(double nbar, double eta, bool include_vacuum = true);

struct Verdict {
    bool is_quantum = false;
    double sigmas = 0.0;
    double threshold = 0.0;
    double threshold_lo = 0.0; // at eta + sigma_eta
    double threshold_hi = 0.0; // at eta - sigma_eta
};

Verdict verdict(const BenchmarkInput& b);

// Largest azimuthal index whose LG ring radius w0*sqrt(l/2) stays within
// coverage*control_waist; the estimate of how many OAM qubit modes the
// control beam can address. The default coverage reaches out to where the
// control intensity has dropped to ~e^-3 of its peak (r = 1.8 w).
int mode_capacity(double control_waist, double qubit_waist, double coverage = 1.8);

} // namespace oam
