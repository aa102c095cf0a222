#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "oam/constants.hpp"
#include "oam/modes.hpp"

namespace oam {

struct LambdaParams {
    double optical_depth = 15.0;
    double gamma_e = 0.5 * kCsD2Gamma;   // HWHM dipole decay, rad/s
    double omega_c = 2.5e7;              // control Rabi frequency, rad/s
    double gamma_0 = 0.0;                // ground coherence decay, rad/s
    double length = 2e-3;                // m
    double signal_detuning = 0.0;        // rad/s
    double two_photon_detuning = 0.0;    // rad/s

    void validate() const {
        if (optical_depth <= 0.0) throw std::invalid_argument("LambdaParams: optical_depth must be > 0");
        if (omega_c < 0.0) throw std::invalid_argument("LambdaParams: omega_c must be >= 0");
        if (length <= 0.0) throw std::invalid_argument("LambdaParams: length must be > 0");
    }
};

enum class RampShape { Linear, Smoothstep };

struct ControlTimeline {
    double ramp_down_start = 1.25e-6; // s
    double ramp_duration = 50e-9;     // s
    double storage_time = 1e-6;       // s
    RampShape shape = RampShape::Smoothstep;

    void validate() const {
        if (ramp_duration <= 0.0) throw std::invalid_argument("ControlTimeline: ramp_duration must be > 0");
        if (storage_time < 0.0) throw std::invalid_argument("ControlTimeline: storage_time must be >= 0");
    }

    // Control envelope in [0,1] at time t; 1 before ramp-down, 0 during the
    // storage window, back to 1 after ramp-up.
    double envelope(double t) const;
};

struct PulseShape {
    double width = 300e-9;      // half-Gaussian width parameter, s
    double cutoff = 1.2e-6;     // s, sharp trailing edge of the half-Gaussian
    double mean_photons = 0.6;  // nbar per pulse

    // Amplitude envelope, normalized so that integral of envelope^2 dt = 1.
    double amplitude(double t) const;
};

struct StorageChannel {
    Complex amplitude_transmission{1.0, 0.0};
    double leak_fraction = 0.0;
    double delay = 0.0; // s

    double efficiency() const { return std::norm(amplitude_transmission); }
};

struct StorageResult {
    StorageChannel channel;
    double bare_efficiency = 0.0;      // retrieved / input energy, before losses applied on top
    double absorbed_fraction = 0.0;
    double energy_residual = 0.0;      // |in - (leak + retrieved + absorbed + left_in_medium)| / in
    std::vector<double> time;          // s
    std::vector<double> input_power;   // |E_in|^2
    std::vector<double> output_power;  // |E_out|^2
};

// Linear susceptibility exponent of the Lambda medium at two-photon
// detuning delta: the field transmission is exp(-(OD/2) * chi(delta)).
// chi(0) = 1 for a bare two-level medium; Im chi(0) = 0 with gamma_0 = 0.
Complex eit_susceptibility(double delta, const LambdaParams& p);

// EIT group delay through the medium from the susceptibility dispersion.
double group_delay(const LambdaParams& p);

// Control Rabi frequency giving the target group delay, by bisection to 0.1%.
double calibrate_control(double target_delay, const LambdaParams& p);

// 1-D two-field storage simulation (signal field <-> spin wave) on a z-t
// grid. Throws std::domain_error on an unstable grid configuration.
StorageResult simulate_storage(const PulseShape& pulse, const ControlTimeline& tl,
                               const LambdaParams& p, int nz = 200,
                               double dt_hint = 0.0);

// Multiplicative amplitude decay after a storage time; Gaussian by default
// (1/e energy time = tau), exponential optional.
Complex decoherence_factor(double t_store, double tau, bool gaussian = true);

// Spin-wave motional dephasing time 1/(k_s * sigma_v) for the given
// control-signal angle and temperature.
double motional_dephasing_time(double angle, double temperature,
                               double wavelength = kCsD2Wavelength,
                               double mass = kCsMass);

struct QubitChannelPerturbation {
    double differential_phase = 0.0;      // extra phase on |L>, rad
    double differential_loss = 0.0;       // extra amplitude loss on |L>
};

struct StoredQubit {
    OamQubit state;           // unnormalized
    double success_probability = 0.0;
};

// The scalar memory channel applied to both qubit amplitudes; OAM-preserving
// and basis-symmetric unless a perturbation is supplied.
StoredQubit store_qubit(const OamQubit& q, const StorageChannel& ch,
                        const QubitChannelPerturbation& pert = {});

} // namespace oam
