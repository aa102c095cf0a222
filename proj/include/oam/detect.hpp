#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oam/holo.hpp"
#include "oam/modes.hpp"
#include "oam/rng.hpp"

namespace oam {

inline constexpr int kPhaseBins = 60;

struct AnalyzerConfig {
    double splitter_ratio = 0.5;        // free-space splitter, fraction to Right arm
    double right_arm_transmission = 1.0; // amplitude
    double left_arm_transmission = 1.0;
    double fiber_splitter_ratio = 0.5;
    double intrinsic_visibility = 1.0;  // v_i in [0,1]
    double detector_efficiency = 1.0;
    double arm_mode_match = 1.0;        // |c|^2 of the fiber-coupled projector
    double background_per_gate = 0.0;   // mean counts per gate per detector
    double gate_duration = 1e-6;        // s
    double mean_photons = 0.6;          // nbar per pulse at the memory input

    void validate() const {
        if (splitter_ratio <= 0.0 || splitter_ratio >= 1.0 ||
            fiber_splitter_ratio <= 0.0 || fiber_splitter_ratio >= 1.0)
            throw std::invalid_argument("AnalyzerConfig: splitter ratios must be in (0,1)");
        if (intrinsic_visibility < 0.0 || intrinsic_visibility > 1.0)
            throw std::invalid_argument("AnalyzerConfig: intrinsic visibility must be in [0,1]");
        if (background_per_gate < 0.0)
            throw std::invalid_argument("AnalyzerConfig: background must be >= 0");
    }
};

struct ClickEvent {
    std::uint64_t trial = 0;
    int detector = 1;   // 1 or 2
    int bin = 0;        // phase bin in [0,60)
    double timestamp = 0.0;
};

using ClickRecord = std::vector<ClickEvent>;

// Mean counts per pulse on (APD1, APD2) for the post-memory qubit amplitudes
// (unnormalized: |alpha|^2+|beta|^2 = channel efficiency) at interferometer
// phase phi. At phi = 0, pi/2, pi, 3pi/2 APD1 reads the V, D, H, A
// components and APD2 the H, A, V, D components.
struct ApdRates {
    double mu1 = 0.0;
    double mu2 = 0.0;
};
ApdRates apd_rates(const OamQubit& q, double phi, const AnalyzerConfig& cfg);

// One interferometer path blocked: the open arm reads |alpha|^2 (Right) or
// |beta|^2 (Left), plus background, split over both detectors.
ApdRates blocked_rates(const OamQubit& q, Arm open_arm, const AnalyzerConfig& cfg);

// Poisson click sampling, one independent draw per pulse per detector; the
// draws come from per-trial substreams of `stream`, so the record is
// identical no matter how trials are scheduled.
ClickRecord sample_clicks(double mu1, double mu2, std::uint64_t pulses,
                          const Rng& stream, int bin = 0,
                          std::uint64_t trial_offset = 0);

struct FringeFit {
    double visibility_raw = 0.0;
    double visibility_corrected = 0.0;
    double phase_offset = 0.0;       // rad
    double background = 0.0;         // counts per pulse used for the correction
    double mean_level = 0.0;         // fitted a
    double amplitude = 0.0;          // fitted b
    double sigma_visibility = 0.0;
};

// Least-squares sinusoid a + b cos(phi - phi0) on per-bin mean counts with
// Poisson weights. background: known per-pulse background used for the
// corrected visibility. Throws std::invalid_argument with fewer than 20
// populated bins.
FringeFit fringe_fit(const std::vector<double>& bin_mean_counts,
                     const std::vector<std::uint64_t>& bin_pulses,
                     double background);

// Histogram of a ClickRecord over phase bins for one detector.
std::vector<double> bin_clicks(const ClickRecord& rec, int detector);

} // namespace oam
