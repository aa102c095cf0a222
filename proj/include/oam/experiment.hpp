#pragma once

#include <string>
#include <vector>

#include "oam/bench.hpp"
#include "oam/config.hpp"
#include "oam/detect.hpp"
#include "oam/memory_eit.hpp"
#include "oam/tomo.hpp"

namespace oam {

// Calibration pins the three free noise parameters to the measured anchors:
// raw visibility, corrected visibility, and total memory efficiency.
struct CalibrationRecord {
    double omega_c = 0.0;
    double group_delay = 0.0;
    double slowing_factor = 0.0;
    double bare_efficiency = 0.0;    // from the 1-D storage simulation
    double leak_fraction = 0.0;
    double decoherence_energy = 1.0; // at the configured storage time
    double technical_loss = 1.0;     // fitted so total efficiency = eta_target
    double channel_efficiency = 0.0; // = eta_target
    double fiber_waist = 0.0;
    double arm_mode_match = 0.0;     // |c|^2
    double intrinsic_visibility = 1.0;
    double background_per_gate = 0.0; // per detector, both arms open
    double fringe_signal = 0.0;       // mean per-pulse fringe signal at the anchors
};

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Throws CalibrationError when no nonnegative background reproduces the
// visibility anchors.
CalibrationRecord calibrate(const ExperimentConfig& cfg);

AnalyzerConfig analyzer_for(const ExperimentConfig& cfg, const CalibrationRecord& cal,
                            double nbar);
StorageChannel channel_for(const CalibrationRecord& cal);

struct PreparedState {
    std::string name;
    OamQubit ideal;
    OamQubit prepared; // after phase-only SLM encoding and projection back
                       // onto the qubit subspace
};

PreparedState prepare_state(const ExperimentConfig& cfg, char cardinal);
PreparedState prepare_state(const ExperimentConfig& cfg, double theta, double phi);

struct FringeResult {
    FringeFit apd1, apd2;
    std::vector<double> phase;          // bin centers, rad
    std::vector<double> counts1;        // mean counts per pulse per bin
    std::vector<double> counts2;        // raw
    std::vector<double> counts2_scaled; // rescaled by 1/detector2_transmission
    std::vector<std::uint64_t> pulses;
    double background_level = 0.0;      // per pulse per detector
};

FringeResult run_fringe(const ExperimentConfig& cfg, const CalibrationRecord& cal);

struct StateReport {
    std::string name;
    double f_raw = 0.0, f_raw_sigma = 0.0;
    double f_corr = 0.0, f_corr_sigma = 0.0;
    StokesVector stokes_raw;
    CountsTable counts;
};

struct RunReport {
    std::vector<StateReport> states;
    double avg_raw = 0.0, std_raw = 0.0;
    double avg_corr = 0.0, std_corr = 0.0;
    Verdict bench;
    CalibrationRecord calibration;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

// nbar_override/pulses_override of 0 mean "use the config values".
RunReport run_tomography(const ExperimentConfig& cfg, const CalibrationRecord& cal,
                         const std::vector<PreparedState>& states,
                         double nbar_override = 0.0,
                         std::uint64_t pulses_override = 0);

struct SweepPoint {
    double nbar = 0.0;
    double f_raw = 0.0, f_raw_sigma = 0.0;
    double f_corr = 0.0, f_corr_sigma = 0.0;
    double threshold = 0.0, threshold_lo = 0.0, threshold_hi = 0.0;
};

std::vector<SweepPoint> run_fidelity_sweep(const ExperimentConfig& cfg,
                                           const CalibrationRecord& cal,
                                           const std::vector<double>& nbars);

std::vector<PreparedState> cardinal_states(const ExperimentConfig& cfg);

} // namespace oam
