#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "oam/constants.hpp"

namespace oam {

// Flat, strictly-validated experiment configuration. Defaults are the
// operating point of the experiment being modeled.
struct ExperimentConfig {
    // optics
    int grid_n = 512;
    double qubit_waist = 50e-6;
    double control_waist = 200e-6;
    double wavelength = kCsD2Wavelength;
    double blaze_period = 25e-6;
    double fiber_waist = 0.0; // 0 = optimize for the qubit waist
    int slm_nx = 792;
    int slm_ny = 600;
    double slm_pitch = 20e-6;
    double slm_beam_waist = 1e-3; // beam size on the SLM before demagnification

    // memory
    double optical_depth = 15.0;
    double medium_length = 2e-3;
    double gamma_e = 0.5 * kCsD2Gamma;
    double gamma_0 = 0.0;
    double target_delay = 200e-9;
    double ramp_duration = 50e-9;
    double storage_time = 1e-6;
    double pulse_width = 300e-9;
    double memory_time = 15e-6;
    bool gaussian_decoherence = true;

    // detection and calibration anchors
    double nbar = 0.6;
    double eta_target = 0.15;
    double eta_sigma = 0.02;
    double v_raw_target = 0.80;
    double v_corr_target = 0.965;
    double detector_efficiency = 1.0;
    double detector2_transmission = 1.0; // extra fiber-splitter loss on APD2
    bool background_enabled = true;
    bool include_vacuum_in_benchmark = true;

    // statistics
    std::uint64_t fringe_pulses = 100000;          // total over the 60 bins
    std::uint64_t tomo_pulses_per_setting = 100000;
    std::uint64_t sweep_pulses_per_setting = 20000;
    int trials_per_cycle = 200;
    double trial_period = 5e-6;

    std::uint64_t seed = 20260805;
    int threads = 1;

    void validate() const;

    // Canonical serialization (sorted keys) and its FNV-1a hash.
    std::string canonical() const;
    std::uint64_t hash() const;

    static ExperimentConfig defaults() { return {}; }
    // Throws std::invalid_argument on unknown keys, wrong types, or
    // out-of-range values.
    static ExperimentConfig fromJsonFile(const std::filesystem::path& path);
    static ExperimentConfig fromJsonText(const std::string& text);
};

} // namespace oam
