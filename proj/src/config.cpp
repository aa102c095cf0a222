#include "oam/config.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace oam {

using nlohmann::json;

namespace {

json toJson(const ExperimentConfig& c) {
    return json{
        {"grid_n", c.grid_n},
        {"qubit_waist", c.qubit_waist},
        {"control_waist", c.control_waist},
        {"wavelength", c.wavelength},
        {"blaze_period", c.blaze_period},
        {"fiber_waist", c.fiber_waist},
        {"slm_nx", c.slm_nx},
        {"slm_ny", c.slm_ny},
        {"slm_pitch", c.slm_pitch},
        {"slm_beam_waist", c.slm_beam_waist},
        {"optical_depth", c.optical_depth},
        {"medium_length", c.medium_length},
        {"gamma_e", c.gamma_e},
        {"gamma_0", c.gamma_0},
        {"target_delay", c.target_delay},
        {"ramp_duration", c.ramp_duration},
        {"storage_time", c.storage_time},
        {"pulse_width", c.pulse_width},
        {"memory_time", c.memory_time},
        {"gaussian_decoherence", c.gaussian_decoherence},
        {"nbar", c.nbar},
        {"eta_target", c.eta_target},
        {"eta_sigma", c.eta_sigma},
        {"v_raw_target", c.v_raw_target},
        {"v_corr_target", c.v_corr_target},
        {"detector_efficiency", c.detector_efficiency},
        {"detector2_transmission", c.detector2_transmission},
        {"background_enabled", c.background_enabled},
        {"include_vacuum_in_benchmark", c.include_vacuum_in_benchmark},
        {"fringe_pulses", c.fringe_pulses},
        {"tomo_pulses_per_setting", c.tomo_pulses_per_setting},
        {"sweep_pulses_per_setting", c.sweep_pulses_per_setting},
        {"trials_per_cycle", c.trials_per_cycle},
        {"trial_period", c.trial_period},
        {"seed", c.seed},
        // threads deliberately excluded: the thread count never changes any
        // result, so it must not change the canonical identity either
    };
}

template <typename T>
void assign(const json& j, const char* key, T& target) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string("config: wrong type for key '") + key + "'");
    }
}

} // namespace

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(std::string("config: ") + msg);
    };
    require(grid_n >= 32, "grid_n must be >= 32");
    require(qubit_waist > 0 && control_waist > 0, "waists must be positive");
    require(wavelength > 0, "wavelength must be positive");
    require(blaze_period > 0 && slm_pitch > 0, "hologram pitches must be positive");
    require(slm_beam_waist > 0, "slm_beam_waist must be positive");
    require(optical_depth > 0, "optical_depth must be positive");
    require(medium_length > 0, "medium_length must be positive");
    require(target_delay > 0, "target_delay must be positive");
    require(ramp_duration > 0, "ramp_duration must be positive");
    require(storage_time >= 0, "storage_time must be >= 0");
    require(pulse_width > 0, "pulse_width must be positive");
    require(memory_time > 0, "memory_time must be positive");
    require(nbar > 0, "nbar must be positive");
    require(eta_target > 0 && eta_target <= 1, "eta_target must be in (0,1]");
    require(v_raw_target > 0 && v_raw_target <= 1, "v_raw_target must be in (0,1]");
    require(v_corr_target > 0 && v_corr_target <= 1, "v_corr_target must be in (0,1]");
    require(detector_efficiency > 0 && detector_efficiency <= 1,
            "detector_efficiency must be in (0,1]");
    require(detector2_transmission > 0 && detector2_transmission <= 1,
            "detector2_transmission must be in (0,1]");
    require(fringe_pulses >= 60, "fringe_pulses must cover the 60 bins");
    require(tomo_pulses_per_setting > 0, "tomo_pulses_per_setting must be positive");
    require(threads >= 1, "threads must be >= 1");
}

std::string ExperimentConfig::canonical() const {
    return toJson(*this).dump(); // nlohmann objects keep keys sorted
}

std::uint64_t ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ExperimentConfig ExperimentConfig::fromJsonText(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: root must be an object");

    const json known = toJson(ExperimentConfig{});
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.contains(key) && key != "threads")
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }

    ExperimentConfig c;
    assign(j, "grid_n", c.grid_n);
    assign(j, "qubit_waist", c.qubit_waist);
    assign(j, "control_waist", c.control_waist);
    assign(j, "wavelength", c.wavelength);
    assign(j, "blaze_period", c.blaze_period);
    assign(j, "fiber_waist", c.fiber_waist);
    assign(j, "slm_nx", c.slm_nx);
    assign(j, "slm_ny", c.slm_ny);
    assign(j, "slm_pitch", c.slm_pitch);
    assign(j, "slm_beam_waist", c.slm_beam_waist);
    assign(j, "optical_depth", c.optical_depth);
    assign(j, "medium_length", c.medium_length);
    assign(j, "gamma_e", c.gamma_e);
    assign(j, "gamma_0", c.gamma_0);
    assign(j, "target_delay", c.target_delay);
    assign(j, "ramp_duration", c.ramp_duration);
    assign(j, "storage_time", c.storage_time);
    assign(j, "pulse_width", c.pulse_width);
    assign(j, "memory_time", c.memory_time);
    assign(j, "gaussian_decoherence", c.gaussian_decoherence);
    assign(j, "nbar", c.nbar);
    assign(j, "eta_target", c.eta_target);
    assign(j, "eta_sigma", c.eta_sigma);
    assign(j, "v_raw_target", c.v_raw_target);
    assign(j, "v_corr_target", c.v_corr_target);
    assign(j, "detector_efficiency", c.detector_efficiency);
    assign(j, "detector2_transmission", c.detector2_transmission);
    assign(j, "background_enabled", c.background_enabled);
    assign(j, "include_vacuum_in_benchmark", c.include_vacuum_in_benchmark);
    assign(j, "fringe_pulses", c.fringe_pulses);
    assign(j, "tomo_pulses_per_setting", c.tomo_pulses_per_setting);
    assign(j, "sweep_pulses_per_setting", c.sweep_pulses_per_setting);
    assign(j, "trials_per_cycle", c.trials_per_cycle);
    assign(j, "trial_period", c.trial_period);
    assign(j, "seed", c.seed);
    assign(j, "threads", c.threads);
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::fromJsonFile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fromJsonText(text);
}

} // namespace oam
