// oamqm: desk-scale simulator of OAM qubit storage in an EIT atomic memory,
// with interferometric tomography and the classical-benchmark verdict.

#include <CLI11.hpp>
#include <json.hpp>

#include "oam/bench.hpp"
#include "oam/experiment.hpp"
#include "oam/holo.hpp"
#include "oam/io.hpp"
#include "oam/phase_ref.hpp"

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace oam;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCalibration = 3;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

ExperimentConfig loadConfig(const GlobalOpts& g) {
    ExperimentConfig cfg = g.config_path.empty()
                               ? ExperimentConfig::defaults()
                               : ExperimentConfig::fromJsonFile(g.config_path);
    if (g.seed_set) cfg.seed = g.seed;
    if (g.threads > 0) cfg.threads = g.threads;
    cfg.validate();
    return cfg;
}

json calJson(const CalibrationRecord& c) {
    return json{{"omega_c", c.omega_c},
                {"group_delay", c.group_delay},
                {"slowing_factor", c.slowing_factor},
                {"bare_efficiency", c.bare_efficiency},
                {"leak_fraction", c.leak_fraction},
                {"decoherence_energy", c.decoherence_energy},
                {"technical_loss", c.technical_loss},
                {"channel_efficiency", c.channel_efficiency},
                {"fiber_waist", c.fiber_waist},
                {"arm_mode_match", c.arm_mode_match},
                {"intrinsic_visibility", c.intrinsic_visibility},
                {"background_per_gate", c.background_per_gate},
                {"fringe_signal", c.fringe_signal}};
}

json reportJson(const ExperimentConfig& cfg, const RunReport& rep) {
    json states = json::array();
    for (const auto& s : rep.states) {
        states.push_back({{"state", s.name},
                          {"fidelity_raw", s.f_raw},
                          {"fidelity_raw_sigma", s.f_raw_sigma},
                          {"fidelity_corrected", s.f_corr},
                          {"fidelity_corrected_sigma", s.f_corr_sigma},
                          {"stokes", {s.stokes_raw.s1, s.stokes_raw.s2, s.stokes_raw.s3}}});
    }
    return json{{"states", states},
                {"average_fidelity_raw", rep.avg_raw},
                {"average_fidelity_raw_std", rep.std_raw},
                {"average_fidelity_corrected", rep.avg_corr},
                {"average_fidelity_corrected_std", rep.std_corr},
                {"classical_threshold", rep.bench.threshold},
                {"is_quantum", rep.bench.is_quantum},
                {"sigmas_above_threshold", rep.bench.sigmas},
                {"calibration", calJson(rep.calibration)},
                {"config_hash", rep.config_hash},
                {"seed", rep.seed},
                {"nbar", cfg.nbar}};
}

void writeJson(const fs::path& p, const json& j) {
    io::write_text_atomic(p, j.dump(2) + "\n");
}

int cmdHologram(const ExperimentConfig& cfg, const fs::path& out) {
    for (char c : {'R', 'L', 'H', 'V', 'D', 'A'}) {
        const PhasePattern p = slm_qubit_pattern(cardinal_state(c), cfg.slm_nx,
                                                 cfg.slm_ny, cfg.slm_pitch);
        io::write_pattern_pgm(out / (std::string("slm_") + c + ".pgm"), p);
    }
    ForkSpec fork;
    // The projection fork (cfg.blaze_period) is finer than the SLM pitch;
    // export an SLM-resolvable version with 8 pixels per blaze period.
    fork.blaze_period = 8.0 * cfg.slm_pitch;
    fork.delta_l = -1;
    io::write_pattern_pgm(out / "fork_right.pgm",
                          fork_pattern(fork, cfg.slm_nx, cfg.slm_ny, cfg.slm_pitch));
    fork.delta_l = +1;
    io::write_pattern_pgm(out / "fork_left.pgm",
                          fork_pattern(fork, cfg.slm_nx, cfg.slm_ny, cfg.slm_pitch));

    // intensity of the six prepared modes at the memory plane
    const GridSpec g = GridSpec::forWaist(cfg.qubit_waist, cfg.grid_n);
    for (char c : {'R', 'L', 'H', 'V', 'D', 'A'}) {
        const TransverseField f = qubit_field(cardinal_state(c), cfg.qubit_waist, g);
        io::write_field_intensity_pgm(out / (std::string("mode_") + c + ".pgm"), f);
    }
    std::cout << "wrote SLM patterns, fork holograms and mode images to " << out << "\n";
    return 0;
}

int cmdStorage(const ExperimentConfig& cfg, const fs::path& out) {
    const CalibrationRecord cal = calibrate(cfg);
    LambdaParams p;
    p.optical_depth = cfg.optical_depth;
    p.gamma_e = cfg.gamma_e;
    p.gamma_0 = cfg.gamma_0;
    p.length = cfg.medium_length;
    p.omega_c = cal.omega_c;
    PulseShape pulse;
    pulse.width = cfg.pulse_width;
    pulse.cutoff = 4.0 * cfg.pulse_width;
    pulse.mean_photons = cfg.nbar;
    ControlTimeline tl;
    tl.ramp_down_start = pulse.cutoff + 0.25 * cal.group_delay;
    tl.ramp_duration = cfg.ramp_duration;
    tl.storage_time = cfg.storage_time;
    const StorageResult sim = simulate_storage(pulse, tl, p);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sim.time.size(); ++i)
        rows.push_back({sim.time[i], sim.input_power[i], sim.output_power[i]});
    io::write_csv(out / "storage_envelope.csv", {"t", "input_power", "output_power"}, rows);

    json j{{"bare_efficiency", sim.bare_efficiency},
           {"leak_fraction", sim.channel.leak_fraction},
           {"absorbed_fraction", sim.absorbed_fraction},
           {"energy_residual", sim.energy_residual},
           {"delay", sim.channel.delay},
           {"technical_loss", cal.technical_loss},
           {"total_efficiency", cal.channel_efficiency},
           {"decoherence_energy", cal.decoherence_energy},
           {"config_hash", cfg.hash()},
           {"seed", cfg.seed}};
    writeJson(out / "storage_channel.json", j);
    std::cout << "bare efficiency " << sim.bare_efficiency << ", total (calibrated) "
              << cal.channel_efficiency << "\n";
    return 0;
}

int cmdFringe(const ExperimentConfig& cfg, const fs::path& out) {
    const CalibrationRecord cal = calibrate(cfg);
    const FringeResult fr = run_fringe(cfg, cal);
    std::vector<std::vector<double>> rows;
    for (int b = 0; b < kPhaseBins; ++b)
        rows.push_back({fr.phase[b], fr.counts1[b], fr.counts2[b], fr.counts2_scaled[b],
                        static_cast<double>(fr.pulses[b])});
    io::write_csv(out / "fringe.csv",
                  {"phi", "counts1", "counts2", "counts2_scaled", "pulses"}, rows);
    json j{{"apd1",
            {{"visibility_raw", fr.apd1.visibility_raw},
             {"visibility_corrected", fr.apd1.visibility_corrected},
             {"phase_offset", fr.apd1.phase_offset},
             {"sigma_visibility", fr.apd1.sigma_visibility}}},
           {"apd2",
            {{"visibility_raw", fr.apd2.visibility_raw},
             {"visibility_corrected", fr.apd2.visibility_corrected},
             {"phase_offset", fr.apd2.phase_offset},
             {"sigma_visibility", fr.apd2.sigma_visibility}}},
           {"background_level", fr.background_level},
           {"calibration", calJson(cal)},
           {"config_hash", cfg.hash()},
           {"seed", cfg.seed}};
    writeJson(out / "fringe_fit.json", j);
    std::cout << "V_raw " << fr.apd1.visibility_raw << ", V_corrected "
              << fr.apd1.visibility_corrected << "\n";
    return 0;
}

int cmdPhasecal(const ExperimentConfig& cfg, const fs::path& out, double noise,
                int points) {
    const GridSpec g = GridSpec::forWaist(cfg.qubit_waist, 128);
    Rng rng(Rng::deriveSeed(cfg.seed, "phasecal"));
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < points; ++i) {
        const double phi = (i + 0.5) * kTwoPi / points;
        const CameraImage img = render_reference(phi, g, cfg.qubit_waist, noise,
                                                 noise > 0 ? &rng : nullptr);
        const double est = extract_phase(img);
        rows.push_back({i * 0.125, phi, est, static_cast<double>(bin_phase(est))});
        if (i == 0 || i == points / 4)
            io::write_intensity_pgm(out / ("reference_" + std::to_string(i) + ".pgm"), img);
    }
    io::write_csv(out / "phase_timeline.csv", {"t", "phi_true", "phi_est", "bin"}, rows);
    std::cout << "phase calibration timeline written (" << points << " images)\n";
    return 0;
}

int cmdTomography(const ExperimentConfig& cfg, const fs::path& out,
                  const std::string& states_arg) {
    const CalibrationRecord cal = calibrate(cfg);
    std::vector<PreparedState> states;
    for (char c : states_arg) states.push_back(prepare_state(cfg, c));
    const RunReport rep = run_tomography(cfg, cal, states);

    std::vector<std::vector<double>> rows;
    for (const auto& s : rep.states) {
        std::vector<double> row;
        for (int i = 0; i < 6; ++i) row.push_back(s.counts.counts[i]);
        for (int i = 0; i < 6; ++i) row.push_back(s.counts.background[i]);
        rows.push_back(row);
    }
    io::write_csv(out / "counts.csv",
                  {"R", "L", "H", "V", "D", "A", "bkg_R", "bkg_L", "bkg_H", "bkg_V",
                   "bkg_D", "bkg_A"},
                  rows);
    writeJson(out / "tomography_report.json", reportJson(cfg, rep));
    std::cout << "average fidelity raw " << rep.avg_raw << ", corrected "
              << rep.avg_corr << "\n";
    return 0;
}

int cmdSweep(const ExperimentConfig& cfg, const fs::path& out, double nbar_min,
             double nbar_max, int points) {
    const CalibrationRecord cal = calibrate(cfg);
    std::vector<double> nbars;
    for (int i = 0; i < points; ++i)
        nbars.push_back(nbar_min *
                        std::pow(nbar_max / nbar_min, i / std::max(1.0, points - 1.0)));
    const auto sweep = run_fidelity_sweep(cfg, cal, nbars);
    std::vector<std::vector<double>> rows;
    for (const auto& p : sweep)
        rows.push_back({p.nbar, p.f_raw, p.f_raw_sigma, p.f_corr, p.f_corr_sigma,
                        p.threshold, p.threshold_lo, p.threshold_hi});
    io::write_csv(out / "fidelity_sweep.csv",
                  {"nbar", "F_raw", "sigma_raw", "F_corrected", "sigma_corrected",
                   "F_classical", "F_classical_eta_hi", "F_classical_eta_lo"},
                  rows);
    std::cout << "sweep written (" << points << " points)\n";
    return 0;
}

int cmdBenchmark(const ExperimentConfig& cfg, const fs::path& out, double fidelity,
                 double fidelity_sigma) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 50; ++i) {
        const double nb = 0.05 * std::pow(5.0 / 0.05, i / 49.0);
        rows.push_back({nb, classical_threshold(nb, 1.0, cfg.include_vacuum_in_benchmark),
                        classical_threshold(nb, cfg.eta_target,
                                            cfg.include_vacuum_in_benchmark),
                        classical_threshold(nb, std::min(1.0, cfg.eta_target + cfg.eta_sigma),
                                            cfg.include_vacuum_in_benchmark),
                        classical_threshold(nb, std::max(1e-9, cfg.eta_target - cfg.eta_sigma),
                                            cfg.include_vacuum_in_benchmark)});
    }
    io::write_csv(out / "classical_threshold.csv",
                  {"nbar", "F_classical_unit_eta", "F_classical_eta",
                   "F_classical_eta_lo", "F_classical_eta_hi"},
                  rows);

    BenchmarkInput bi;
    bi.mean_photons = cfg.nbar;
    bi.efficiency = cfg.eta_target;
    bi.efficiency_sigma = cfg.eta_sigma;
    bi.fidelity = fidelity;
    bi.fidelity_sigma = fidelity_sigma;
    const Verdict v = verdict(bi);
    json j{{"nbar", cfg.nbar},
           {"eta", cfg.eta_target},
           {"fidelity", fidelity},
           {"threshold", v.threshold},
           {"threshold_lo", v.threshold_lo},
           {"threshold_hi", v.threshold_hi},
           {"sigmas", v.sigmas},
           {"is_quantum", v.is_quantum},
           {"mode_capacity", mode_capacity(cfg.control_waist, cfg.qubit_waist)},
           {"config_hash", cfg.hash()}};
    writeJson(out / "verdict.json", j);
    std::cout << (v.is_quantum ? "QUANTUM" : "classical") << " (" << v.sigmas
              << " sigma above threshold " << v.threshold << ")\n";
    return 0;
}

int cmdCalibrate(const ExperimentConfig& cfg, const fs::path& out) {
    const CalibrationRecord cal = calibrate(cfg);
    json j = calJson(cal);
    j["config_hash"] = cfg.hash();
    j["seed"] = cfg.seed;
    writeJson(out / "calibration.json", j);
    std::cout << "calibration: omega_c " << cal.omega_c << " rad/s, background "
              << cal.background_per_gate << " per gate, v_i "
              << cal.intrinsic_visibility << ", technical loss "
              << cal.technical_loss << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"OAM qubit memory simulator"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file (defaults: paper operating point)");
    app.add_option("--out", g.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", g.seed, "master RNG seed override");
    app.add_option("--threads", g.threads, "worker threads");

    auto* holo = app.add_subcommand("hologram", "write SLM and fork hologram patterns");
    auto* stor = app.add_subcommand("storage", "run the 1-D EIT storage simulation");
    auto* frin = app.add_subcommand("fringe", "simulate the phase-scanned fringe measurement");
    auto* phas = app.add_subcommand("phasecal", "phase-reference image calibration round trip");
    double noise = 0.0;
    int points = 60;
    phas->add_option("--noise", noise, "relative shot-noise level");
    phas->add_option("--points", points, "number of phase points");
    auto* tomo = app.add_subcommand("tomography", "store and tomograph a set of qubits");
    std::string states_arg = "RLHVDA";
    tomo->add_option("--states", states_arg, "subset of RLHVDA");
    auto* swee = app.add_subcommand("fidelity-sweep", "average fidelity vs mean photon number");
    double nbar_min = 0.05, nbar_max = 5.0;
    int sweep_points = 50;
    swee->add_option("--nbar-min", nbar_min);
    swee->add_option("--nbar-max", nbar_max);
    swee->add_option("--points", sweep_points);
    auto* benc = app.add_subcommand("benchmark", "classical threshold curve and verdict");
    double fid = 0.925, fid_sigma = 0.02;
    benc->add_option("--fidelity", fid, "measured average fidelity");
    benc->add_option("--fidelity-sigma", fid_sigma);
    auto* cali = app.add_subcommand("calibrate", "fit noise model to the anchors");

    // let the global --config/--out/--seed/--threads flags appear after the
    // subcommand as well
    for (CLI::App* s : {holo, stor, frin, phas, tomo, swee, benc, cali})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    g.seed_set = seed_opt->count() > 0;

    ExperimentConfig cfg;
    try {
        cfg = loadConfig(g);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    const fs::path out(g.out_dir);
    try {
        std::filesystem::create_directories(out);
        if (holo->parsed()) return cmdHologram(cfg, out);
        if (stor->parsed()) return cmdStorage(cfg, out);
        if (frin->parsed()) return cmdFringe(cfg, out);
        if (phas->parsed()) return cmdPhasecal(cfg, out, noise, points);
        if (tomo->parsed()) return cmdTomography(cfg, out, states_arg);
        if (swee->parsed()) return cmdSweep(cfg, out, nbar_min, nbar_max, sweep_points);
        if (benc->parsed()) return cmdBenchmark(cfg, out, fid, fid_sigma);
        if (cali->parsed()) return cmdCalibrate(cfg, out);
    } catch (const CalibrationError& e) {
        std::cerr << "calibration error: " << e.what() << "\n";
        return kExitCalibration;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
