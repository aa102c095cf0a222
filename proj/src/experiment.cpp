#include "oam/experiment.hpp"

#include "oam/holo.hpp"
#include "oam/phase_ref.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>

namespace oam {

namespace {

LambdaParams lambdaFor(const ExperimentConfig& cfg) {
    LambdaParams p;
    p.optical_depth = cfg.optical_depth;
    p.gamma_e = cfg.gamma_e;
    p.gamma_0 = cfg.gamma_0;
    p.length = cfg.medium_length;
    return p;
}

GridSpec gridFor(const ExperimentConfig& cfg) {
    GridSpec g = GridSpec::forWaist(cfg.qubit_waist, cfg.grid_n);
    g.wavelength = cfg.wavelength;
    return g;
}

} // namespace

CalibrationRecord calibrate(const ExperimentConfig& cfg) {
    cfg.validate();
    CalibrationRecord cal;

    // memory: control Rabi frequency from the target slow-light delay
    LambdaParams p = lambdaFor(cfg);
    cal.omega_c = calibrate_control(cfg.target_delay, p);
    p.omega_c = cal.omega_c;
    cal.group_delay = group_delay(p);
    cal.slowing_factor = kSpeedOfLight * cal.group_delay / cfg.medium_length;

    PulseShape pulse;
    pulse.width = cfg.pulse_width;
    pulse.cutoff = 4.0 * cfg.pulse_width;
    ControlTimeline tl;
    tl.ramp_down_start = pulse.cutoff + 0.25 * cal.group_delay;
    tl.ramp_duration = cfg.ramp_duration;
    tl.storage_time = cfg.storage_time;
    const StorageResult sim = simulate_storage(pulse, tl, p);
    cal.bare_efficiency = sim.bare_efficiency;
    cal.leak_fraction = sim.channel.leak_fraction;

    cal.decoherence_energy =
        std::norm(decoherence_factor(cfg.storage_time, cfg.memory_time,
                                     cfg.gaussian_decoherence));
    const double eta_model = cal.bare_efficiency * cal.decoherence_energy;
    cal.technical_loss = (eta_model > 0.0) ? cfg.eta_target / eta_model : 0.0;
    cal.channel_efficiency = cfg.eta_target;

    // projector mode matching
    cal.fiber_waist = (cfg.fiber_waist > 0.0) ? cfg.fiber_waist
                                              : optimal_fiber_waist(cfg.qubit_waist);
    cal.arm_mode_match = arm_mode_match(cfg.qubit_waist, cal.fiber_waist);

    // visibility anchors: V_corr fixes v_i, V_raw then fixes the background
    cal.intrinsic_visibility = cfg.v_corr_target;
    if (cfg.v_raw_target > cal.intrinsic_visibility + 1e-12)
        throw CalibrationError("calibrate: anchor infeasible, raw visibility "
                               "exceeds corrected visibility");

    // mean per-pulse fringe signal for a stored equatorial state, no background
    AnalyzerConfig probe;
    probe.mean_photons = cfg.nbar;
    probe.detector_efficiency = cfg.detector_efficiency;
    probe.arm_mode_match = cal.arm_mode_match;
    probe.intrinsic_visibility = cal.intrinsic_visibility;
    probe.background_per_gate = 0.0;
    const StoredQubit stored = store_qubit(cardinal_state('A'), channel_for(cal));
    double s = 0.0;
    for (int b = 0; b < kPhaseBins; ++b)
        s += apd_rates(stored.state, bin_center(b), probe).mu1;
    cal.fringe_signal = s / kPhaseBins;

    cal.background_per_gate =
        cal.fringe_signal * (cal.intrinsic_visibility / cfg.v_raw_target - 1.0);
    if (cal.background_per_gate < 0.0)
        throw CalibrationError("calibrate: anchor infeasible, negative background");
    return cal;
}

StorageChannel channel_for(const CalibrationRecord& cal) {
    StorageChannel ch;
    ch.amplitude_transmission = std::sqrt(cal.channel_efficiency);
    ch.leak_fraction = cal.leak_fraction;
    ch.delay = cal.group_delay;
    return ch;
}

AnalyzerConfig analyzer_for(const ExperimentConfig& cfg, const CalibrationRecord& cal,
                            double nbar) {
    AnalyzerConfig a;
    a.mean_photons = (nbar > 0.0) ? nbar : cfg.nbar;
    a.detector_efficiency = cfg.detector_efficiency;
    a.arm_mode_match = cal.arm_mode_match;
    a.intrinsic_visibility = cal.intrinsic_visibility;
    a.background_per_gate = cfg.background_enabled ? cal.background_per_gate : 0.0;
    a.gate_duration = cfg.trial_period;
    return a;
}

PreparedState prepare_state(const ExperimentConfig& cfg, double theta, double phi) {
    PreparedState st;
    st.ideal = bloch_state(theta, phi);
    char buf[48];
    std::snprintf(buf, sizeof buf, "bloch(%.4f,%.4f)", theta, phi);
    st.name = buf;

    // phase-only SLM encoding applied to the incident Gaussian at the SLM
    // plane, projected back onto the qubit subspace
    GridSpec g;
    g.nx = g.ny = cfg.grid_n;
    g.dx = cfg.slm_pitch;
    g.wavelength = cfg.wavelength;
    const double w = cfg.slm_beam_waist;
    const PhasePattern pat = slm_qubit_pattern(st.ideal, cfg.slm_nx, cfg.slm_ny,
                                               cfg.slm_pitch);
    TransverseField gauss = lg_field({0, 0, w}, g);
    const TransverseField shaped = apply_pattern(gauss, pat);
    const TransverseField r = lg_field({+1, 0, w}, g);
    const TransverseField l = lg_field({-1, 0, w}, g);
    st.prepared = OamQubit{overlap(r, shaped), overlap(l, shaped)}.normalized();
    return st;
}

PreparedState prepare_state(const ExperimentConfig& cfg, char cardinal) {
    const OamQubit q = cardinal_state(cardinal);
    const double theta = 2.0 * std::acos(std::clamp(std::abs(q.alpha), 0.0, 1.0));
    const double phi = (std::abs(q.alpha) > 1e-12 && std::abs(q.beta) > 1e-12)
                           ? std::arg(q.beta / q.alpha)
                           : 0.0;
    PreparedState st = prepare_state(cfg, theta, phi);
    st.name = std::string(1, cardinal);
    st.ideal = q;
    return st;
}

std::vector<PreparedState> cardinal_states(const ExperimentConfig& cfg) {
    std::vector<PreparedState> v;
    for (char c : {'R', 'L', 'H', 'V', 'D', 'A'}) v.push_back(prepare_state(cfg, c));
    return v;
}

FringeResult run_fringe(const ExperimentConfig& cfg, const CalibrationRecord& cal) {
    const AnalyzerConfig an = analyzer_for(cfg, cal, 0.0);
    // the fringe scan characterizes the interferometer itself, so it runs on
    // the reference |A> probe, the same state the calibration anchors use
    const StoredQubit stored = store_qubit(cardinal_state('A'), channel_for(cal));
    const std::uint64_t per_bin = cfg.fringe_pulses / kPhaseBins;
    const Rng master(cfg.seed);

    FringeResult res;
    res.background_level = an.background_per_gate;
    res.phase.resize(kPhaseBins);
    res.counts1.assign(kPhaseBins, 0.0);
    res.counts2.assign(kPhaseBins, 0.0);
    res.counts2_scaled.assign(kPhaseBins, 0.0);
    res.pulses.assign(kPhaseBins, per_bin);

    auto runBin = [&](int b) {
        const double phi = bin_center(b);
        res.phase[b] = phi;
        ApdRates mu = apd_rates(stored.state, phi, an);
        mu.mu2 *= cfg.detector2_transmission;
        const ClickRecord rec =
            sample_clicks(mu.mu1, mu.mu2, per_bin, master.stream("fringe", b), b);
        for (const auto& e : rec)
            (e.detector == 1 ? res.counts1[b] : res.counts2[b]) += 1.0;
        res.counts1[b] /= per_bin;
        res.counts2[b] /= per_bin;
        res.counts2_scaled[b] = res.counts2[b] / cfg.detector2_transmission;
    };

    if (cfg.threads > 1) {
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (int t = 0; t < cfg.threads; ++t)
            futs.push_back(std::async(std::launch::async, [&] {
                for (int b = next.fetch_add(1); b < kPhaseBins; b = next.fetch_add(1))
                    runBin(b);
            }));
        for (auto& f : futs) f.get();
    } else {
        for (int b = 0; b < kPhaseBins; ++b) runBin(b);
    }

    res.apd1 = fringe_fit(res.counts1, res.pulses, an.background_per_gate);
    res.apd2 = fringe_fit(res.counts2_scaled, res.pulses, an.background_per_gate);
    return res;
}

namespace {

StateReport measureState(const ExperimentConfig& cfg, const CalibrationRecord& cal,
                         const PreparedState& st, double nbar, std::uint64_t pulses,
                         const Rng& master, std::uint64_t state_idx) {
    const AnalyzerConfig an = analyzer_for(cfg, cal, nbar);
    const StoredQubit stored = store_qubit(st.prepared, channel_for(cal));

    CountsTable table;
    // blocked R/L settings: both detectors, one path open
    for (int out = kR; out <= kL; ++out) {
        const Arm open = (out == kR) ? Arm::Right : Arm::Left;
        const ApdRates mu = blocked_rates(stored.state, open, an);
        Rng s = master.stream("tomo", state_idx, out);
        double c = 0.0;
        for (std::uint64_t t = 0; t < pulses; ++t) {
            Rng r = s.stream("trial", t);
            c += static_cast<double>(r.poisson(mu.mu1));
            c += static_cast<double>(r.poisson(mu.mu2));
        }
        table.counts[out] = c;
        table.background[out] = static_cast<double>(pulses) * an.background_per_gate;
        table.pulses[out] = static_cast<double>(pulses);
    }

    // rotated bases on APD1: V@0, D@pi/2, H@pi, A@3pi/2, with the phase
    // jittered uniformly inside its 6 degree bin
    const struct { int outcome; double phi; } settings[] = {
        {kV, 0.0}, {kD, 0.5 * kPi}, {kH, kPi}, {kA, 1.5 * kPi}};
    const double bin_w = kTwoPi / kPhaseBins;
    for (const auto& set : settings) {
        Rng s = master.stream("tomo", state_idx, set.outcome);
        double c = 0.0;
        for (std::uint64_t t = 0; t < pulses; ++t) {
            Rng r = s.stream("trial", t);
            const double phi = set.phi + (r.uniform() - 0.5) * bin_w;
            c += static_cast<double>(r.poisson(apd_rates(stored.state, phi, an).mu1));
        }
        table.counts[set.outcome] = c;
        table.background[set.outcome] = static_cast<double>(pulses) * an.background_per_gate;
        table.pulses[set.outcome] = static_cast<double>(pulses);
    }

    const double phase_sigma = bin_w / std::sqrt(12.0);
    StateReport rep;
    rep.name = st.name;
    rep.counts = table;
    rep.stokes_raw = stokes_from_counts(table, phase_sigma);
    const DensityMatrix2 rho_raw = physical_project(reconstruct(rep.stokes_raw));
    rep.f_raw = fidelity(rho_raw, st.ideal);
    rep.f_raw_sigma = fidelity_sigma(rep.stokes_raw, st.ideal);

    const CountsTable corr = background_subtract(table);
    const StokesVector s_corr = stokes_from_counts(corr, phase_sigma);
    const DensityMatrix2 rho_corr = physical_project(reconstruct(s_corr));
    rep.f_corr = fidelity(rho_corr, st.ideal);
    rep.f_corr_sigma = fidelity_sigma(s_corr, st.ideal);
    return rep;
}

} // namespace

RunReport run_tomography(const ExperimentConfig& cfg, const CalibrationRecord& cal,
                         const std::vector<PreparedState>& states,
                         double nbar_override, std::uint64_t pulses_override) {
    const double nbar = (nbar_override > 0.0) ? nbar_override : cfg.nbar;
    const std::uint64_t pulses =
        (pulses_override > 0) ? pulses_override : cfg.tomo_pulses_per_setting;
    const Rng master(cfg.seed);

    RunReport rep;
    rep.calibration = cal;
    rep.config_hash = cfg.hash();
    rep.seed = cfg.seed;
    rep.states.resize(states.size());

    auto runState = [&](std::size_t i) {
        rep.states[i] = measureState(cfg, cal, states[i], nbar, pulses, master, i);
    };
    if (cfg.threads > 1) {
        std::vector<std::future<void>> futs;
        std::atomic<std::size_t> next{0};
        for (int t = 0; t < cfg.threads; ++t)
            futs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next.fetch_add(1); i < states.size();
                     i = next.fetch_add(1))
                    runState(i);
            }));
        for (auto& f : futs) f.get();
    } else {
        for (std::size_t i = 0; i < states.size(); ++i) runState(i);
    }

    auto meanStd = [](const std::vector<double>& v, double& mean, double& sd) {
        mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double acc = 0.0;
        for (double x : v) acc += (x - mean) * (x - mean);
        sd = (v.size() > 1) ? std::sqrt(acc / (v.size() - 1)) : 0.0;
    };
    std::vector<double> raws, corrs;
    for (const auto& s : rep.states) {
        raws.push_back(s.f_raw);
        corrs.push_back(s.f_corr);
    }
    meanStd(raws, rep.avg_raw, rep.std_raw);
    meanStd(corrs, rep.avg_corr, rep.std_corr);

    BenchmarkInput bi;
    bi.mean_photons = nbar;
    bi.efficiency = cal.channel_efficiency;
    bi.efficiency_sigma = cfg.eta_sigma;
    bi.fidelity = rep.avg_raw;
    bi.fidelity_sigma = std::max(rep.std_raw / std::sqrt(double(raws.size())), 1e-6);
    rep.bench = verdict(bi);
    return rep;
}

std::vector<SweepPoint> run_fidelity_sweep(const ExperimentConfig& cfg,
                                           const CalibrationRecord& cal,
                                           const std::vector<double>& nbars) {
    const std::vector<PreparedState> states = cardinal_states(cfg);
    std::vector<SweepPoint> out;
    for (double nb : nbars) {
        if (nb <= 0.0) throw std::invalid_argument("run_fidelity_sweep: nbar must be > 0");
        ExperimentConfig c = cfg;
        c.seed = Rng::deriveSeed(cfg.seed, "sweep", out.size());
        const RunReport rep =
            run_tomography(c, cal, states, nb, cfg.sweep_pulses_per_setting);
        SweepPoint p;
        p.nbar = nb;
        p.f_raw = rep.avg_raw;
        p.f_raw_sigma = rep.std_raw;
        p.f_corr = rep.avg_corr;
        p.f_corr_sigma = rep.std_corr;
        p.threshold = rep.bench.threshold;
        p.threshold_lo = rep.bench.threshold_lo;
        p.threshold_hi = rep.bench.threshold_hi;
        out.push_back(p);
    }
    return out;
}

} // namespace oam
