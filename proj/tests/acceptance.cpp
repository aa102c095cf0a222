// Acceptance gate: one PASS/FAIL line per criterion, exit code = #failures.
// Run through ctest or directly; everything is deterministic (fixed seeds).

#include "oam/experiment.hpp"
#include "oam/holo.hpp"
#include "oam/phase_ref.hpp"
#include "oam/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

using namespace oam;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s — %s\n", criterion, ok ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fringe_bytes(const FringeResult& r) {
    std::ostringstream out;
    out.precision(17);
    for (int b = 0; b < kPhaseBins; ++b)
        out << r.phase[b] << "," << r.counts1[b] << "," << r.counts2[b] << ","
            << r.counts2_scaled[b] << "," << r.pulses[b] << "\n";
    out << r.apd1.visibility_raw << "," << r.apd2.visibility_raw;
    return out.str();
}

std::string report_bytes(const RunReport& r) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& s : r.states) {
        out << s.name << "," << s.f_raw << "," << s.f_corr;
        for (int i = 0; i < 6; ++i) out << "," << s.counts.counts[i];
        out << "\n";
    }
    out << r.avg_raw << "," << r.avg_corr;
    return out.str();
}

std::vector<double> poisson_pmf(double nbar, int kmax) {
    std::vector<double> p(kmax + 1);
    p[0] = std::exp(-nbar);
    for (int k = 1; k <= kmax; ++k) p[k] = p[k - 1] * nbar / k;
    return p;
}

// Exhaustive LP-vertex enumeration on support N <= 10 (tail accepted
// outright), independent of the library's greedy implementation.
double brute_force_threshold(double nbar, double eta, bool include_vacuum) {
    const int nmax = 10;
    std::vector<double> p = poisson_pmf(nbar, 200);
    if (!include_vacuum) {
        const double p0 = p[0];
        p[0] = 0.0;
        for (auto& x : p) x /= (1.0 - p0);
    }
    double tail_mass = 0.0, tail_value = 0.0;
    for (int n = nmax + 1; n < static_cast<int>(p.size()); ++n) {
        tail_mass += p[n];
        tail_value += p[n] * (n + 1.0) / (n + 2.0);
    }
    double best = -1.0;
    for (int mask = 0; mask < (1 << (nmax + 1)); ++mask) {
        double mass = tail_mass, value = tail_value;
        for (int n = 0; n <= nmax; ++n)
            if (mask & (1 << n)) {
                mass += p[n];
                value += p[n] * (n + 1.0) / (n + 2.0);
            }
        if (mass > eta + 1e-15) continue;
        for (int j = -1; j <= nmax; ++j) {
            double m = mass, v = value;
            if (j >= 0) {
                if (mask & (1 << j)) continue;
                const double f = std::min(1.0, (eta - mass) / std::max(p[j], 1e-300));
                m += f * p[j];
                v += f * p[j] * (j + 1.0) / (j + 2.0);
            }
            if (m < eta - 1e-12) continue;
            best = std::max(best, v / eta);
        }
    }
    return best;
}

DensityMatrix2 rho_from_bloch(double s1, double s2, double s3) {
    StokesVector s;
    s.s1 = s1;
    s.s2 = s2;
    s.s3 = s3;
    return reconstruct(s);
}

double circ_err(double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    if (d > kPi) d = kTwoPi - d;
    return d;
}

// ---------------------------------------------------------------------------

void criterion1_fringe(const ExperimentConfig& cfg, const CalibrationRecord& cal) {
    const auto t0 = Clock::now();
    const FringeResult r = run_fringe(cfg, cal);
    const double dt = seconds_since(t0);
    double dphi = std::fmod(std::abs(r.apd1.phase_offset - r.apd2.phase_offset),
                            kTwoPi);
    if (dphi > kPi) dphi = kTwoPi - dphi;
    char buf[256];
    const bool ok = std::abs(r.apd1.visibility_raw - 0.80) <= 0.03 &&
                    std::abs(r.apd1.visibility_corrected - 0.965) <= 0.02 &&
                    std::abs(dphi - kPi) < 0.15 && dt < 30.0;
    std::snprintf(buf, sizeof buf,
                  "V_raw=%.4f (0.80±0.03), V_corr=%.4f (0.965±0.02), "
                  "APD phase gap=%.3f rad (π±0.15), %.1fs (<30s)",
                  r.apd1.visibility_raw, r.apd1.visibility_corrected, dphi, dt);
    report(1, ok, buf);
}

void criterion2_tomography(const ExperimentConfig& cfg,
                           const CalibrationRecord& cal, const RunReport& rep,
                           double runtime) {
    const struct { char name; double table; } ref[] = {
        {'R', 95.1}, {'L', 90.0}, {'V', 90.3}, {'D', 94.0}, {'H', 94.7}, {'A', 90.6}};
    (void)cfg;
    (void)cal;
    std::ostringstream detail;
    detail.precision(2);
    detail << std::fixed;
    for (const auto& s : rep.states) {
        double table = 0.0;
        for (const auto& r : ref)
            if (s.name[0] == r.name) table = r.table;
        const double dev = 100.0 * s.f_raw - table;
        detail << s.name << "=" << 100.0 * s.f_raw << " (ref " << table
               << ", Δ=" << dev;
        if (std::abs(dev) > 4.0)
            detail << ", documented scatter: the noise model is isotropic";
        detail << ") ";
    }
    const double avg_raw = 100.0 * rep.avg_raw;
    const double avg_corr = 100.0 * rep.avg_corr;
    const bool ok = std::abs(avg_raw - 92.5) <= 3.0 &&
                    std::abs(avg_corr - 98.0) <= 2.0 && runtime < 120.0;
    detail << "| avg_raw=" << avg_raw << " (92.5±3), avg_corr=" << avg_corr
           << " (98±2), " << runtime << "s (<2min)";
    report(2, ok, detail.str());
}

void criterion3_sweep(const ExperimentConfig& cfg, const CalibrationRecord& cal) {
    std::vector<double> nbars;
    for (int i = 0; i < 13; ++i)
        nbars.push_back(0.02 * std::pow(1000.0, i / 12.0)); // 0.02 .. 20
    const auto sweep = run_fidelity_sweep(cfg, cal, nbars);

    // contiguous range where the raw fidelity beats the classical threshold
    double lo = 0.0, hi = 0.0;
    for (const auto& p : sweep)
        if (p.f_raw > p.threshold) {
            if (lo == 0.0) lo = p.nbar;
            hi = p.nbar;
        }
    const bool decade = lo > 0.0 && hi / lo >= 10.0;
    const bool small_nbar_drop = sweep.front().f_raw < sweep[6].f_raw - 0.01;
    const bool threshold_to_one = sweep.back().threshold > 0.9;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "quantum over nbar∈[%.3f,%.1f] (span %.0fx, ≥10x), "
                  "F_raw(0.02)=%.3f < F_raw(0.6)=%.3f (background drop), "
                  "threshold(20)=%.3f (→1)",
                  lo, hi, lo > 0.0 ? hi / lo : 0.0, sweep.front().f_raw,
                  sweep[6].f_raw, sweep.back().threshold);
    report(3, decade && small_nbar_drop && threshold_to_one, buf);
}

void criterion4_memory(const CalibrationRecord& cal) {
    const double eta = channel_for(cal).efficiency();
    char buf[256];
    const bool ok = std::abs(cal.group_delay - 200e-9) <= 20e-9 &&
                    std::abs(cal.slowing_factor - 3e4) <= 3e3 &&
                    std::abs(eta - 0.15) <= 0.02;
    std::snprintf(buf, sizeof buf,
                  "delay=%.1fns (200±20), slowing=%.3g (3e4±10%%), "
                  "efficiency=%.3f (0.15±0.02)",
                  1e9 * cal.group_delay, cal.slowing_factor, eta);
    report(4, ok, buf);
}

void criterion5_tomo_oracle() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string why = "exact round trip 1e-12, mixed-state fidelity, "
                      "projection contraction";

    Rng rng(314);
    for (int i = 0; i < 16 && ok; ++i) {
        const double u = 2.0 * rng.uniform() - 1.0;
        const double ph = kTwoPi * rng.uniform();
        const double r = 0.999 * std::cbrt(rng.uniform());
        const double s = std::sqrt(1.0 - u * u);
        const DensityMatrix2 rho =
            rho_from_bloch(r * s * std::cos(ph), r * s * std::sin(ph), r * u);
        const DensityMatrix2 back =
            reconstruct(stokes_from_counts(exact_counts(rho, 1e5)));
        if (trace_distance(rho, back) >= 1e-12) {
            ok = false;
            why = "round trip exceeded 1e-12";
        }
    }

    const DensityMatrix2 mixed = rho_from_bloch(0.0, 0.0, 0.0);
    for (char c : {'R', 'L', 'H', 'V', 'D', 'A'})
        if (std::abs(fidelity(mixed, cardinal_state(c)) - 0.5) > 1e-12) {
            ok = false;
            why = "maximally mixed state fidelity != 1/2";
        }

    const DensityMatrix2 truth = rho_from_bloch(0.9, 0.0, 0.0);
    for (int i = 0; i < 400 && ok; ++i) {
        Rng r = rng.stream("draw", i);
        CountsTable t = exact_counts(truth, 100.0);
        for (int k = 0; k < 6; ++k)
            t.counts[k] = static_cast<double>(r.poisson(t.counts[k]));
        const DensityMatrix2 lin = reconstruct(stokes_from_counts(t));
        const DensityMatrix2 clip = physical_project(lin);
        if (trace_distance(clip, truth) > trace_distance(lin, truth) + 1e-12) {
            ok = false;
            why = "projection moved the estimate away from the truth";
        }
    }

    const double dt = seconds_since(t0);
    if (dt >= 60.0) ok = false;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s; %.1fs (<60s)", why.c_str(), dt);
    report(5, ok, buf);
}

void criterion6_benchmark() {
    bool ok = classical_fidelity_fock(1) == 2.0 / 3.0;
    std::string why = ok ? "fock(1)=2/3 exact" : "fock(1) not exactly 2/3";

    double worst = 0.0;
    for (double nbar : {0.2, 0.6, 1.0, 2.0})
        for (int e = 1; e <= 20; ++e) {
            const double eta = 0.05 * e;
            worst = std::max(worst,
                             std::abs(classical_threshold(nbar, eta, true) -
                                      brute_force_threshold(nbar, eta, true)));
        }
    if (worst >= 1e-9) {
        ok = false;
        why = "threshold disagrees with the brute-force oracle";
    }

    bool mono = true;
    double prev_col[21] = {0.0};
    for (int i = 1; i <= 20; ++i) {
        const double nbar = 0.05 * std::pow(100.0, (i - 1) / 19.0);
        double prev = 2.0;
        for (int j = 1; j <= 20; ++j) {
            const double thr = classical_threshold(nbar, 0.05 * j);
            if (thr > prev + 1e-12 || thr < prev_col[j] - 1e-12 || thr < 0.5 ||
                thr >= 1.0)
                mono = false;
            prev = thr;
            prev_col[j] = thr;
        }
    }
    if (!mono) {
        ok = false;
        why = "monotonicity/bounds violated on the 20x20 grid";
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s; max oracle gap %.2e (<1e-9), 20x20 grid %s",
                  why.c_str(), worst, mono ? "monotone" : "violated");
    report(6, ok, buf);
}

void criterion7_modes_holo() {
    bool ok = true;
    std::string why;

    const double w0 = 50e-6;
    const GridSpec g = GridSpec::forWaist(w0);
    std::vector<TransverseField> modes;
    for (int l = -3; l <= 3; ++l)
        for (int p = 0; p <= 2; ++p) modes.push_back(lg_field({l, p, w0}, g));
    double gram = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            gram = std::max(gram, std::abs(overlap(modes[i], modes[j]) -
                                           Complex(i == j ? 1.0 : 0.0, 0.0)));
    if (gram >= 1e-6) {
        ok = false;
        why += "Gram off-unity; ";
    }

    const double fw = optimal_fiber_waist(w0);
    Rng rng(77);
    double comp_lo = 2.0, comp_hi = 0.0;
    for (int i = 0; i < 100; ++i) {
        const OamQubit q =
            bloch_state(std::acos(2.0 * rng.uniform() - 1.0), kTwoPi * rng.uniform());
        const TransverseField f = qubit_field(q, w0, g);
        const Complex pr = project_arm(f, Arm::Right, fw);
        const Complex pl = project_arm(f, Arm::Left, fw);
        const double tot = std::norm(pr) + std::norm(pl);
        comp_lo = std::min(comp_lo, tot);
        comp_hi = std::max(comp_hi, tot);
    }
    const double comp = comp_hi - comp_lo; // state independence of |pR|^2+|pL|^2
    if (comp >= 1e-6) {
        ok = false;
        why += "arm completeness broken; ";
    }

    const double blaze = blaze_first_order_efficiency(160e-6, 20e-6, 792);
    if (blaze < 0.80) {
        ok = false;
        why += "SLM blaze below 0.80; ";
    }

    double route = 0.0;
    for (char c : {'R', 'L', 'H', 'V', 'D', 'A'}) {
        const TransverseField f = qubit_field(cardinal_state(c), w0, g);
        for (Arm arm : {Arm::Right, Arm::Left}) {
            const double a = std::abs(project_arm(f, arm, fw));
            const double b = std::abs(project_arm_physical(f, arm, fw));
            route = std::max(route, std::abs(a - b) / std::max(a, 0.05));
        }
    }
    if (route >= 0.02) {
        ok = false;
        why += "physical projector off by more than 2%; ";
    }

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%sGram err %.1e (<1e-6), completeness err %.1e (<1e-6), "
                  "blaze %.3f (≥0.80), route gap %.4f (<0.02)",
                  why.c_str(), gram, comp, blaze, route);
    report(7, ok, buf);
}

void criterion8_phase() {
    const double w0 = 50e-6;
    const GridSpec g = GridSpec::forWaist(w0, 128);
    double worst = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double phi = (k + 0.5) * kTwoPi / 60.0;
        worst = std::max(worst,
                         circ_err(extract_phase(render_reference(phi, g, w0)), phi));
    }
    const GridSpec gn = GridSpec::forWaist(w0, 96);
    Rng rng(2024);
    int good = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        const double phi = kTwoPi * rng.uniform();
        const CameraImage img = render_reference(phi, gn, w0, 0.05, &rng);
        if (circ_err(extract_phase(img), phi) < 6.0 * kPi / 180.0) ++good;
    }
    char buf[256];
    const bool ok = worst < kPi / 180.0 && good >= static_cast<int>(0.99 * trials);
    std::snprintf(buf, sizeof buf,
                  "noiseless worst err %.3f° (<1°), 5%% noise within one bin in "
                  "%d/%d trials (≥99%%)",
                  worst * 180.0 / kPi, good, trials);
    report(8, ok, buf);
}

void criterion9_determinism(ExperimentConfig cfg, const CalibrationRecord& cal) {
    cfg.fringe_pulses = 20000;
    cfg.tomo_pulses_per_setting = 4000;
    cfg.threads = 1;
    const std::string f1 = fringe_bytes(run_fringe(cfg, cal));
    const std::vector<PreparedState> states = cardinal_states(cfg);
    const std::string t1 = report_bytes(run_tomography(cfg, cal, states));
    const std::string f1b = fringe_bytes(run_fringe(cfg, cal));
    cfg.threads = 4;
    const std::string f4 = fringe_bytes(run_fringe(cfg, cal));
    const std::string t4 = report_bytes(run_tomography(cfg, cal, states));
    const bool repeat_ok = f1 == f1b;
    const bool thread_ok = f1 == f4 && t1 == t4;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "repeat run %s, threads 1 vs 4 %s (fringe + tomography serialized "
                  "to 17 digits)",
                  repeat_ok ? "identical" : "DIFFERS",
                  thread_ok ? "identical" : "DIFFERS");
    report(9, repeat_ok && thread_ok, buf);
}

} // namespace

int main() {
    const ExperimentConfig cfg = ExperimentConfig::defaults();
    const CalibrationRecord cal = calibrate(cfg);

    criterion1_fringe(cfg, cal);

    const auto t2 = Clock::now();
    const RunReport rep = run_tomography(cfg, cal, cardinal_states(cfg));
    criterion2_tomography(cfg, cal, rep, seconds_since(t2));

    criterion3_sweep(cfg, cal);
    criterion4_memory(cal);
    criterion5_tomo_oracle();
    criterion6_benchmark();
    criterion7_modes_holo();
    criterion8_phase();
    criterion9_determinism(cfg, cal);

    std::printf("%d/9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
