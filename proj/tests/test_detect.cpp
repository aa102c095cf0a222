#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oam/detect.hpp"
#include "oam/phase_ref.hpp"

#include <cmath>

using namespace oam;

namespace {

AnalyzerConfig ideal_config() {
    AnalyzerConfig c;
    c.mean_photons = 1.0;
    return c;
}

// squared projection |<b|q>|^2 from the exact qubit algebra
double proj2(char basis, const OamQubit& q) {
    const OamQubit b = cardinal_state(basis);
    return std::norm(std::conj(b.alpha) * q.alpha + std::conj(b.beta) * q.beta);
}

std::vector<double> exact_fringe(const OamQubit& q, const AnalyzerConfig& cfg,
                                 int detector) {
    std::vector<double> mu(kPhaseBins);
    for (int b = 0; b < kPhaseBins; ++b) {
        const ApdRates r = apd_rates(q, bin_center(b), cfg);
        mu[b] = (detector == 1) ? r.mu1 : r.mu2;
    }
    return mu;
}

const std::vector<std::uint64_t> kOnePulse(kPhaseBins, 1);

} // namespace

TEST_CASE("phase settings read the stated bases exactly") {
    const AnalyzerConfig cfg = ideal_config();
    const struct { double phi; char apd1; char apd2; } table[] = {
        {0.0, 'V', 'H'}, {0.5 * kPi, 'D', 'A'}, {kPi, 'H', 'V'}, {1.5 * kPi, 'A', 'D'}};
    for (char c : {'R', 'L', 'H', 'V', 'D', 'A'}) {
        const OamQubit q = cardinal_state(c);
        for (const auto& row : table) {
            const ApdRates r = apd_rates(q, row.phi, cfg);
            // ideal balanced analyzer: mu = 1/2 |<basis|q>|^2 per detector
            CHECK(std::abs(r.mu1 - 0.5 * proj2(row.apd1, q)) < 1e-12);
            CHECK(std::abs(r.mu2 - 0.5 * proj2(row.apd2, q)) < 1e-12);
        }
    }
}

TEST_CASE("phase-basis table cross-checked against mode-kernel inner products") {
    const GridSpec g = GridSpec::forWaist(50e-6);
    const AnalyzerConfig cfg = ideal_config();
    const OamQubit q = bloch_state(1.1, 2.4);
    const TransverseField fq = qubit_field(q, 50e-6, g);
    const TransverseField fv = qubit_field(cardinal_state('V'), 50e-6, g);
    const double p_field = std::norm(overlap(fv, fq));
    CHECK(std::abs(apd_rates(q, 0.0, cfg).mu1 - 0.5 * p_field) < 1e-6);
}

TEST_CASE("pole states show no fringe") {
    const AnalyzerConfig cfg = ideal_config();
    for (int b = 0; b < kPhaseBins; ++b) {
        const ApdRates r = apd_rates(cardinal_state('R'), bin_center(b), cfg);
        CHECK(std::abs(r.mu1 - r.mu2) < 1e-15);
        CHECK(std::abs(r.mu1 - 0.25) < 1e-15);
    }
}

TEST_CASE("splitter unitarity: total rate is phase independent") {
    AnalyzerConfig cfg = ideal_config();
    cfg.background_per_gate = 0.01;
    const OamQubit q = bloch_state(0.9, 0.7);
    const ApdRates r0 = apd_rates(q, 0.3, cfg);
    for (double phi : {0.9, 2.2, 4.4, 6.0}) {
        const ApdRates r = apd_rates(q, phi, cfg);
        CHECK(std::abs((r.mu1 + r.mu2) - (r0.mu1 + r0.mu2)) < 1e-9);
    }
}

TEST_CASE("blocked paths read the pole populations") {
    AnalyzerConfig cfg = ideal_config();
    cfg.background_per_gate = 0.02;
    const OamQubit q = bloch_state(1.2, 0.4);
    const ApdRates rr = blocked_rates(q, Arm::Right, cfg);
    const ApdRates rl = blocked_rates(q, Arm::Left, cfg);
    // one open path: half the background per detector, rate follows |a|^2
    CHECK(std::abs(rr.mu1 + rr.mu2 - (0.5 * std::norm(q.alpha) + 0.02)) < 1e-12);
    CHECK(std::abs(rl.mu1 + rl.mu2 - (0.5 * std::norm(q.beta) + 0.02)) < 1e-12);
    const ApdRates hh = blocked_rates(cardinal_state('H'), Arm::Right, cfg);
    const ApdRates hl = blocked_rates(cardinal_state('H'), Arm::Left, cfg);
    CHECK(std::abs(hh.mu1 - hl.mu1) < 1e-15);
}

TEST_CASE("fringe fit on exact ideal |A> rates has unit visibility") {
    const AnalyzerConfig cfg = ideal_config();
    const FringeFit f = fringe_fit(exact_fringe(cardinal_state('A'), cfg, 1),
                                   kOnePulse, 0.0);
    CHECK(f.visibility_raw == doctest::Approx(1.0).epsilon(1e-6));
    // APD1 maximal at phi = 3pi/2 for |A>
    CHECK(std::abs(std::fmod(f.phase_offset + kTwoPi, kTwoPi) - 1.5 * kPi) < 1e-6);
}

TEST_CASE("APD1 and APD2 fringes are pi out of phase") {
    AnalyzerConfig cfg = ideal_config();
    cfg.intrinsic_visibility = 0.9;
    cfg.background_per_gate = 0.02;
    const OamQubit q = cardinal_state('A');
    const FringeFit f1 = fringe_fit(exact_fringe(q, cfg, 1), kOnePulse, 0.02);
    const FringeFit f2 = fringe_fit(exact_fringe(q, cfg, 2), kOnePulse, 0.02);
    double d = std::fmod(std::abs(f1.phase_offset - f2.phase_offset), kTwoPi);
    if (d > kPi) d = kTwoPi - d;
    CHECK(d == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("V_raw <= V_corrected <= 1 over a background sweep") {
    AnalyzerConfig cfg = ideal_config();
    cfg.intrinsic_visibility = 0.965;
    for (double bkg : {0.0, 0.002, 0.01, 0.05}) {
        cfg.background_per_gate = bkg;
        const FringeFit f = fringe_fit(exact_fringe(cardinal_state('A'), cfg, 1),
                                       kOnePulse, bkg);
        CHECK(f.visibility_raw <= f.visibility_corrected + 1e-12);
        CHECK(f.visibility_corrected <= 1.0 + 1e-9);
        CHECK(f.visibility_corrected == doctest::Approx(0.965).epsilon(1e-6));
    }
}

TEST_CASE("fringe_fit rejects sparse data") {
    std::vector<double> mu(kPhaseBins, 0.1);
    std::vector<std::uint64_t> pulses(kPhaseBins, 0);
    for (int b = 0; b < 10; ++b) pulses[b] = 100;
    CHECK_THROWS_AS((void)fringe_fit(mu, pulses, 0.0), std::invalid_argument);
}

TEST_CASE("Poisson sampler statistics and determinism") {
    Rng rng(123);
    const double mu = 0.05;
    const std::uint64_t n = 1000000;
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(mu));
    const double mean = sum / n;
    CHECK(std::abs(mean - mu) < 3.0 * std::sqrt(mu / n));

    const Rng s(77);
    const ClickRecord a = sample_clicks(0.3, 0.1, 2000, s, 4);
    const ClickRecord b = sample_clicks(0.3, 0.1, 2000, Rng(77), 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].trial == b[i].trial);
        CHECK(a[i].detector == b[i].detector);
        CHECK(a[i].bin == b[i].bin);
    }
    CHECK(sample_clicks(0.0, 0.0, 100, s).empty());
}

TEST_CASE("sampled fringes converge to the exact rates") {
    AnalyzerConfig cfg = ideal_config();
    cfg.mean_photons = 0.6;
    cfg.intrinsic_visibility = 0.965;
    cfg.background_per_gate = 0.003;
    const OamQubit q = cardinal_state('A');
    const FringeFit exact = fringe_fit(exact_fringe(q, cfg, 1), kOnePulse,
                                       cfg.background_per_gate);

    auto sampled = [&](std::uint64_t per_bin, std::uint64_t seed) {
        std::vector<double> counts(kPhaseBins, 0.0);
        std::vector<std::uint64_t> pulses(kPhaseBins, per_bin);
        const Rng master(seed);
        for (int b = 0; b < kPhaseBins; ++b) {
            const ApdRates r = apd_rates(q, bin_center(b), cfg);
            const ClickRecord rec =
                sample_clicks(r.mu1, 0.0, per_bin, master.stream("bin", b), b);
            counts[b] = bin_clicks(rec, 1)[b] / static_cast<double>(per_bin);
        }
        return fringe_fit(counts, pulses, cfg.background_per_gate);
    };

    const FringeFit f4 = sampled(10000 / kPhaseBins + 1, 1);
    const FringeFit f6 = sampled(1000000 / kPhaseBins + 1, 1);
    CHECK(std::abs(f6.visibility_raw - exact.visibility_raw) < 0.01);
    CHECK(std::abs(f6.visibility_raw - exact.visibility_raw) <
          4.0 * f6.sigma_visibility + 1e-4);
    // the fitted uncertainty shrinks as 1/sqrt(N)
    const double ratio = f4.sigma_visibility / f6.sigma_visibility;
    CHECK(ratio > 5.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("bin_clicks validates and histograms") {
    ClickRecord rec;
    rec.push_back({0, 1, 3, 0.0});
    rec.push_back({1, 2, 3, 5e-6});
    rec.push_back({2, 1, 3, 1e-5});
    const std::vector<double> h1 = bin_clicks(rec, 1);
    CHECK(h1[3] == 2.0);
    CHECK(bin_clicks(rec, 2)[3] == 1.0);
    rec.push_back({3, 1, 99, 0.0});
    CHECK_THROWS_AS((void)bin_clicks(rec, 1), std::invalid_argument);
}
