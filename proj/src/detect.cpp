#include "oam/detect.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace oam {

namespace {

// Background is path-borne (control-field leakage traversing the
// projectors): each open interferometer path contributes half of the
// per-gate background to each detector.
struct ArmAmps {
    Complex ar, al;
    double gain; // nbar * detector efficiency
};

ArmAmps armAmplitudes(const OamQubit& q, const AnalyzerConfig& cfg) {
    ArmAmps a;
    const double c = std::sqrt(cfg.arm_mode_match);
    a.ar = std::sqrt(cfg.splitter_ratio) * cfg.right_arm_transmission * c * q.alpha;
    a.al = std::sqrt(1.0 - cfg.splitter_ratio) * cfg.left_arm_transmission * c * q.beta;
    a.gain = cfg.mean_photons * cfg.detector_efficiency;
    return a;
}

} // namespace

ApdRates apd_rates(const OamQubit& q, double phi, const AnalyzerConfig& cfg) {
    cfg.validate();
    const ArmAmps a = armAmplitudes(q, cfg);
    const double rf = cfg.fiber_splitter_ratio;
    const double cross = 2.0 * std::sqrt(rf * (1.0 - rf)) * cfg.intrinsic_visibility *
                         (std::conj(a.ar) * a.al * std::polar(1.0, phi)).real();
    const double common = rf * std::norm(a.ar) + (1.0 - rf) * std::norm(a.al);
    const double common2 = (1.0 - rf) * std::norm(a.ar) + rf * std::norm(a.al);
    ApdRates r;
    r.mu1 = a.gain * (common - cross) + cfg.background_per_gate;
    r.mu2 = a.gain * (common2 + cross) + cfg.background_per_gate;
    return r;
}

ApdRates blocked_rates(const OamQubit& q, Arm open_arm, const AnalyzerConfig& cfg) {
    cfg.validate();
    const ArmAmps a = armAmplitudes(q, cfg);
    const double rf = cfg.fiber_splitter_ratio;
    const double p = (open_arm == Arm::Right) ? std::norm(a.ar) : std::norm(a.al);
    const double bkg = 0.5 * cfg.background_per_gate; // one path open
    ApdRates r;
    r.mu1 = a.gain * rf * p + bkg;
    r.mu2 = a.gain * (1.0 - rf) * p + bkg;
    return r;
}

ClickRecord sample_clicks(double mu1, double mu2, std::uint64_t pulses,
                          const Rng& stream, int bin, std::uint64_t trial_offset) {
    if (mu1 < 0.0 || mu2 < 0.0)
        throw std::invalid_argument("sample_clicks: negative mean counts");
    ClickRecord rec;
    const double period = 5e-6; // memory trial period
    for (std::uint64_t t = 0; t < pulses; ++t) {
        Rng r = stream.stream("trial", trial_offset + t);
        const std::uint64_t k1 = r.poisson(mu1);
        const std::uint64_t k2 = r.poisson(mu2);
        const double ts = static_cast<double>(trial_offset + t) * period;
        for (std::uint64_t i = 0; i < k1; ++i)
            rec.push_back({trial_offset + t, 1, bin, ts});
        for (std::uint64_t i = 0; i < k2; ++i)
            rec.push_back({trial_offset + t, 2, bin, ts});
    }
    return rec;
}

std::vector<double> bin_clicks(const ClickRecord& rec, int detector) {
    std::vector<double> counts(kPhaseBins, 0.0);
    for (const auto& e : rec) {
        if (e.detector != detector) continue;
        if (e.bin < 0 || e.bin >= kPhaseBins)
            throw std::invalid_argument("bin_clicks: bin id out of range");
        counts[e.bin] += 1.0;
    }
    return counts;
}

FringeFit fringe_fit(const std::vector<double>& bin_mean_counts,
                     const std::vector<std::uint64_t>& bin_pulses,
                     double background) {
    const int n = static_cast<int>(bin_mean_counts.size());
    if (static_cast<int>(bin_pulses.size()) != n)
        throw std::invalid_argument("fringe_fit: size mismatch");
    int populated = 0;
    for (int b = 0; b < n; ++b)
        if (bin_pulses[b] > 0) ++populated;
    if (populated < 20)
        throw std::invalid_argument("fringe_fit: insufficient data, need >= 20 populated bins");

    // model: m = a + b cos(phi) + c sin(phi), Poisson weights. Weighting by
    // the observed counts correlates the noise with the weight and biases the
    // amplitude low, so after a first pass the weights are rebuilt from the
    // fitted model (floored at one count so empty bins stay finite).
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    Eigen::Vector3d beta = Eigen::Vector3d::Zero();
    for (int pass = 0; pass < 3; ++pass) {
        Eigen::Matrix3d xtx = Eigen::Matrix3d::Zero();
        Eigen::Vector3d xty = Eigen::Vector3d::Zero();
        for (int b = 0; b < n; ++b) {
            if (bin_pulses[b] == 0) continue;
            const double phi = (b + 0.5) * kTwoPi / n;
            const Eigen::Vector3d x(1.0, std::cos(phi), std::sin(phi));
            const double m = bin_mean_counts[b];
            const double pb = static_cast<double>(bin_pulses[b]);
            const double level = (pass == 0) ? m : x.dot(beta);
            const double var = std::max(level, 1.0 / pb) / pb;
            const double w = 1.0 / var;
            xtx += w * x * x.transpose();
            xty += w * x * m;
        }
        cov = xtx.inverse();
        beta = cov * xty;
    }
    const double a = beta(0);
    const double amp = std::hypot(beta(1), beta(2));

    FringeFit f;
    f.mean_level = a;
    f.amplitude = amp;
    f.phase_offset = std::atan2(beta(2), beta(1));
    f.background = background;
    f.visibility_raw = (a > 0.0) ? amp / a : 0.0;
    f.visibility_corrected = (a - background > 0.0) ? amp / (a - background) : 0.0;

    // sigma of V = amp/a by first-order propagation through the covariance
    if (a > 0.0 && amp > 0.0) {
        Eigen::Vector3d g(-amp / (a * a), beta(1) / (amp * a), beta(2) / (amp * a));
        const double var_v = g.transpose() * cov * g;
        f.sigma_visibility = std::sqrt(std::max(var_v, 0.0));
    }
    return f;
}

} // namespace oam
