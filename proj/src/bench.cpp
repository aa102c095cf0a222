#include "oam/bench.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oam {

double classical_fidelity_fock(int n_photons) {
    if (n_photons < 0)
        throw std::invalid_argument("classical_fidelity_fock: N must be >= 0");
    return (n_photons + 1.0) / (n_photons + 2.0);
}

namespace {

// Poisson pmf up to the point where the residual tail drops below 1e-12.
std::vector<double> poissonPmf(double nbar) {
    std::vector<double> p;
    double pk = std::exp(-nbar);
    double cum = pk;
    p.push_back(pk);
    for (int k = 1; k < 4096; ++k) {
        pk *= nbar / k;
        p.push_back(pk);
        cum += pk;
        if (1.0 - cum < 1e-12 && k > nbar) break;
    }
    return p;
}

} // namespace

double classical_threshold(double nbar, double eta, bool include_vacuum) {
    if (nbar <= 0.0) throw std::invalid_argument("classical_threshold: nbar must be > 0");
    if (eta <= 0.0 || eta > 1.0)
        throw std::invalid_argument("classical_threshold: eta must be in (0,1]");

    std::vector<double> p = poissonPmf(nbar);
    if (!include_vacuum) {
        const double p0 = p[0];
        p[0] = 0.0;
        for (auto& x : p) x /= (1.0 - p0);
    }

    // accept from the largest N downward; (N+1)/(N+2) is increasing in N
    double budget = eta;
    double acc = 0.0;
    for (int n = static_cast<int>(p.size()) - 1; n >= 0 && budget > 0.0; --n) {
        const double take = std::min(budget, p[n]);
        acc += take * classical_fidelity_fock(n);
        budget -= take;
    }
    // if the truncated pmf mass falls short of eta (cannot happen for a
    // proper pmf), the residual budget is treated as vacuum-like guessing
    acc += budget * 0.5;
    return acc / eta;
}

Verdict verdict(const BenchmarkInput& b) {
    b.validate();
    Verdict v;
    v.threshold = classical_threshold(b.mean_photons, b.efficiency);
    const double elo = std::clamp(b.efficiency - b.efficiency_sigma, 1e-12, 1.0);
    const double ehi = std::clamp(b.efficiency + b.efficiency_sigma, 1e-12, 1.0);
    v.threshold_hi = classical_threshold(b.mean_photons, elo); // threshold grows as eta shrinks
    v.threshold_lo = classical_threshold(b.mean_photons, ehi);
    const double sigma_thr = 0.5 * (v.threshold_hi - v.threshold_lo);
    const double sigma_tot = std::hypot(b.fidelity_sigma, sigma_thr);
    v.sigmas = (sigma_tot > 0.0) ? (b.fidelity - v.threshold) / sigma_tot
                                 : (b.fidelity > v.threshold ? 1e9 : 0.0);
    v.is_quantum = v.sigmas > 0.0;
    return v;
}

int mode_capacity(double control_waist, double qubit_waist, double coverage) {
    if (control_waist <= 0.0 || qubit_waist <= 0.0)
        throw std::invalid_argument("mode_capacity: waists must be > 0");
    // ring radius of LG(l): w0 * sqrt(l/2) <= coverage * control waist
    const double ratio = coverage * control_waist / qubit_waist;
    return std::max(1, static_cast<int>(std::floor(2.0 * ratio * ratio)));
}

} // namespace oam
