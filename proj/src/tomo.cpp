#include "oam/tomo.hpp"

#include <algorithm>
#include <cmath>

namespace oam {

namespace {

void pairStokes(double a, double b, double& s, double& sigma) {
    const double tot = a + b;
    if (tot <= 0.0)
        throw std::invalid_argument("stokes_from_counts: empty basis pair");
    s = (a - b) / tot;
    // var[(a-b)/(a+b)] = 4ab/(a+b)^3 for independent Poisson counts
    const double ag = std::max(a, 0.25), bg = std::max(b, 0.25);
    sigma = 2.0 * std::sqrt(ag * bg / ((ag + bg) * (ag + bg) * (ag + bg)));
}

Complex qc(const OamQubit& q, int i) { return i == 0 ? q.alpha : q.beta; }

} // namespace

StokesVector stokes_from_counts(const CountsTable& t, double extra_phase_sigma) {
    t.validate();
    StokesVector s;
    pairStokes(t.counts[kR], t.counts[kL], s.s3, s.sigma3);
    pairStokes(t.counts[kH], t.counts[kV], s.s1, s.sigma1);
    pairStokes(t.counts[kD], t.counts[kA], s.s2, s.sigma2);
    if (extra_phase_sigma > 0.0) {
        // a phase error rotates the equatorial components into each other
        const double seq = std::hypot(s.s1, s.s2);
        s.sigma1 = std::hypot(s.sigma1, extra_phase_sigma * seq);
        s.sigma2 = std::hypot(s.sigma2, extra_phase_sigma * seq);
    }
    return s;
}

DensityMatrix2 reconstruct(const StokesVector& s) {
    DensityMatrix2 rho;
    rho(0, 0) = 0.5 * (1.0 + s.s3);
    rho(1, 1) = 0.5 * (1.0 - s.s3);
    rho(0, 1) = 0.5 * Complex(s.s1, -s.s2);
    rho(1, 0) = 0.5 * Complex(s.s1, s.s2);
    return rho;
}

DensityMatrix2 physical_project(const DensityMatrix2& rho) {
    const DensityMatrix2 herm = 0.5 * (rho + rho.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<DensityMatrix2> es(herm);
    Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
    const double tr = ev.sum();
    if (tr <= 0.0)
        throw std::invalid_argument("physical_project: zero matrix");
    ev /= tr;
    return es.eigenvectors() * ev.asDiagonal().toDenseMatrix().cast<Complex>() *
           es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix2& rho, const OamQubit& psi) {
    const OamQubit p = psi.normalized();
    Complex f(0.0, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            f += std::conj(qc(p, i)) * rho(i, j) * qc(p, j);
    return std::clamp(f.real(), 0.0, 1.0);
}

double fidelity_sigma(const StokesVector& s, const OamQubit& psi) {
    // F = (1 + n . S)/2 with n the Bloch vector of psi
    const OamQubit p = psi.normalized();
    const double n1 = 2.0 * (std::conj(p.alpha) * p.beta).real();
    const double n2 = -2.0 * (std::conj(p.alpha) * p.beta).imag();
    const double n3 = std::norm(p.alpha) - std::norm(p.beta);
    return 0.5 * std::sqrt(n1 * n1 * s.sigma1 * s.sigma1 +
                           n2 * n2 * s.sigma2 * s.sigma2 +
                           n3 * n3 * s.sigma3 * s.sigma3);
}

CountsTable background_subtract(const CountsTable& t) {
    t.validate();
    CountsTable out = t;
    for (int i = 0; i < 6; ++i) {
        const double c = t.counts[i] - t.background[i];
        if (c < 0.0) out.clamped = true;
        out.counts[i] = std::max(0.0, c);
        out.background[i] = 0.0;
    }
    return out;
}

double trace_distance(const DensityMatrix2& a, const DensityMatrix2& b) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix2> es(a - b);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

CountsTable exact_counts(const DensityMatrix2& rho, double pulses) {
    CountsTable t;
    for (int i = 0; i < 6; ++i) {
        const OamQubit psi = cardinal_state(kOutcomeNames[i]);
        t.counts[i] = pulses * fidelity(rho, psi);
        t.pulses[i] = pulses;
    }
    return t;
}

} // namespace oam
