#include "oam/memory_eit.hpp"

#include <algorithm>
#include <cmath>

namespace oam {

namespace {

double smoothstep01(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

} // namespace

double ControlTimeline::envelope(double t) const {
    const double down_end = ramp_down_start + ramp_duration;
    const double up_start = down_end + storage_time;
    const double up_end = up_start + ramp_duration;
    double u;
    if (t < ramp_down_start) return 1.0;
    if (t < down_end) u = 1.0 - (t - ramp_down_start) / ramp_duration;
    else if (t < up_start) return 0.0;
    else if (t < up_end) u = (t - up_start) / ramp_duration;
    else return 1.0;
    return (shape == RampShape::Smoothstep) ? smoothstep01(u) : std::clamp(u, 0.0, 1.0);
}

double PulseShape::amplitude(double t) const {
    if (t > cutoff) return 0.0;
    // integral of exp(-2 u^2 / w^2) over u<0 is (w/2) sqrt(pi/2)
    const double a = std::sqrt(1.0 / (0.5 * width * std::sqrt(kPi / 2.0)));
    const double u = (t - cutoff) / width;
    return a * std::exp(-u * u);
}

Complex eit_susceptibility(double delta, const LambdaParams& p) {
    p.validate();
    const Complex i(0.0, 1.0);
    const Complex denom_g = p.gamma_0 - i * delta;
    if (p.omega_c > 0.0 && std::abs(denom_g) == 0.0) return {0.0, 0.0}; // exact dark state
    Complex denom = p.gamma_e - i * (delta + p.signal_detuning);
    if (p.omega_c > 0.0) denom += p.omega_c * p.omega_c / denom_g;
    return p.gamma_e / denom;
}

double group_delay(const LambdaParams& p) {
    // Transmission exp(-(OD/2) chi); phase = -(OD/2) Im chi.
    const double bw = (p.omega_c > 0.0)
        ? p.omega_c * p.omega_c / (p.gamma_e * std::sqrt(p.optical_depth / 2.0))
        : p.gamma_e;
    const double h = 1e-4 * bw;
    const double phi_p = -0.5 * p.optical_depth * eit_susceptibility(+h, p).imag();
    const double phi_m = -0.5 * p.optical_depth * eit_susceptibility(-h, p).imag();
    return (phi_p - phi_m) / (2.0 * h);
}

double calibrate_control(double target_delay, const LambdaParams& p) {
    if (target_delay <= 0.0)
        throw std::invalid_argument("calibrate_control: target_delay must be > 0");
    LambdaParams q = p;
    double lo = 1.0, hi = 1e12; // delay decreasing in omega_c
    q.omega_c = hi;
    if (group_delay(q) > target_delay)
        throw std::domain_error("calibrate_control: unreachable delay");
    q.omega_c = lo;
    if (group_delay(q) < target_delay)
        throw std::domain_error("calibrate_control: unreachable delay");
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        q.omega_c = mid;
        const double d = group_delay(q);
        if (std::abs(d - target_delay) < 1e-3 * target_delay * 0.5) return mid;
        if (d > target_delay) lo = mid;
        else hi = mid;
    }
    return std::sqrt(lo * hi);
}

StorageResult simulate_storage(const PulseShape& pulse, const ControlTimeline& tl,
                               const LambdaParams& p, int nz, double dt_hint) {
    p.validate();
    tl.validate();

    const double d = 0.5 * p.optical_depth;
    const double sd = std::sqrt(d);
    const double gamma = p.gamma_e;
    const double delay = group_delay(p);

    const double dz = 1.0 / nz;
    double dt = std::min(tl.ramp_duration / 20.0, 0.5 * dz * delay);
    if (dt_hint > 0.0) dt = std::min(dt, dt_hint);
    if (dt * std::max(gamma, p.omega_c) > 0.5)
        throw std::domain_error("simulate_storage: grid instability, dt too large "
                                "for the atomic rates");

    const double write_end = std::min(tl.ramp_down_start,
                                      pulse.cutoff + 2.0 * delay + 2.0 * pulse.width);
    const double t_end = write_end + 2.0 * tl.ramp_duration + tl.storage_time +
                         6.0 * delay + 3.0 * pulse.width;
    if (!(dt > 0.0) || t_end / dt > 5e7)
        throw std::domain_error("simulate_storage: grid infeasible, the stable "
                                "step size needs too many steps for this span");
    const int nt = static_cast<int>(std::ceil(t_end / dt));

    const double retrieval_start = tl.ramp_down_start + tl.ramp_duration + tl.storage_time;

    Eigen::VectorXcd E = Eigen::VectorXcd::Zero(nz + 1);
    Eigen::VectorXcd P = Eigen::VectorXcd::Zero(nz + 1);
    Eigen::VectorXcd S = Eigen::VectorXcd::Zero(nz + 1);
    Eigen::VectorXcd Pn(nz + 1), Sn(nz + 1), En(nz + 1);

    const Complex i1(0.0, 1.0);
    const Complex cP = -(gamma + i1 * p.signal_detuning);
    const Complex cS = -(p.gamma_0 + i1 * p.two_photon_detuning);

    StorageResult res;
    res.time.reserve(nt + 1);
    res.input_power.reserve(nt + 1);
    res.output_power.reserve(nt + 1);

    double e_in = 0.0, e_leak = 0.0, e_ret = 0.0, e_abs = 0.0;

    // one RK4 step of the atomic pair at fixed E
    auto atomStep = [&](Complex& Pz, Complex& Sz, Complex Ez, double t0) {
        auto deriv = [&](Complex Pv, Complex Sv, double tv, Complex& dP, Complex& dS) {
            const double om = p.omega_c * tl.envelope(tv);
            dP = cP * Pv + i1 * sd * gamma * Ez + i1 * om * Sv;
            dS = cS * Sv + i1 * om * Pv;
        };
        Complex k1p, k1s, k2p, k2s, k3p, k3s, k4p, k4s;
        deriv(Pz, Sz, t0, k1p, k1s);
        deriv(Pz + 0.5 * dt * k1p, Sz + 0.5 * dt * k1s, t0 + 0.5 * dt, k2p, k2s);
        deriv(Pz + 0.5 * dt * k2p, Sz + 0.5 * dt * k2s, t0 + 0.5 * dt, k3p, k3s);
        deriv(Pz + dt * k3p, Sz + dt * k3s, t0 + dt, k4p, k4s);
        Pz += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        Sz += dt / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    };

    for (int n = 0; n < nt; ++n) {
        const double t = n * dt;

        // predictor: atoms driven by E^n
        Pn = P; Sn = S;
        for (int j = 0; j <= nz; ++j) atomStep(Pn(j), Sn(j), E(j), t);
        En(0) = pulse.amplitude(t + dt);
        for (int j = 0; j < nz; ++j)
            En(j + 1) = En(j) + i1 * sd * dz * 0.5 * (Pn(j) + Pn(j + 1));

        // corrector: atoms driven by the time-averaged field
        Pn = P; Sn = S;
        for (int j = 0; j <= nz; ++j)
            atomStep(Pn(j), Sn(j), 0.5 * (E(j) + En(j)), t);
        En(0) = pulse.amplitude(t + dt);
        for (int j = 0; j < nz; ++j)
            En(j + 1) = En(j) + i1 * sd * dz * 0.5 * (Pn(j) + Pn(j + 1));

        // energy bookkeeping (trapezoid in t)
        const double in_old = std::norm(E(0)), in_new = std::norm(En(0));
        const double out_old = std::norm(E(nz)), out_new = std::norm(En(nz));
        e_in += 0.5 * dt * (in_old + in_new);
        double pw_old = 0.0, pw_new = 0.0;
        for (int j = 0; j <= nz; ++j) {
            const double w = (j == 0 || j == nz) ? 0.5 : 1.0;
            pw_old += w * (std::norm(P(j)) + (p.gamma_0 / gamma) * std::norm(S(j)));
            pw_new += w * (std::norm(Pn(j)) + (p.gamma_0 / gamma) * std::norm(Sn(j)));
        }
        e_abs += 0.5 * dt * 2.0 * dz * (pw_old + pw_new);
        const double e_out_step = 0.5 * dt * (out_old + out_new);
        if (t + dt < retrieval_start) e_leak += e_out_step;
        else e_ret += e_out_step;

        E = En; P = Pn; S = Sn;

        res.time.push_back(t + dt);
        res.input_power.push_back(in_new);
        res.output_power.push_back(out_new);
    }

    double stored_residual = 0.0;
    for (int j = 0; j <= nz; ++j) {
        const double w = (j == 0 || j == nz) ? 0.5 : 1.0;
        stored_residual += w * (std::norm(P(j)) + std::norm(S(j)));
    }
    stored_residual *= dz / gamma;

    res.bare_efficiency = (e_in > 0.0) ? e_ret / e_in : 0.0;
    res.absorbed_fraction = (e_in > 0.0) ? e_abs / e_in : 0.0;
    res.energy_residual = (e_in > 0.0)
        ? std::abs(e_in - e_leak - e_ret - e_abs - stored_residual) / e_in
        : 0.0;
    res.channel.amplitude_transmission = std::sqrt(res.bare_efficiency);
    res.channel.leak_fraction = (e_in > 0.0) ? e_leak / e_in : 0.0;
    res.channel.delay = delay;
    return res;
}

Complex decoherence_factor(double t_store, double tau, bool gaussian) {
    if (t_store < 0.0) throw std::invalid_argument("decoherence_factor: t_store must be >= 0");
    const double x = t_store / tau;
    return gaussian ? std::exp(-0.5 * x * x) : std::exp(-0.5 * x);
}

double motional_dephasing_time(double angle, double temperature,
                               double wavelength, double mass) {
    if (angle <= 0.0) throw std::invalid_argument("motional_dephasing_time: angle must be > 0");
    const double ks = (4.0 * kPi / wavelength) * std::sin(0.5 * angle);
    const double sigma_v = std::sqrt(kBoltzmann * temperature / mass);
    return 1.0 / (ks * sigma_v);
}

StoredQubit store_qubit(const OamQubit& q, const StorageChannel& ch,
                        const QubitChannelPerturbation& pert) {
    StoredQubit out;
    const Complex t = ch.amplitude_transmission;
    out.state.alpha = q.alpha * t;
    out.state.beta = q.beta * t * (1.0 - pert.differential_loss) *
                     std::polar(1.0, pert.differential_phase);
    const double in2 = q.squaredNorm();
    out.success_probability = (in2 > 0.0) ? out.state.squaredNorm() / in2 : 0.0;
    return out;
}

} // namespace oam
