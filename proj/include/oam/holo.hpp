#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "oam/modes.hpp"

namespace oam {

// Phase-only hologram, values in [0, 2pi).
struct PhasePattern {
    int nx = 792;
    int ny = 600;
    double pitch = 20e-6; // m
    Eigen::ArrayXXd phase; // (ny rows, nx cols)

    PhasePattern() = default;
    PhasePattern(int nx_, int ny_, double pitch_)
        : nx(nx_), ny(ny_), pitch(pitch_), phase(Eigen::ArrayXXd::Zero(ny_, nx_)) {}
};

struct ForkSpec {
    int delta_l = -1;            // OAM units added in first order
    double blaze_period = 25e-6; // m
    double center_x = 0.0;       // m, relative to pattern center
    double center_y = 0.0;
};

enum class Arm { Left, Right };

// SLM preparation pattern for a qubit: spiral phase for the poles, 0/pi
// sector jumps for equal superpositions, arg of the target field otherwise.
PhasePattern slm_qubit_pattern(const OamQubit& q, int nx = 792, int ny = 600,
                               double pitch = 20e-6);

// Blazed fork grating: phase = mod(delta_l*theta + 2pi*x/period, 2pi).
// Throws std::domain_error when the blaze is sampled by fewer than two
// pixels per period.
PhasePattern fork_pattern(const ForkSpec& spec, int nx = 792, int ny = 600,
                          double pitch = 20e-6);

// Pointwise e^{i phi(x,y)} with the pattern resampled (nearest pixel) onto
// the field grid; pattern center maps to grid center.
TransverseField apply_pattern(const TransverseField& f, const PhasePattern& p);

// Fiber-coupled mode projector for one interferometer arm.
// Fast mode-space route: the Right arm unwinds one OAM unit (e^{-i theta}),
// the Left arm adds one (e^{+i theta}); the result is overlapped with the
// fiber's Gaussian mode. For an input qubit_field(q) the Right arm returns
// c*alpha and the Left arm c*beta, with c the fixed mode-match amplitude.
Complex project_arm(const TransverseField& f, Arm arm, double fiber_waist);

// Physical route: blazed fork, Fourier (lens focal) plane, window around the
// first diffraction order, overlap with the fiber mode imaged there. Agrees
// with project_arm on |amplitude| to within 2%.
Complex project_arm_physical(const TransverseField& f, Arm arm,
                             double fiber_waist,
                             double blaze_period = 25e-6);

// Fiber waist maximizing |<Gaussian | e^{-i theta} LG(+1,0,w0)>|^2.
double optimal_fiber_waist(double w0);

// |c|^2 for the arm projector at the given fiber waist (the single-arm
// efficiency excluding the splitter).
double arm_mode_match(double w0, double fiber_waist);

// Energy fraction diffracted into the first order by an ideal sawtooth
// blaze sampled on the given grid.
double blaze_first_order_efficiency(double blaze_period, double pitch, int n = 792);

} // namespace oam
