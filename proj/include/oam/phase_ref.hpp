#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "oam/grid.hpp"
#include "oam/rng.hpp"

namespace oam {

struct CameraImage {
    GridSpec grid;
    Eigen::ArrayXXd intensity; // nonnegative, (ny rows, nx cols)

    CameraImage() = default;
    explicit CameraImage(const GridSpec& g)
        : grid(g), intensity(Eigen::ArrayXXd::Zero(g.ny, g.nx)) {}
};

// |LG(+1) + e^{i phi} LG(-1)|^2: a two-lobe pattern with its axis at phi/2.
// noise_level > 0 adds multiplicative Gaussian noise of that relative
// amplitude per pixel (drawn from rng).
CameraImage render_reference(double phi, const GridSpec& g, double w0 = 50e-6,
                             double noise_level = 0.0, Rng* rng = nullptr);

// Interferometer phase from the lobe orientation: second central moments
// after a 5th-percentile floor subtraction give the principal-axis angle
// theta (period pi); the returned phase is 2*theta in [0, 2pi).
// Throws std::domain_error for isotropic images (no usable orientation).
double extract_phase(const CameraImage& img);

// floor(mod(phi, 2pi) / (2pi/60))
int bin_phase(double phi);
double bin_center(int bin);

} // namespace oam
