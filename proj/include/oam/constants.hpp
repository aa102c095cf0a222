#pragma once

namespace oam {

// SI units throughout.
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K

// Cesium D2 line.
inline constexpr double kCsD2Wavelength = 852.34727582e-9;    // m
inline constexpr double kCsD2Gamma = 2.0 * 3.14159265358979323846 * 5.2227e6; // natural linewidth, rad/s
inline constexpr double kCsMass = 2.20694650e-25;             // kg

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

} // namespace oam
