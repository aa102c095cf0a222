#pragma once

#include "oam/grid.hpp"

namespace oam::detail {

// Unnormalized forward / 1/N-normalized inverse 2D FFT, rows then columns.
void fft2(FieldArray& a, bool inverse);

double fft_frequency(int i, int n, double d);

} // namespace oam::detail
