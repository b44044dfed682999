#pragma once

#include <complex>
#include <vector>

namespace blot::fft {

// In-place forward/inverse DFT. Power-of-two lengths use an iterative
// radix-2 transform; other lengths fall back to a direct O(n^2) evaluation.
// The inverse includes the 1/n normalization.
void transform(std::vector<std::complex<double>>& a, bool inverse = false);

// Row-column 2-D DFT over a row-major rows x cols grid.
void transform_2d(std::vector<std::complex<double>>& a, int rows, int cols, bool inverse = false);

}  // namespace blot::fft
