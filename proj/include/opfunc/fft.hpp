#pragma once

#include <complex>
#include <vector>

namespace opfunc {

// In-place radix-2 FFT; size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

// Multidimensional FFT of a row-major flat array with extents dims
// (every extent a power of two). Forward transform, unnormalized.
void fft_nd(std::vector<std::complex<double>>& a, const std::vector<int>& dims,
            bool inverse);

}  // namespace opfunc
