#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nlch::fft {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 transform; n must be a power of two. The inverse
// includes the 1/n normalization.
void transform(std::complex<double>* data, std::size_t n, bool inverse);

// Transform along every axis of a row-major nd array (axis 0 slowest). Each
// dims[i] must be a power of two.
void transform_nd(std::vector<std::complex<double>>& data, const std::vector<int>& dims,
                  bool inverse);

} // namespace nlch::fft
