#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace mtsfm::detail {

enum class FftDirection { forward, inverse };

/// In-place unnormalized DFT of any length. Plans are cached per
/// (size, direction) and shared across threads; execution is reentrant.
void fft_inplace(std::span<std::complex<double>> data, FftDirection dir);

/// Smallest 2^a 3^b 5^c 7^d that is >= n.
std::size_t good_fft_size(std::size_t n);

}  // namespace mtsfm::detail
