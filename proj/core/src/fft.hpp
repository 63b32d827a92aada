#pragma once

#include <complex>
#include <span>
#include <vector>

namespace apx::detail {

/// X_k = sum_j x_j e^{-2 pi i j k / N}, k = 0..N/2.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft without normalization: x_j = sum over the Hermitian extension of X.
std::vector<double> irfft(std::span<const std::complex<double>> half, std::size_t n);

}  // namespace apx::detail
