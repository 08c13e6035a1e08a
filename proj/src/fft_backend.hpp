#pragma once

#include <complex>
#include <span>
#include <vector>

// Thin wrappers over FFTW. Plans are cached per thread and per size; planning
// is serialised behind a global mutex since FFTW's planner is not reentrant.
namespace fspde::detail {

/// In-place DST-I: y_k = 2 sum_j x_j sin(pi (j+1)(k+1) / (n+1)).
void dst1(std::span<double> data);

/// In-place forward complex DFT: y_k = sum_j x_j exp(-2 pi i j k / n).
void dft(std::span<std::complex<double>> data);

/// Real part of the DFT of a real sequence (eigenvalues of a symmetric
/// circulant matrix with first row `row`).
std::vector<double> real_dft(std::span<const double> row);

/// Linear autocorrelation R[l] = sum_i w[i] w[i+l] for l = 0..n-1.
std::vector<double> autocorrelation(std::span<const double> w);

}  // namespace fspde::detail
