#pragma once

#include <cstddef>
#include <vector>

namespace fspde {

/// Coefficients c_k, k = 1..N, of a function in the Dirichlet sine basis
/// e_k(x) = sqrt(2) sin(k pi x). coeffs[0] holds c_1. `eps` is the diffusion
/// coefficient scaling the generator, so mode k decays at rate eps * k^2 pi^2.
struct SpectralField {
  std::vector<double> coeffs;
  double eps = 1.0;

  std::size_t size() const { return coeffs.size(); }
};

/// Samples at the interior grid points x_m = m / (N+1), m = 1..N. Boundary
/// values are zero and never stored.
struct PhysicalField {
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
};

/// k^2 pi^2 for 1-based mode index k.
double laplacian_eigenvalue(std::size_t k);

/// Interior grid x_m = m / (N+1).
std::vector<double> grid_points(std::size_t n);

SpectralField dst_forward(const PhysicalField& phys, double eps = 1.0);
PhysicalField dst_inverse(const SpectralField& field);

/// exp(-eps lambda_k dt).
double semigroup_factor(std::size_t k, double eps, double dt);

/// (1 - exp(-eps lambda_k dt)) / (eps lambda_k), the diagonal of
/// A^{-1}(I - S(dt)) for the eps-scaled generator. Never exceeds dt.
double smoothed_increment_factor(std::size_t k, double eps, double dt);

SpectralField semigroup_apply(const SpectralField& field, double dt);
SpectralField smoothed_increment_apply(const SpectralField& field, double dt);

double l2_norm(const SpectralField& field);
double sobolev_norm(const SpectralField& field, double alpha);

/// sqrt(h * sum_m x_m^2), the trapezoid L2 norm with zero boundary values.
double grid_l2_norm(const PhysicalField& phys);

}  // namespace fspde
