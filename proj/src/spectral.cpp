#include "fspde/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft_backend.hpp"

namespace fspde {

double laplacian_eigenvalue(std::size_t k) {
  const double kk = static_cast<double>(k);
  return kk * kk * std::numbers::pi * std::numbers::pi;
}

std::vector<double> grid_points(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t m = 0; m < n; ++m) {
    x[m] = static_cast<double>(m + 1) / static_cast<double>(n + 1);
  }
  return x;
}

// With DST-I y_k = 2 sum_m x_m sin(pi m k / (N+1)):
//   c_k = sqrt(2)/(N+1) sum_m x_m sin(...) = y_k / (sqrt(2) (N+1))
//   x_m = sqrt(2) sum_k c_k sin(...)      = y_m / sqrt(2)
SpectralField dst_forward(const PhysicalField& phys, double eps) {
  SpectralField out{phys.samples, eps};
  detail::dst1(out.coeffs);
  const double scale =
      1.0 / (std::numbers::sqrt2 * static_cast<double>(phys.size() + 1));
  for (double& c : out.coeffs) c *= scale;
  return out;
}

PhysicalField dst_inverse(const SpectralField& field) {
  PhysicalField out{field.coeffs};
  detail::dst1(out.samples);
  for (double& x : out.samples) x *= 1.0 / std::numbers::sqrt2;
  return out;
}

double semigroup_factor(std::size_t k, double eps, double dt) {
  if (dt < 0.0) throw std::domain_error("semigroup time must be >= 0");
  return std::exp(-eps * laplacian_eigenvalue(k) * dt);
}

double smoothed_increment_factor(std::size_t k, double eps, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("time step must be > 0");
  const double rate = eps * laplacian_eigenvalue(k);
  const double z = rate * dt;
  if (z < 1e-8) return dt * (1.0 - 0.5 * z);
  return -std::expm1(-z) / rate;
}

SpectralField semigroup_apply(const SpectralField& field, double dt) {
  SpectralField out = field;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coeffs[i] *= semigroup_factor(i + 1, field.eps, dt);
  }
  return out;
}

SpectralField smoothed_increment_apply(const SpectralField& field, double dt) {
  SpectralField out = field;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coeffs[i] *= smoothed_increment_factor(i + 1, field.eps, dt);
  }
  return out;
}

double l2_norm(const SpectralField& field) {
  double s = 0.0;
  for (double c : field.coeffs) s += c * c;
  return std::sqrt(s);
}

double sobolev_norm(const SpectralField& field, double alpha) {
  if (alpha < 0.0) throw std::domain_error("Sobolev exponent must be >= 0");
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    s += std::pow(laplacian_eigenvalue(i + 1), alpha) * field.coeffs[i] * field.coeffs[i];
  }
  return std::sqrt(s);
}

double grid_l2_norm(const PhysicalField& phys) {
  const double h = 1.0 / static_cast<double>(phys.size() + 1);
  double s = 0.0;
  for (double x : phys.samples) s += x * x;
  return std::sqrt(h * s);
}

}  // namespace fspde
