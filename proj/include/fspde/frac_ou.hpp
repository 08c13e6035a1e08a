#pragma once

#include <cstddef>
#include <span>

#include "fspde/hurst.hpp"

namespace fspde {

/// Real-valued fractional Ornstein-Uhlenbeck setting: decay rate lambda,
/// step dt and time index n (t_n = n dt).
struct FouSpec {
  double lambda;
  HurstModel hurst;
  double dt;
  std::size_t n;

  double t_n() const { return static_cast<double>(n) * dt; }
  void validate() const;
};

/// Volterra kernel K_H(t, s) representing fBm through a standard Brownian
/// motion, t > s > 0, H != 1/2.
double kernel_KH(double t, double s, double H);

/// Closed form c_H (t/s)^{H-1/2} (t-s)^{H-3/2} of dK_H/dt.
double kernel_KH_dt(double t, double s, double H);

/// int_0^t K_H(t, s)^2 ds, which equals t^{2H} by the isometry.
double kernel_KH_square_integral(double t, double H);

/// H(2H-1) int int phi(s1) phi(s2) |s2 - s1|^{2H-2} ds1 ds2 over [0,T]^2 for
/// H > 1/2. phi is tabulated at m >= 2 uniform points including both ends
/// and taken piecewise constant (endpoint average) on each of the m-1 cells;
/// the singular kernel is integrated exactly over every pair of cells.
double isometry_variance_plus(std::span<const double> phi, double T, double H);

/// Exact Var(Z_n) for the recursion Z_{n+1} = e^{-lambda dt}(Z_n + dbeta_n),
/// Z_0 = 0, i.e. w^T C w with w_j = exp(-lambda (t_n - t_j)).
double discrete_fou_variance(const FouSpec& fou);

/// Variance of int_0^t e^{-lambda(t-s)} dbeta^H(s) approximated by the
/// midpoint Riemann sum on fine_m cells, evaluated exactly in law.
double continuous_fou_variance_oracle(double lambda, double t, double H, std::size_t fine_m);

/// max over t in {horizon * j / checkpoints} of the oracle above, with the
/// cell width horizon / fine_m held fixed.
double sup_continuous_fou_variance(double lambda, double horizon, double H,
                                   std::size_t fine_m, std::size_t checkpoints = 16);

/// Variance of Z(t_n) - Z_n: both are linear in the same fine increments, so
/// the error is the single weighted sum with weights
/// e^{-lambda(t_n - s)} - e^{-lambda(t_n - t_{l(s)})} at fine midpoints.
double scheme_error_variance_oracle(const FouSpec& fou, std::size_t fine_m_per_step);

/// Variance of Z(t2) - Z(t1). The fine grid is anchored at t2 with a cell
/// width dividing t2 - t1; a shorter leading cell absorbs the remainder of
/// [0, t2] and its covariance with the rest is taken from the fBm covariance
/// directly.
double temporal_increment_variance(double lambda, double t1, double t2, double H,
                                   std::size_t fine_m);

/// Variance of sum_i w_i (beta(b_i) - beta(a_i)) on a grid made of a leading
/// cell [0, lead] followed by uniform cells of width h.
double weighted_fbm_variance(double lead, double lead_weight, double h,
                             std::span<const double> uniform_weights, double H);

}  // namespace fspde
