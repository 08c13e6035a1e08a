#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fspde/hurst.hpp"
#include "fspde/rng.hpp"

namespace fspde {

/// Covariance of two unit-mode fBm increments over steps of length dt that are
/// `lag` steps apart: dt^{2H} * (|l+1|^{2H} - 2|l|^{2H} + |l-1|^{2H}) / 2.
double fgn_autocovariance(std::size_t lag, double H, double dt);

/// fgn_autocovariance for lags 0..n-1.
std::vector<double> fgn_autocovariance_sequence(std::size_t n, double H, double dt);

/// Dense Toeplitz covariance of n consecutive increments.
Eigen::MatrixXd exact_covariance_matrix(std::size_t n_steps, double H, double dt);

/// Variance of sum_i w[i] * dbeta_i for consecutive increments of step dt,
/// i.e. w^T C w with C = exact_covariance_matrix(w.size(), H, dt). Uses the
/// Toeplitz structure (FFT autocorrelation for long vectors), never forms C.
double fgn_quadratic_form(std::span<const double> w, double H, double dt);

enum class SamplerMethod { automatic, circulant, cholesky };

/// Exact sampler for n consecutive fGN increments. Uses circulant embedding
/// when the embedding spectrum is nonnegative (up to 1e-8 relative) and a
/// dense Cholesky factor otherwise.
class FgnSampler {
 public:
  FgnSampler(std::size_t n_steps, double H, double dt,
             SamplerMethod method = SamplerMethod::automatic);

  std::size_t size() const { return n_; }
  bool uses_circulant() const { return !sqrt_eigen_.empty(); }

  void sample_into(std::span<double> out, RngStream& stream) const;
  std::vector<double> sample(RngStream& stream) const;

 private:
  std::size_t n_;
  double scale_;  // dt^H
  std::vector<double> sqrt_eigen_;  // sqrt(eig / m), size m = 2n
  Eigen::MatrixXd cholesky_;        // lower factor of the unit-step matrix
};

std::vector<double> sample_fgn_path(std::size_t n_steps, double H, double dt,
                                    RngStream& stream);

/// Sums consecutive blocks of `factor` increments. Throws
/// std::invalid_argument if factor is 0 or does not divide the length.
std::vector<double> coarsen(std::span<const double> increments, std::size_t factor);

/// Per-mode fBm increments on the finest time grid. Row k is drawn from the
/// stream (seed, k), so rows are independent and reproducible individually.
class NoiseLattice {
 public:
  static NoiseLattice sample(std::uint64_t seed, HurstModel hurst,
                             std::size_t n_modes, std::size_t n_steps,
                             double dt_fine);

  /// Wraps existing increments (row-major, mode x step).
  NoiseLattice(HurstModel hurst, double dt_fine, std::size_t n_modes,
               std::size_t n_steps, std::vector<double> increments,
               std::uint64_t seed = 0);

  double dt_fine() const { return dt_fine_; }
  std::size_t n_modes() const { return n_modes_; }
  std::size_t n_steps() const { return n_steps_; }
  std::uint64_t seed() const { return seed_; }
  const HurstModel& hurst() const { return hurst_; }

  std::span<const double> row(std::size_t mode) const;
  double at(std::size_t mode, std::size_t step) const {
    return increments_[mode * n_steps_ + step];
  }
  const std::vector<double>& data() const { return increments_; }

  /// Lattice on the grid with step factor * dt_fine.
  NoiseLattice coarsened(std::size_t factor) const;

  /// CSV dump with header `mode,step,value`; modes are 1-based.
  void write_csv(std::ostream& os) const;

 private:
  HurstModel hurst_;
  double dt_fine_;
  std::size_t n_modes_;
  std::size_t n_steps_;
  std::vector<double> increments_;
  std::uint64_t seed_;
};

}  // namespace fspde
