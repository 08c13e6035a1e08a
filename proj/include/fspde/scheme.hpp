#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fspde/fbm_noise.hpp"
#include "fspde/flows.hpp"
#include "fspde/hurst.hpp"
#include "fspde/spectral.hpp"

namespace fspde {

/// x0(x) = sin(pi x), injected as the exact coefficient 1/sqrt(2) on mode 1.
struct SinPiInitial {};
/// Initial data given by interior grid samples (length N).
struct TabulatedInitial {
  std::vector<double> samples;
};
/// Initial data given by sine coefficients (length N).
struct SpectralInitial {
  std::vector<double> coeffs;
};
using InitialData = std::variant<SinPiInitial, TabulatedInitial, SpectralInitial>;

struct SchemeConfig {
  double T = 1.0;
  std::size_t L = 1;  ///< time steps, dt = T / L
  std::size_t N = 1;  ///< sine modes
  double eps = 1.0;
  DriftSplit drift{};
  HurstModel hurst{0.5};
  InitialData x0 = SinPiInitial{};
  std::uint64_t seed = 0;

  double dt() const { return T / static_cast<double>(L); }
  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

struct TrajectoryState {
  std::size_t step_index = 0;
  SpectralField spectral;
};

/// Raised when an iterate is non-finite or its L2 norm exceeds 1e8.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

inline constexpr double kDivergenceThreshold = 1e8;

TrajectoryState initial_state(const SchemeConfig& cfg);

/// One step of the splitting scheme
///   X_{n+1} = S(dt) Phi_dt(X_n) + A^{-1}(I - S(dt)) G(X_n) + S(dt) dB_n
/// with the nonlinear maps applied pointwise on the interior grid.
/// Reuses its transform buffers, so keep one stepper per worker.
class SplittingStepper {
 public:
  explicit SplittingStepper(const SchemeConfig& cfg);

  /// Advances `state` in place. `noise` holds one increment per mode.
  void advance(TrajectoryState& state, std::span<const double> noise);

 private:
  SchemeConfig cfg_;
  double dt_;
  std::vector<double> decay_;
  std::vector<double> smoothing_;
  PhysicalField phys_;
  PhysicalField scratch_;
};

TrajectoryState step(const TrajectoryState& state, std::span<const double> noise_increment,
                     const SchemeConfig& cfg);

/// Runs cfg.L steps driven by `noise`, coarsened to dt = T/L. Returns the
/// states at multiples of save_every (0 saves only the initial and final
/// states) and always the final state.
std::vector<TrajectoryState> run_trajectory(const SchemeConfig& cfg, const NoiseLattice& noise,
                                            std::size_t save_every = 0);

/// Final state only.
TrajectoryState run_to_final(const SchemeConfig& cfg, const NoiseLattice& noise);

/// Linear part Z_{n+1} = S(dt)(Z_n + dB_n), Z_0 = 0, for n = 0..L.
std::vector<SpectralField> run_linear(const SchemeConfig& cfg, const NoiseLattice& noise);

/// Coarsening factor that maps `noise` onto the step grid of `cfg`. Throws
/// std::invalid_argument when the grids are incompatible.
std::size_t coupling_factor(const SchemeConfig& cfg, const NoiseLattice& noise);

}  // namespace fspde
