#include "fspde/scheme.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fspde {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_state(const TrajectoryState& state) {
  double sq = 0.0;
  for (double c : state.spectral.coeffs) {
    if (!std::isfinite(c)) {
      throw DivergenceError("non-finite coefficient at step " +
                                std::to_string(state.step_index) +
                                "; the configuration is inconsistent with a stable drift split",
                            state.step_index);
    }
    sq += c * c;
  }
  if (std::sqrt(sq) > kDivergenceThreshold) {
    throw DivergenceError("L2 norm exceeded 1e8 at step " + std::to_string(state.step_index) +
                              "; the scheme is stable for the built-in drifts, so check the "
                              "drift split and parameters",
                          state.step_index);
  }
}

}  // namespace

void SchemeConfig::validate() const {
  if (!(T > 0.0)) throw std::invalid_argument("final time T must be > 0");
  if (L == 0) throw std::invalid_argument("step count L must be >= 1");
  if (N == 0) throw std::invalid_argument("mode count N must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("diffusion eps must be > 0");
  std::visit(overloaded{
                 [](const SinPiInitial&) {},
                 [this](const TabulatedInitial& t) {
                   if (t.samples.size() != N)
                     throw std::invalid_argument("tabulated x0 must have N samples");
                 },
                 [this](const SpectralInitial& s) {
                   if (s.coeffs.size() != N)
                     throw std::invalid_argument("spectral x0 must have N coefficients");
                 },
             },
             x0);
}

TrajectoryState initial_state(const SchemeConfig& cfg) {
  cfg.validate();
  TrajectoryState st;
  st.spectral = std::visit(overloaded{
                               [&](const SinPiInitial&) {
                                 SpectralField f{std::vector<double>(cfg.N, 0.0), cfg.eps};
                                 f.coeffs[0] = 1.0 / std::numbers::sqrt2;
                                 return f;
                               },
                               [&](const TabulatedInitial& t) {
                                 return dst_forward(PhysicalField{t.samples}, cfg.eps);
                               },
                               [&](const SpectralInitial& s) {
                                 return SpectralField{s.coeffs, cfg.eps};
                               },
                           },
                           cfg.x0);
  return st;
}

SplittingStepper::SplittingStepper(const SchemeConfig& cfg)
    : cfg_(cfg), dt_(cfg.dt()), decay_(cfg.N), smoothing_(cfg.N) {
  cfg.validate();
  for (std::size_t k = 1; k <= cfg.N; ++k) {
    decay_[k - 1] = semigroup_factor(k, cfg.eps, dt_);
    smoothing_[k - 1] = smoothed_increment_factor(k, cfg.eps, dt_);
  }
}

void SplittingStepper::advance(TrajectoryState& state, std::span<const double> noise) {
  const std::size_t n = cfg_.N;
  if (noise.size() != n) {
    throw std::invalid_argument("noise increment has " + std::to_string(noise.size()) +
                                " entries, expected " + std::to_string(n));
  }
  if (state.step_index >= cfg_.L) {
    throw std::out_of_range("trajectory already reached step L");
  }
  auto& coeffs = state.spectral.coeffs;

  phys_ = dst_inverse(state.spectral);
  scratch_.samples.resize(n);
  for (std::size_t m = 0; m < n; ++m) scratch_.samples[m] = cfg_.drift.flow(phys_.samples[m], dt_);
  const SpectralField flowed = dst_forward(scratch_, cfg_.eps);

  if (cfg_.drift.g_is_zero()) {
    for (std::size_t k = 0; k < n; ++k) coeffs[k] = decay_[k] * (flowed.coeffs[k] + noise[k]);
  } else {
    for (std::size_t m = 0; m < n; ++m) scratch_.samples[m] = cfg_.drift.g(phys_.samples[m]);
    const SpectralField explicit_part = dst_forward(scratch_, cfg_.eps);
    for (std::size_t k = 0; k < n; ++k) {
      coeffs[k] = decay_[k] * (flowed.coeffs[k] + noise[k]) +
                  smoothing_[k] * explicit_part.coeffs[k];
    }
  }
  ++state.step_index;
  check_state(state);
}

TrajectoryState step(const TrajectoryState& state, std::span<const double> noise_increment,
                     const SchemeConfig& cfg) {
  SplittingStepper stepper(cfg);
  TrajectoryState next = state;
  stepper.advance(next, noise_increment);
  return next;
}

std::size_t coupling_factor(const SchemeConfig& cfg, const NoiseLattice& noise) {
  if (noise.n_modes() != cfg.N) {
    throw std::invalid_argument("noise lattice has " + std::to_string(noise.n_modes()) +
                                " modes, scheme expects " + std::to_string(cfg.N));
  }
  if (noise.n_steps() % cfg.L != 0) {
    throw std::invalid_argument("scheme step count " + std::to_string(cfg.L) +
                                " does not divide noise step count " +
                                std::to_string(noise.n_steps()));
  }
  const std::size_t factor = noise.n_steps() / cfg.L;
  const double horizon = noise.dt_fine() * static_cast<double>(noise.n_steps());
  if (std::abs(horizon - cfg.T) > 1e-12 * cfg.T) {
    throw std::invalid_argument("noise lattice covers [0," + std::to_string(horizon) +
                                "] but T = " + std::to_string(cfg.T));
  }
  return factor;
}

namespace {

// Per-step noise vectors (step-major) on the scheme grid.
std::vector<double> step_major_noise(const SchemeConfig& cfg, const NoiseLattice& noise) {
  const NoiseLattice coarse = noise.coarsened(coupling_factor(cfg, noise));
  std::vector<double> out(cfg.L * cfg.N);
  for (std::size_t k = 0; k < cfg.N; ++k) {
    for (std::size_t n = 0; n < cfg.L; ++n) out[n * cfg.N + k] = coarse.at(k, n);
  }
  return out;
}

}  // namespace

std::vector<TrajectoryState> run_trajectory(const SchemeConfig& cfg, const NoiseLattice& noise,
                                            std::size_t save_every) {
  const auto increments = step_major_noise(cfg, noise);
  SplittingStepper stepper(cfg);
  TrajectoryState state = initial_state(cfg);
  std::vector<TrajectoryState> snapshots{state};
  for (std::size_t n = 0; n < cfg.L; ++n) {
    try {
      stepper.advance(state, std::span<const double>(increments).subspan(n * cfg.N, cfg.N));
    } catch (const DivergenceError&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("step " + std::to_string(n) + ": " + e.what());
    }
    const bool last = state.step_index == cfg.L;
    if (last || (save_every > 0 && state.step_index % save_every == 0)) {
      snapshots.push_back(state);
    }
  }
  return snapshots;
}

TrajectoryState run_to_final(const SchemeConfig& cfg, const NoiseLattice& noise) {
  const auto increments = step_major_noise(cfg, noise);
  SplittingStepper stepper(cfg);
  TrajectoryState state = initial_state(cfg);
  for (std::size_t n = 0; n < cfg.L; ++n) {
    stepper.advance(state, std::span<const double>(increments).subspan(n * cfg.N, cfg.N));
  }
  return state;
}

std::vector<SpectralField> run_linear(const SchemeConfig& cfg, const NoiseLattice& noise) {
  cfg.validate();
  const NoiseLattice coarse = noise.coarsened(coupling_factor(cfg, noise));
  const double dt = cfg.dt();
  std::vector<double> decay(cfg.N);
  for (std::size_t k = 1; k <= cfg.N; ++k) decay[k - 1] = semigroup_factor(k, cfg.eps, dt);

  std::vector<SpectralField> out;
  out.reserve(cfg.L + 1);
  SpectralField z{std::vector<double>(cfg.N, 0.0), cfg.eps};
  out.push_back(z);
  for (std::size_t n = 0; n < cfg.L; ++n) {
    for (std::size_t k = 0; k < cfg.N; ++k) z.coeffs[k] = decay[k] * (z.coeffs[k] + coarse.at(k, n));
    out.push_back(z);
  }
  return out;
}

}  // namespace fspde
