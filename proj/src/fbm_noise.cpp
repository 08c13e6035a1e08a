#include "fspde/fbm_noise.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <charconv>
#include <complex>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fft_backend.hpp"

namespace fspde {

namespace {

void check_domain(double H, double dt) {
  if (!(H > 0.0 && H < 1.0)) {
    throw std::domain_error("Hurst index must lie in (0,1), got " + std::to_string(H));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::domain_error("time step must be positive, got " + std::to_string(dt));
  }
}

// Unit-step fGN autocovariance. For lag >= 2 the second difference is
// evaluated through expm1/log1p to limit cancellation at long lags.
double unit_gamma(std::size_t lag, double H) {
  const double a = 2.0 * H;
  if (lag == 0) return 1.0;
  if (lag == 1) return 0.5 * (std::pow(2.0, a) - 2.0);
  const double n = static_cast<double>(lag);
  const double x = 1.0 / n;
  const double up = std::expm1(a * std::log1p(x));
  const double down = std::expm1(a * std::log1p(-x));
  return 0.5 * std::pow(n, a) * (up + down);
}

constexpr std::size_t kDirectQuadraticFormLimit = 512;

}  // namespace

double fgn_autocovariance(std::size_t lag, double H, double dt) {
  check_domain(H, dt);
  return unit_gamma(lag, H) * std::pow(dt, 2.0 * H);
}

std::vector<double> fgn_autocovariance_sequence(std::size_t n, double H, double dt) {
  check_domain(H, dt);
  const double scale = std::pow(dt, 2.0 * H);
  std::vector<double> g(n);
  for (std::size_t l = 0; l < n; ++l) g[l] = unit_gamma(l, H) * scale;
  return g;
}

Eigen::MatrixXd exact_covariance_matrix(std::size_t n_steps, double H, double dt) {
  if (n_steps == 0) throw std::invalid_argument("n_steps must be >= 1");
  const auto g = fgn_autocovariance_sequence(n_steps, H, dt);
  Eigen::MatrixXd c(n_steps, n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) {
    for (std::size_t j = 0; j < n_steps; ++j) {
      c(i, j) = g[i > j ? i - j : j - i];
    }
  }
  return c;
}

double fgn_quadratic_form(std::span<const double> w, double H, double dt) {
  check_domain(H, dt);
  const std::size_t n = w.size();
  if (n == 0) return 0.0;
  std::vector<double> gamma(n);
  for (std::size_t l = 0; l < n; ++l) gamma[l] = unit_gamma(l, H);

  double total = 0.0;
  if (n <= kDirectQuadraticFormLimit) {
    for (std::size_t l = 0; l < n; ++l) {
      double r = 0.0;
      for (std::size_t i = 0; i + l < n; ++i) r += w[i] * w[i + l];
      total += (l == 0 ? 1.0 : 2.0) * gamma[l] * r;
    }
  } else {
    const auto r = detail::autocorrelation(w);
    for (std::size_t l = 0; l < n; ++l) {
      total += (l == 0 ? 1.0 : 2.0) * gamma[l] * r[l];
    }
  }
  return std::max(total, 0.0) * std::pow(dt, 2.0 * H);
}

FgnSampler::FgnSampler(std::size_t n_steps, double H, double dt, SamplerMethod method)
    : n_(n_steps), scale_(0.0) {
  check_domain(H, dt);
  if (n_steps == 0) throw std::invalid_argument("n_steps must be >= 1");
  scale_ = std::pow(dt, H);

  if (method != SamplerMethod::cholesky) {
    const std::size_t m = 2 * n_;
    std::vector<double> row(m);
    for (std::size_t j = 0; j <= n_; ++j) row[j] = unit_gamma(j, H);
    for (std::size_t j = 1; j < n_; ++j) row[m - j] = row[j];
    auto eig = detail::real_dft(row);
    double max_eig = 0.0;
    double min_eig = 0.0;
    for (double e : eig) {
      max_eig = std::max(max_eig, e);
      min_eig = std::min(min_eig, e);
    }
    if (min_eig >= -1e-8 * max_eig) {
      sqrt_eigen_.resize(m);
      for (std::size_t k = 0; k < m; ++k) {
        sqrt_eigen_[k] = std::sqrt(std::max(eig[k], 0.0) / static_cast<double>(m));
      }
      return;
    }
    if (method == SamplerMethod::circulant) {
      throw std::runtime_error("circulant embedding has negative eigenvalue " +
                               std::to_string(min_eig));
    }
  }

  Eigen::MatrixXd c = exact_covariance_matrix(n_, H, 1.0);
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) {
    c.diagonal().array() += 1e-10;
    llt.compute(c);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("fGN covariance is not positive definite (n=" +
                               std::to_string(n_) + ", H=" + std::to_string(H) + ")");
    }
  }
  cholesky_ = llt.matrixL();
}

void FgnSampler::sample_into(std::span<double> out, RngStream& stream) const {
  if (out.size() != n_) throw std::invalid_argument("output span has wrong length");
  if (uses_circulant()) {
    const std::size_t m = sqrt_eigen_.size();
    std::vector<std::complex<double>> z(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double a = stream.normal();
      const double b = stream.normal();
      z[k] = sqrt_eigen_[k] * std::complex<double>(a, b);
    }
    detail::dft(z);
    for (std::size_t j = 0; j < n_; ++j) out[j] = scale_ * z[j].real();
    return;
  }
  Eigen::VectorXd xi(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) xi[static_cast<Eigen::Index>(i)] = stream.normal();
  const Eigen::VectorXd y = cholesky_.triangularView<Eigen::Lower>() * xi;
  for (std::size_t i = 0; i < n_; ++i) out[i] = scale_ * y[static_cast<Eigen::Index>(i)];
}

std::vector<double> FgnSampler::sample(RngStream& stream) const {
  std::vector<double> out(n_);
  sample_into(out, stream);
  return out;
}

std::vector<double> sample_fgn_path(std::size_t n_steps, double H, double dt,
                                    RngStream& stream) {
  return FgnSampler(n_steps, H, dt).sample(stream);
}

std::vector<double> coarsen(std::span<const double> increments, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("coarsening factor must be >= 1");
  if (increments.size() % factor != 0) {
    throw std::invalid_argument("coarsening factor " + std::to_string(factor) +
                                " does not divide length " +
                                std::to_string(increments.size()));
  }
  std::vector<double> out(increments.size() / factor);
  for (std::size_t j = 0; j < out.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = j * factor; i < (j + 1) * factor; ++i) s += increments[i];
    out[j] = s;
  }
  return out;
}

NoiseLattice NoiseLattice::sample(std::uint64_t seed, HurstModel hurst,
                                  std::size_t n_modes, std::size_t n_steps,
                                  double dt_fine) {
  if (n_modes == 0) throw std::invalid_argument("n_modes must be >= 1");
  const FgnSampler sampler(n_steps, hurst.value(), dt_fine);
  std::vector<double> data(n_modes * n_steps);
  for (std::size_t k = 0; k < n_modes; ++k) {
    RngStream stream(seed, k);
    sampler.sample_into(std::span<double>(data).subspan(k * n_steps, n_steps), stream);
  }
  return NoiseLattice(hurst, dt_fine, n_modes, n_steps, std::move(data), seed);
}

NoiseLattice::NoiseLattice(HurstModel hurst, double dt_fine, std::size_t n_modes,
                           std::size_t n_steps, std::vector<double> increments,
                           std::uint64_t seed)
    : hurst_(hurst),
      dt_fine_(dt_fine),
      n_modes_(n_modes),
      n_steps_(n_steps),
      increments_(std::move(increments)),
      seed_(seed) {
  if (!(dt_fine > 0.0)) throw std::domain_error("dt_fine must be positive");
  if (n_modes == 0 || n_steps == 0) {
    throw std::invalid_argument("noise lattice needs at least one mode and one step");
  }
  if (increments_.size() != n_modes * n_steps) {
    throw std::invalid_argument("increment array does not match n_modes x n_steps");
  }
}

std::span<const double> NoiseLattice::row(std::size_t mode) const {
  if (mode >= n_modes_) throw std::out_of_range("mode index out of range");
  return std::span<const double>(increments_).subspan(mode * n_steps_, n_steps_);
}

NoiseLattice NoiseLattice::coarsened(std::size_t factor) const {
  if (factor == 1) return *this;
  std::vector<double> data;
  data.reserve(increments_.size() / std::max<std::size_t>(factor, 1));
  for (std::size_t k = 0; k < n_modes_; ++k) {
    const auto c = coarsen(row(k), factor);
    data.insert(data.end(), c.begin(), c.end());
  }
  return NoiseLattice(hurst_, dt_fine_ * static_cast<double>(factor), n_modes_,
                      n_steps_ / factor, std::move(data), seed_);
}

void NoiseLattice::write_csv(std::ostream& os) const {
  os << "mode,step,value\n";
  char buf[64];
  for (std::size_t k = 0; k < n_modes_; ++k) {
    for (std::size_t n = 0; n < n_steps_; ++n) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), at(k, n));
      os << (k + 1) << ',' << n << ',' << std::string_view(buf, res.ptr - buf) << '\n';
    }
  }
}

}  // namespace fspde
