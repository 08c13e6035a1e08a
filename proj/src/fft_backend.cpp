#include "fft_backend.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fspde::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

class Plan {
 public:
  enum class Kind { dst1, dft, r2c, c2r };

  Plan(Kind kind, std::size_t n) : kind_(kind), n_(n) {
    const int ni = static_cast<int>(n);
    const std::size_t complex_len = kind == Kind::dft ? n : n / 2 + 1;
    real_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * std::max<std::size_t>(n, 1))));
    cplx_.reset(static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(complex_len, 1))));
    std::lock_guard lock(planner_mutex());
    switch (kind) {
      case Kind::dst1:
        plan_ = fftw_plan_r2r_1d(ni, real_.get(), real_.get(), FFTW_RODFT00,
                                 FFTW_ESTIMATE);
        break;
      case Kind::dft:
        plan_ = fftw_plan_dft_1d(ni, cplx_.get(), cplx_.get(), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
        break;
      case Kind::r2c:
        plan_ = fftw_plan_dft_r2c_1d(ni, real_.get(), cplx_.get(), FFTW_ESTIMATE);
        break;
      case Kind::c2r:
        plan_ = fftw_plan_dft_c2r_1d(ni, cplx_.get(), real_.get(), FFTW_ESTIMATE);
        break;
    }
    if (plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
  }

  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  double* real() { return real_.get(); }
  fftw_complex* cplx() { return cplx_.get(); }
  std::size_t size() const { return n_; }
  void execute() { fftw_execute(plan_); }

 private:
  Kind kind_;
  std::size_t n_;
  std::unique_ptr<double, FftwFree> real_;
  std::unique_ptr<fftw_complex, FftwFree> cplx_;
  fftw_plan plan_ = nullptr;
};

Plan& cached_plan(Plan::Kind kind, std::size_t n) {
  thread_local std::map<std::pair<int, std::size_t>, std::unique_ptr<Plan>> cache;
  auto& slot = cache[{static_cast<int>(kind), n}];
  if (!slot) slot = std::make_unique<Plan>(kind, n);
  return *slot;
}

}  // namespace

void dst1(std::span<double> data) {
  if (data.empty()) return;
  Plan& plan = cached_plan(Plan::Kind::dst1, data.size());
  std::copy(data.begin(), data.end(), plan.real());
  plan.execute();
  std::copy(plan.real(), plan.real() + data.size(), data.begin());
}

void dft(std::span<std::complex<double>> data) {
  if (data.empty()) return;
  Plan& plan = cached_plan(Plan::Kind::dft, data.size());
  std::memcpy(static_cast<void*>(plan.cplx()), static_cast<const void*>(data.data()), sizeof(fftw_complex) * data.size());
  plan.execute();
  std::memcpy(static_cast<void*>(data.data()), static_cast<const void*>(plan.cplx()), sizeof(fftw_complex) * data.size());
}

std::vector<double> real_dft(std::span<const double> row) {
  const std::size_t n = row.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  Plan& plan = cached_plan(Plan::Kind::r2c, n);
  std::copy(row.begin(), row.end(), plan.real());
  plan.execute();
  // Hermitian symmetry fills the upper half.
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = k <= n / 2 ? k : n - k;
    out[k] = plan.cplx()[j][0];
  }
  return out;
}

std::vector<double> autocorrelation(std::span<const double> w) {
  const std::size_t n = w.size();
  if (n == 0) return {};
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  Plan& fwd = cached_plan(Plan::Kind::r2c, m);
  std::fill(fwd.real(), fwd.real() + m, 0.0);
  std::copy(w.begin(), w.end(), fwd.real());
  fwd.execute();
  Plan& inv = cached_plan(Plan::Kind::c2r, m);
  for (std::size_t k = 0; k < m / 2 + 1; ++k) {
    const double re = fwd.cplx()[k][0];
    const double im = fwd.cplx()[k][1];
    inv.cplx()[k][0] = re * re + im * im;
    inv.cplx()[k][1] = 0.0;
  }
  inv.execute();
  std::vector<double> r(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t l = 0; l < n; ++l) r[l] = inv.real()[l] * scale;
  return r;
}

}  // namespace fspde::detail
