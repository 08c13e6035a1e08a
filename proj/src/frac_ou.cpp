#include "fspde/frac_ou.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fft_backend.hpp"
#include "fspde/fbm_noise.hpp"

namespace fspde {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(name) + " must be positive, got " + std::to_string(v));
  }
}

double hurst_value(double H) { return HurstModel(H).value(); }

template <class F>
double smooth_integral(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace

void FouSpec::validate() const {
  require_positive(lambda, "lambda");
  require_positive(dt, "dt");
}

// For H > 1/2 the inner integral has an algebraic endpoint singularity at
// tau = s; tau = s + v^p with p = 1/(H - 1/2) makes it smooth on
// v in [0, (t-s)^{1/p}].
double kernel_KH(double t, double s, double H) {
  const HurstModel model(H);
  if (model.regime() == HurstRegime::standard) {
    throw std::domain_error("kernel_KH is defined for H != 1/2");
  }
  if (!(s > 0.0) || !(t > s)) {
    throw std::domain_error("kernel_KH requires t > s > 0");
  }
  const double c = model.c_H();
  if (model.regime() == HurstRegime::smooth) {
    const double p = 1.0 / (H - 0.5);
    const double upper = std::pow(t - s, 1.0 / p);
    const double inner =
        p * smooth_integral([&](double v) { return std::pow(s + std::pow(v, p), H - 0.5); }, 0.0,
                            upper);
    return c * std::pow(s, 0.5 - H) * inner;
  }
  // u = s/x maps the inner integral onto an incomplete beta function.
  const double a = 1.0 - 2.0 * H, b = H + 0.5;
  const double inner = std::pow(s, 2.0 * H - 1.0) * boost::math::beta(a, b) *
                       boost::math::ibetac(a, b, s / t);
  return c * (std::pow(t / s, H - 0.5) * std::pow(t - s, H - 0.5) / (H - 0.5) -
              std::pow(s, 0.5 - H) * inner);
}

double kernel_KH_dt(double t, double s, double H) {
  const HurstModel model(H);
  if (!(s > 0.0) || !(t > s)) {
    throw std::domain_error("kernel_KH_dt requires t > s > 0");
  }
  return model.c_H() * std::pow(t / s, H - 0.5) * std::pow(t - s, H - 1.5);
}

double kernel_KH_square_integral(double t, double H) {
  require_positive(t, "t");
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto sq = [&](double s) {
    if (!(s > 0.0) || !(s < t)) return 0.0;
    const double k = kernel_KH(t, s, H);
    return k * k;
  };
  const double mid = 0.5 * t;
  return integrator.integrate(sq, 0.0, mid, 1e-10) + integrator.integrate(sq, mid, t, 1e-10);
}

double isometry_variance_plus(std::span<const double> phi, double T, double H) {
  if (!(H > 0.5 && H < 1.0)) {
    throw std::domain_error("isometry_variance_plus requires H in (1/2,1); use the fine-grid "
                            "oracle otherwise");
  }
  require_positive(T, "T");
  if (phi.size() < 2) throw std::invalid_argument("phi needs at least 2 grid points");
  const std::size_t cells = phi.size() - 1;
  const double h = T / static_cast<double>(cells);
  std::vector<double> v(cells);
  for (std::size_t i = 0; i < cells; ++i) v[i] = 0.5 * (phi[i] + phi[i + 1]);

  // int_{cell i} int_{cell j} |s2 - s1|^{2H-2} depends on d = |i - j| only and
  // equals the second difference of F(u) = |u|^{2H} / (2H (2H-1)) scaled by h^{2H}.
  const double a = 2.0 * H;
  auto F = [a](double u) { return std::pow(std::abs(u), a) / (a * (a - 1.0)); };
  auto cell_pair = [&](std::size_t d) {
    const double x = static_cast<double>(d);
    return F(x + 1.0) - 2.0 * F(x) + F(x - 1.0);
  };

  std::vector<double> r;
  if (cells <= 2048) {
    r.assign(cells, 0.0);
    for (std::size_t l = 0; l < cells; ++l)
      for (std::size_t i = 0; i + l < cells; ++i) r[l] += v[i] * v[i + l];
  } else {
    r = detail::autocorrelation(v);
  }
  double total = 0.0;
  for (std::size_t l = 0; l < cells; ++l) total += (l == 0 ? 1.0 : 2.0) * cell_pair(l) * r[l];
  return H * (2.0 * H - 1.0) * std::pow(h, a) * total;
}

double discrete_fou_variance(const FouSpec& fou) {
  fou.validate();
  if (fou.n == 0) return 0.0;
  std::vector<double> w(fou.n);
  for (std::size_t j = 0; j < fou.n; ++j) {
    w[j] = std::exp(-fou.lambda * fou.dt * static_cast<double>(fou.n - j));
  }
  return fgn_quadratic_form(w, fou.hurst.value(), fou.dt);
}

double continuous_fou_variance_oracle(double lambda, double t, double H, std::size_t fine_m) {
  require_positive(lambda, "lambda");
  hurst_value(H);
  if (t < 0.0) throw std::domain_error("t must be >= 0");
  if (fine_m == 0) throw std::invalid_argument("fine_m must be >= 1");
  if (t == 0.0) return 0.0;
  const double h = t / static_cast<double>(fine_m);
  std::vector<double> w(fine_m);
  for (std::size_t i = 0; i < fine_m; ++i) {
    w[i] = std::exp(-lambda * h * (static_cast<double>(fine_m - i) - 0.5));
  }
  return fgn_quadratic_form(w, H, h);
}

double sup_continuous_fou_variance(double lambda, double horizon, double H, std::size_t fine_m,
                                   std::size_t checkpoints) {
  require_positive(horizon, "horizon");
  if (checkpoints == 0 || fine_m < checkpoints) {
    throw std::invalid_argument("need 1 <= checkpoints <= fine_m");
  }
  double best = 0.0;
  for (std::size_t j = 1; j <= checkpoints; ++j) {
    const std::size_t m = fine_m * j / checkpoints;
    const double t = horizon * static_cast<double>(m) / static_cast<double>(fine_m);
    best = std::max(best, continuous_fou_variance_oracle(lambda, t, H, m));
  }
  return best;
}

double scheme_error_variance_oracle(const FouSpec& fou, std::size_t fine_m_per_step) {
  fou.validate();
  if (fine_m_per_step == 0) throw std::invalid_argument("fine_m_per_step must be >= 1");
  if (fou.n == 0) return 0.0;
  const std::size_t cells = fou.n * fine_m_per_step;
  const double h = fou.dt / static_cast<double>(fine_m_per_step);
  std::vector<double> w(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double to_end = h * (static_cast<double>(cells - i) - 0.5);  // t_n - s
    const double since_step = h * (static_cast<double>(i % fine_m_per_step) + 0.5);  // s - t_l
    w[i] = -std::exp(-fou.lambda * to_end) * std::expm1(-fou.lambda * since_step);
  }
  return fgn_quadratic_form(w, fou.hurst.value(), h);
}

double weighted_fbm_variance(double lead, double lead_weight, double h,
                             std::span<const double> uniform_weights, double H) {
  require_positive(h, "h");
  double var = fgn_quadratic_form(uniform_weights, H, h);
  if (lead > 0.0 && lead_weight != 0.0) {
    const double a = 2.0 * H;
    double cross = 0.0;
    for (std::size_t j = 0; j < uniform_weights.size(); ++j) {
      const double lo = lead + h * static_cast<double>(j);
      const double hi = lo + h;
      const double cov = 0.5 * (std::pow(hi, a) - std::pow(lo, a) - std::pow(hi - lead, a) +
                                std::pow(lo - lead, a));
      cross += uniform_weights[j] * cov;
    }
    var += lead_weight * lead_weight * std::pow(lead, a) + 2.0 * lead_weight * cross;
  }
  return std::max(var, 0.0);
}

double temporal_increment_variance(double lambda, double t1, double t2, double H,
                                   std::size_t fine_m) {
  require_positive(lambda, "lambda");
  hurst_value(H);
  if (!(t1 >= 0.0) || !(t2 >= t1)) throw std::domain_error("need t2 >= t1 >= 0");
  if (fine_m == 0) throw std::invalid_argument("fine_m must be >= 1");
  if (t2 == t1) return 0.0;

  const double gap = t2 - t1;
  const auto gap_cells = std::max<std::size_t>(
      16, static_cast<std::size_t>(std::ceil(static_cast<double>(fine_m) * gap / t2)));
  const double h = gap / static_cast<double>(gap_cells);
  auto total = static_cast<std::size_t>(std::floor(t2 / h * (1.0 + 1e-12)));
  total = std::max(total, gap_cells);
  double lead = t2 - h * static_cast<double>(total);
  if (lead < 1e-9 * h) lead = 0.0;

  auto weight = [&](double s) {
    double w = std::exp(-lambda * (t2 - s));
    if (s < t1) w -= std::exp(-lambda * (t1 - s));
    return w;
  };
  std::vector<double> w(total);
  for (std::size_t j = 0; j < total; ++j) w[j] = weight(lead + h * (static_cast<double>(j) + 0.5));
  const double lead_weight = lead > 0.0 ? weight(0.5 * lead) : 0.0;
  return weighted_fbm_variance(lead, lead_weight, h, w, H);
}

}  // namespace fspde
