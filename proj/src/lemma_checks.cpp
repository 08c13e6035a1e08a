#include "fspde/lemma_checks.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fspde/fit.hpp"
#include "fspde/frac_ou.hpp"

namespace fspde {

namespace {

void finish(LemmaCheck& check, std::span<const double> fit_x, std::span<const double> fit_y) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < fit_x.size(); ++i) pts.emplace_back(fit_x[i], fit_y[i]);
  check.fitted_exponent = fit_rate(pts).slope;
  if (check.comparison == LemmaCheck::Comparison::within) {
    check.pass = std::abs(check.fitted_exponent - check.expected_exponent) <= check.tolerance;
  } else {
    check.pass = check.fitted_exponent >= check.expected_exponent;
  }
}

const std::vector<double> kLambdaSweep{1e1, 1e2, 1e3, 1e4};

}  // namespace

LemmaCheck check_moment_bound(double H) {
  LemmaCheck c;
  c.id = "moment_bound";
  c.statement = "sup_t E|Z(t)|^2 <= C lambda^(-2H)";
  c.sweep_variable = "lambda";
  c.sweep = kLambdaSweep;
  c.expected_exponent = -2.0 * H;
  for (double lambda : c.sweep) {
    // The variance saturates after a few multiples of 1/lambda.
    const double horizon = std::min(1.0, 40.0 / lambda);
    c.values.push_back(sup_continuous_fou_variance(lambda, horizon, H, 1 << 14, 16));
  }
  finish(c, c.sweep, c.values);
  return c;
}

LemmaCheck check_discrete_moment_bound(double H) {
  LemmaCheck c;
  c.id = "discrete_moment_bound";
  c.statement = "sup_dt sup_n E|Z_n|^2 <= C lambda^(-2H)";
  c.sweep_variable = "lambda";
  c.sweep = kLambdaSweep;
  c.expected_exponent = -2.0 * H;
  const HurstModel hurst(H);
  for (double lambda : c.sweep) {
    double best = 0.0;
    for (double ratio : {1e-2, 1e-1, 1.0}) {
      const double dt = ratio / lambda;
      const auto n_sat = static_cast<std::size_t>(std::ceil(40.0 / ratio));
      for (std::size_t j = 1; j <= 8; ++j) {
        const std::size_t n = std::max<std::size_t>(1, n_sat * j / 8);
        best = std::max(best, discrete_fou_variance(FouSpec{lambda, hurst, dt, n}));
      }
    }
    c.values.push_back(best);
  }
  finish(c, c.sweep, c.values);
  return c;
}

LemmaCheck check_temporal_regularity(double H) {
  LemmaCheck c;
  c.id = "temporal_regularity";
  c.statement = "E|Z(t2)-Z(t1)|^2 <= C lambda^(alpha-2H) |t2-t1|^alpha";
  c.sweep_variable = "gap";
  c.expected_exponent = 2.0 * H;
  constexpr double lambda = 10.0;
  constexpr double t1 = 0.5;
  for (int k = 6; k <= 11; ++k) {
    const double gap = std::ldexp(1.0, -k);
    c.sweep.push_back(gap);
    // 32 fine cells across the gap.
    const auto fine_m = static_cast<std::size_t>(std::ceil(32.0 * (t1 + gap) / gap));
    c.values.push_back(temporal_increment_variance(lambda, t1, t1 + gap, H, fine_m));
  }
  finish(c, c.sweep, c.values);
  return c;
}

LemmaCheck check_discretization_error(double H) {
  LemmaCheck c;
  c.id = "discretization_error";
  c.sweep_variable = "dt";
  constexpr double lambda = 20.0;
  const HurstModel hurst(H);
  for (int k = 4; k <= 9; ++k) {
    const double dt = std::ldexp(1.0, -k);
    c.sweep.push_back(dt);
    c.values.push_back(
        scheme_error_variance_oracle(FouSpec{lambda, hurst, dt, std::size_t{1} << k}, 64));
  }
  if (H >= 0.5) {
    c.statement = "sup_n E|Z(t_n)-Z_n|^2 <= C lambda^(-2H) min(1, lambda dt)^2";
    c.expected_exponent = 2.0;
    c.comparison = LemmaCheck::Comparison::within;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < c.sweep.size(); ++i) {
      if (lambda * c.sweep[i] < 1.0) {
        xs.push_back(c.sweep[i]);
        ys.push_back(c.values[i]);
      }
    }
    finish(c, xs, ys);
  } else {
    const double alpha = 1.5 * H;
    c.statement = "sup_n E|Z(t_n)-Z_n|^2 <= C lambda^(-2H) (lambda dt)^(2 alpha), alpha = " +
                  std::to_string(alpha);
    c.expected_exponent = 2.0 * alpha;
    c.comparison = LemmaCheck::Comparison::at_least;
    c.tolerance = 0.0;
    finish(c, c.sweep, c.values);
  }
  return c;
}

std::vector<LemmaCheck> verify_lemmas(double H) {
  return {check_moment_bound(H), check_discrete_moment_bound(H), check_temporal_regularity(H),
          check_discretization_error(H)};
}

nlohmann::json to_json(const LemmaCheck& check) {
  return {
      {"lemma", check.id},
      {"statement", check.statement},
      {"sweep_variable", check.sweep_variable},
      {"sweep_grid", check.sweep},
      {"values", check.values},
      {"fitted_exponent", check.fitted_exponent},
      {"expected_exponent", check.expected_exponent},
      {"comparison", check.comparison == LemmaCheck::Comparison::within ? "within" : "at_least"},
      {"tolerance", check.tolerance},
      {"pass", check.pass},
  };
}

nlohmann::json lemma_report(double H, const std::vector<LemmaCheck>& checks) {
  nlohmann::json out;
  out["hurst"] = H;
  out["checks"] = nlohmann::json::array();
  bool all = true;
  for (const auto& c : checks) {
    out["checks"].push_back(to_json(c));
    all = all && c.pass;
  }
  out["pass"] = all;
  return out;
}

}  // namespace fspde
