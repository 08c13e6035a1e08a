#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fspde/fbm_noise.hpp"
#include "fspde/frac_ou.hpp"
#include "fspde/hurst.hpp"
#include "fspde/lemma_checks.hpp"

using namespace fspde;

namespace {

double fbm_cov(double s, double t, double H) {
  return 0.5 * (std::pow(s, 2 * H) + std::pow(t, 2 * H) - std::pow(std::abs(t - s), 2 * H));
}

// Dense Var(sum_i w_i (beta(b_i) - beta(a_i))) from the fBm covariance.
double dense_increment_variance(const std::vector<double>& edges, const std::vector<double>& w, double H) {
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double a = edges[i], b = edges[i + 1], c = edges[j], d = edges[j + 1];
      const double cov = fbm_cov(b, d, H) - fbm_cov(b, c, H) - fbm_cov(a, d, H) + fbm_cov(a, c, H);
      v += w[i] * w[j] * cov;
    }
  }
  return v;
}

// Reference values of Var int_0^1 e^{-5(1-s)} dbeta^H(s) from 30-digit
// quadrature of the covariance representation.
constexpr double kFou03 = 0.17016739502662125;
constexpr double kFou07 = 0.06509246583232143;

}  // namespace

TEST_CASE("Hurst model") {
  CHECK(HurstModel(0.7).c_H() == doctest::Approx(0.21836182617678247).epsilon(1e-14));
  CHECK(HurstModel(0.3).c_H() == doctest::Approx(-0.14605658681598459).epsilon(1e-14));
  CHECK_THROWS_AS(HurstModel(0.5).c_H(), std::logic_error);
  CHECK(HurstModel(0.3).max_regularity() == doctest::Approx(0.1));
  CHECK(HurstModel(0.3).theory_rate() == doctest::Approx(0.05));
  CHECK(HurstModel(0.3).admits_positive_regularity());
  CHECK_FALSE(HurstModel(0.2).admits_positive_regularity());
  CHECK_FALSE(HurstModel(0.25).admits_positive_regularity());
  CHECK(HurstModel(0.5).regime() == HurstRegime::standard);
  CHECK(HurstModel(0.7).regime() == HurstRegime::smooth);
  CHECK(HurstModel(0.2).regime() == HurstRegime::rough);
  for (double bad : {0.0, 1.0, -0.1, 1.5, std::nan("")}) CHECK_THROWS_AS(HurstModel{bad}, std::domain_error);
}

TEST_CASE("Volterra kernel") {
  // 30-digit quadrature of the defining integrals after the smoothing substitution.
  CHECK(kernel_KH(1.0, 0.5, 0.7) == doctest::Approx(0.97714049739361676).epsilon(1e-12));
  CHECK(kernel_KH(1.0, 0.5, 0.3) == doctest::Approx(0.87301411433866805).epsilon(1e-12));
  CHECK_THROWS_AS(kernel_KH(1.0, 0.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(kernel_KH(1.0, 1.0, 0.7), std::domain_error);
  CHECK_THROWS_AS(kernel_KH(1.0, 0.0, 0.7), std::domain_error);

  for (double H : {0.3, 0.4, 0.7, 0.9}) {
    for (double t : {0.5, 1.0, 2.0}) {
      INFO("H=" << H << " t=" << t);
      CHECK(kernel_KH_square_integral(t, H) == doctest::Approx(std::pow(t, 2 * H)).epsilon(1e-6));
    }
    for (double s : {0.2, 0.5}) {
      const double t = 1.0, h = 1e-5;
      const double fd = (kernel_KH(t + h, s, H) - kernel_KH(t - h, s, H)) / (2 * h);
      CHECK(kernel_KH_dt(t, s, H) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("isometry for H > 1/2") {
  for (double H : {0.6, 0.7, 0.9}) {
    std::vector<double> ones(33, 1.0);
    CHECK(isometry_variance_plus(ones, 2.0, H) == doctest::Approx(std::pow(2.0, 2 * H)).epsilon(1e-12));
  }
  std::vector<double> phi(2049);
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::exp(-5.0 * (1.0 - static_cast<double>(i) / 2048.0));
  CHECK(isometry_variance_plus(phi, 1.0, 0.7) == doctest::Approx(kFou07).epsilon(1e-5));
}

TEST_CASE("discrete recursion variance") {
  // H = 1/2: independent increments, geometric sum.
  for (double lambda : {0.5, 10.0}) {
    const double dt = 0.01;
    double expect = 0.0;
    for (int i = 1; i <= 100; ++i) expect += dt * std::exp(-2 * lambda * dt * i);
    CHECK(discrete_fou_variance({lambda, HurstModel(0.5), dt, 100}) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(discrete_fou_variance({1.0, HurstModel(0.7), 0.1, 0}) == 0.0);

  // Dense quadratic form against the exact covariance matrix.
  for (double H : {0.3, 0.7}) {
    const double lambda = 3.0, dt = 0.02;
    const std::size_t n = 50;
    const Eigen::MatrixXd C = exact_covariance_matrix(n, H, dt);
    Eigen::VectorXd w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = std::exp(-lambda * dt * static_cast<double>(n - j));
    CHECK(discrete_fou_variance({lambda, HurstModel(H), dt, n}) ==
          doctest::Approx(w.dot(C * w)).epsilon(1e-12));
  }

  // Exact scaling: Var at (lambda, dt, n) = c^{2H} Var at (lambda c, dt / c, n).
  for (double H : {0.3, 0.7}) {
    const double a = discrete_fou_variance({2.0, HurstModel(H), 0.05, 40});
    const double b = discrete_fou_variance({8.0, HurstModel(H), 0.0125, 40});
    CHECK(a == doctest::Approx(std::pow(4.0, 2 * H) * b).epsilon(1e-12));
  }
  CHECK_THROWS_AS(discrete_fou_variance({-1.0, HurstModel(0.7), 0.1, 3}), std::domain_error);
  CHECK_THROWS_AS(discrete_fou_variance({1.0, HurstModel(0.7), 0.0, 3}), std::domain_error);
}

TEST_CASE("continuous variance oracle") {
  const double lambda = 5.0;
  CHECK(continuous_fou_variance_oracle(lambda, 1.0, 0.5, 4096) ==
        doctest::Approx((1 - std::exp(-2 * lambda)) / (2 * lambda)).epsilon(1e-6));
  CHECK(continuous_fou_variance_oracle(lambda, 1.0, 0.7, 8192) == doctest::Approx(kFou07).epsilon(1e-4));
  CHECK(continuous_fou_variance_oracle(lambda, 1.0, 0.3, 8192) == doctest::Approx(kFou03).epsilon(1e-3));

  // Refinement converges.
  for (double H : {0.3, 0.7}) {
    const double ref = H < 0.5 ? kFou03 : kFou07;
    double prev = 1e300;
    for (std::size_t m : {256u, 1024u, 4096u}) {
      const double err = std::abs(continuous_fou_variance_oracle(lambda, 1.0, H, m) - ref);
      CHECK(err < prev);
      prev = err;
    }
  }
  // Negligible decay: plain fBm variance t^{2H}.
  CHECK(continuous_fou_variance_oracle(1e-12, 2.0, 0.3, 64) == doctest::Approx(std::pow(2.0, 0.6)).epsilon(1e-10));

  // The sup over the horizon is attained somewhere on the grid and is at least the endpoint value.
  const double sup = sup_continuous_fou_variance(lambda, 1.0, 0.7, 2048, 16);
  CHECK(sup >= continuous_fou_variance_oracle(lambda, 1.0, 0.7, 2048) * (1 - 1e-12));
  CHECK(sup <= std::pow(1.0, 1.4));
}

TEST_CASE("scheme error oracle, H = 1/2 closed form") {
  const double lambda = 7.0, dt = 0.05;
  const std::size_t n = 20;
  const double e = std::exp(-lambda * dt);
  const double per = e * e * ((std::exp(2 * lambda * dt) - 1) / (2 * lambda) -
                              2 * (std::exp(lambda * dt) - 1) / lambda + dt);
  double expect = 0.0;
  for (std::size_t l = 0; l < n; ++l) expect += std::pow(e, 2.0 * static_cast<double>(n - 1 - l)) * per;
  CHECK(scheme_error_variance_oracle({lambda, HurstModel(0.5), dt, n}, 256) ==
        doctest::Approx(expect).epsilon(1e-4));
  CHECK(scheme_error_variance_oracle({lambda, HurstModel(0.7), dt, 0}, 16) == 0.0);
  // Quadratic in dt for small lambda dt.
  const double a = scheme_error_variance_oracle({lambda, HurstModel(0.7), 1.0 / 64, 64}, 64);
  const double b = scheme_error_variance_oracle({lambda, HurstModel(0.7), 1.0 / 128, 128}, 64);
  CHECK(std::log2(a / b) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("weighted increment variance matches the dense covariance") {
  for (double H : {0.3, 0.5, 0.8}) {
    const double lead = 0.037, h = 0.01;
    std::vector<double> w{0.4, -1.0, 2.5, 0.3, 1.1, -0.7};
    std::vector<double> edges{0.0, lead};
    for (std::size_t i = 0; i < w.size(); ++i) edges.push_back(lead + h * static_cast<double>(i + 1));
    std::vector<double> all{1.7};
    all.insert(all.end(), w.begin(), w.end());
    CHECK(weighted_fbm_variance(lead, 1.7, h, w, H) ==
          doctest::Approx(dense_increment_variance(edges, all, H)).epsilon(1e-11));
  }
  // Without a leading cell it is the fGN quadratic form.
  std::vector<double> w{1.0, 2.0, -1.0};
  CHECK(weighted_fbm_variance(0.0, 0.0, 0.1, w, 0.7) == doctest::Approx(fgn_quadratic_form(w, 0.7, 0.1)).epsilon(1e-13));
}

TEST_CASE("temporal increment variance") {
  const double lambda = 10.0, t1 = 0.5;
  for (double g : {1.0 / 64, 1.0 / 512}) {
    const double a = 1 - std::exp(-lambda * g);
    const double expect =
        a * a * (1 - std::exp(-2 * lambda * t1)) / (2 * lambda) + (1 - std::exp(-2 * lambda * g)) / (2 * lambda);
    CHECK(temporal_increment_variance(lambda, t1, t1 + g, 0.5, 2048) == doctest::Approx(expect).epsilon(1e-3));
  }
  // With negligible decay it is the fBm increment g^{2H}, for any grid.
  for (double H : {0.3, 0.7})
    CHECK(temporal_increment_variance(1e-12, 0.33, 0.4, H, 100) == doctest::Approx(std::pow(0.07, 2 * H)).epsilon(1e-10));
  CHECK_THROWS_AS(temporal_increment_variance(1.0, 0.5, 0.4, 0.7, 100), std::domain_error);
}

TEST_CASE("lemma report shape") {
  LemmaCheck c;
  c.id = "x";
  c.sweep = {1, 2};
  c.values = {3, 4};
  c.expected_exponent = -1.4;
  c.fitted_exponent = -1.38;
  c.pass = true;
  const auto j = to_json(c);
  CHECK(j.at("lemma") == "x");
  CHECK(j.at("fitted_exponent").get<double>() == -1.38);
  CHECK(j.at("comparison") == "within");
  const auto r = lemma_report(0.7, {c});
  CHECK(r.at("hurst").get<double>() == 0.7);
  CHECK(r.at("pass").get<bool>());
  c.pass = false;
  CHECK_FALSE(lemma_report(0.7, {c}).at("pass").get<bool>());
}

TEST_CASE("isometry input validation") {
  std::vector<double> one{1.0};
  std::vector<double> two{1.0, 1.0};
  CHECK_THROWS_AS(isometry_variance_plus(one, 1.0, 0.7), std::invalid_argument);
  CHECK_THROWS_AS(isometry_variance_plus(two, 1.0, 0.3), std::domain_error);
}
