#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fspde/fit.hpp"
#include "fspde/flows.hpp"

using namespace fspde;

namespace {

const ScalarMap kCubic = [](double z) { return -z * z * z; };
const ScalarMap kQuintic = [](double z) { return -std::pow(z, 5); };
const ScalarMap kCubicLinear = [](double z) { return z - z * z * z; };

const std::vector<double> kZ{-3.0, -1.5, -0.5, 0.0, 0.5, 1.5, 3.0};
const std::vector<double> kS{1e-3, 0.1, 0.5, 1.0};

}  // namespace

TEST_CASE("poly_flow closed form") {
  for (double s : {0.0, 0.3, 5.0}) CHECK(poly_flow(0.0, s, 1) == 0.0);
  CHECK(poly_flow(1.0, 0.5, 1) == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-15));
  CHECK(poly_flow(2.0, 1.0, 2) == doctest::Approx(2.0 / std::pow(65.0, 0.25)).epsilon(1e-15));
  CHECK(poly_flow(2.0, 1.0, 2) == doctest::Approx(0.70437).epsilon(1e-4));
  CHECK(std::abs(poly_flow(2.0, 1.0, 2) - ode_oracle(2.0, 1.0, kQuintic, 20000)) <= 1e-8);
  CHECK_THROWS_AS(poly_flow(1.0, -1.0, 1), std::domain_error);
  CHECK_THROWS_AS(poly_flow(1.0, 1.0, 0), std::domain_error);

  for (double z : kZ)
    for (double s : kS)
      for (int q : {1, 2, 3}) {
        const double y = poly_flow(z, s, q);
        CHECK(std::abs(y) <= std::abs(z));
        CHECK((y > 0) == (z > 0));
      }
}

TEST_CASE("cubic_linear_flow closed form") {
  for (double s : {0.0, 0.1, 3.0, 50.0}) {
    CHECK(cubic_linear_flow(1.0, s) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cubic_linear_flow(-1.0, s) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(cubic_linear_flow(0.0, s) == 0.0);
  }
  const double expect = 2.0 * std::exp(0.1) / std::sqrt(1.0 + 4.0 * (std::exp(0.2) - 1.0));
  CHECK(cubic_linear_flow(2.0, 0.1) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(cubic_linear_flow(2.0, 0.1) == doctest::Approx(1.60966).epsilon(1e-5));
  CHECK(std::abs(cubic_linear_flow(2.0, 0.1) - ode_oracle(2.0, 0.1, kCubicLinear, 10000)) <= 1e-8);

  // Approach to the stable equilibrium from below.
  double prev = 0.5;
  for (double s = 0.5; s <= 20.0; s += 0.5) {
    const double y = cubic_linear_flow(0.5, s);
    CHECK(y >= prev);
    CHECK(y <= 1.0);
    prev = y;
  }
  CHECK(std::abs(ode_oracle(0.5, 20.0, kCubicLinear, 40000) - 1.0) <= 1e-6);
  CHECK(std::abs(cubic_linear_flow(0.5, 20.0) - 1.0) <= 1e-6);
}

TEST_CASE("closed-form flows agree with RK4") {
  for (double z : kZ) {
    for (double s : kS) {
      INFO("z=" << z << " s=" << s);
      CHECK(std::abs(poly_flow(z, s, 1) - ode_oracle(z, s, kCubic, 20000)) <= 1e-8);
      CHECK(std::abs(cubic_linear_flow(z, s) - ode_oracle(z, s, kCubicLinear, 20000)) <= 1e-8);
    }
  }
}

TEST_CASE("flow semigroup law and contraction") {
  for (double z : kZ) {
    for (double s : {0.0, 0.2, 0.7, 1.0}) {
      for (double t : {0.0, 0.1, 0.5, 1.0}) {
        CHECK(std::abs(poly_flow(poly_flow(z, s, 1), t, 1) - poly_flow(z, s + t, 1)) <= 1e-10);
        CHECK(std::abs(poly_flow(poly_flow(z, s, 2), t, 2) - poly_flow(z, s + t, 2)) <= 1e-10);
        CHECK(std::abs(cubic_linear_flow(cubic_linear_flow(z, s), t) - cubic_linear_flow(z, s + t)) <= 1e-10);
      }
    }
  }
  for (double z1 : kZ) {
    for (double z2 : kZ) {
      for (double s : kS) {
        const double d = std::abs(z2 - z1);
        CHECK(std::abs(poly_flow(z2, s, 1) - poly_flow(z1, s, 1)) <= d + 1e-15);
        CHECK(std::abs(cubic_linear_flow(z2, s) - cubic_linear_flow(z1, s)) <= std::exp(s) * d + 1e-15);
      }
    }
  }
}

TEST_CASE("psi") {
  const FlowMap flow = [](double z, double s) { return poly_flow(z, s, 1); };
  CHECK(psi(2.0, 0.0, flow, kCubic) == -8.0);
  CHECK(psi(2.0, 1e-11, flow, kCubic) == -8.0);
  CHECK(psi(1.0, 0.5, flow, kCubic) == doctest::Approx((1.0 / std::numbers::sqrt2 - 1.0) / 0.5).epsilon(1e-14));
  CHECK(psi(1.0, 0.5, flow, kCubic) == doctest::Approx(-0.58579).epsilon(1e-5));

  const DriftSplit split(PolyOdd{1});
  CHECK(split.psi(2.0, 0.0) == -8.0);

  // |psi_s - f| is linear in s on compact sets.
  for (const DriftSplit& d : {DriftSplit(PolyOdd{1}), DriftSplit(CubicLinear{})}) {
    std::vector<std::pair<double, double>> pts;
    for (int k = 10; k <= 18; ++k) {
      const double s = std::ldexp(1.0, -k);
      double worst = 0.0;
      for (double z = -3.0; z <= 3.0; z += 0.25) worst = std::max(worst, std::abs(d.psi(z, s) - d.f(z)));
      pts.emplace_back(s, worst);
    }
    CHECK(fit_rate(pts).slope >= 0.99);
  }
}

TEST_CASE("ode_oracle") {
  CHECK(ode_oracle(1.7, 3.0, [](double) { return 0.0; }, 4) == 1.7);
  CHECK(std::abs(ode_oracle(1.0, 0.5, kCubic, 10000) - 1.0 / std::numbers::sqrt2) <= 1e-10);
  CHECK_THROWS_AS(ode_oracle(1.0, 0.5, kCubic, 3), std::invalid_argument);
  CHECK_THROWS_AS(ode_oracle(10.0, 1.0, [](double z) { return z * z; }, 100), std::overflow_error);

  const double exact = poly_flow(2.0, 0.8, 1);
  const double e1 = std::abs(ode_oracle(2.0, 0.8, kCubic, 200) - exact);
  const double e2 = std::abs(ode_oracle(2.0, 0.8, kCubic, 400) - exact);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("custom drift uses a refined RK4 flow") {
  const DriftSplit custom(CustomDrift{kCubic});
  for (double z : kZ)
    for (double s : kS) CHECK(std::abs(custom.flow(z, s) - poly_flow(z, s, 1)) <= 1e-8);
  CHECK_THROWS_AS(DriftSplit(CustomDrift{}), std::invalid_argument);
}

TEST_CASE("apply_pointwise") {
  const PhysicalField x{{0.3, -1.2, 2.0}};
  CHECK(apply_pointwise(x, [](double z) { return z; }).samples == x.samples);
  const DriftSplit split(PolyOdd{1}, LipschitzKind::affine_sine);
  CHECK(apply_pointwise(PhysicalField{{0.0}}, [&](double z) { return split.g(z); }).samples ==
        std::vector<double>{1.0});
  const auto y = apply_pointwise(PhysicalField{{1.0, 2.0}}, [](double z) { return poly_flow(z, 0.5, 1); });
  CHECK(y.samples[0] == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(y.samples[1] == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-14));

  // Commutes with permutations of the grid.
  const PhysicalField p{{2.0, 0.3, -1.2}};
  const auto fx = apply_pointwise(x, [](double z) { return std::sin(z); });
  const auto fp = apply_pointwise(p, [](double z) { return std::sin(z); });
  CHECK(fp.samples[0] == fx.samples[2]);
  CHECK(fp.samples[1] == fx.samples[0]);
  CHECK(fp.samples[2] == fx.samples[1]);
}

TEST_CASE("drift split built-ins") {
  const DriftSplit spf(PolyOdd{1}, LipschitzKind::identity);
  CHECK(spf.f(2.0) == -8.0);
  CHECK(spf.g(2.0) == 2.0);
  CHECK_FALSE(spf.g_is_zero());
  const DriftSplit fpf(CubicLinear{}, LipschitzKind::zero);
  CHECK(fpf.f(2.0) == -6.0);
  CHECK(fpf.g_is_zero());
  CHECK(fpf.f_name() == "cubic_linear");
  const DriftSplit zero(ZeroDrift{}, LipschitzKind::sine);
  CHECK(zero.flow(1.3, 0.7) == 1.3);
  CHECK(zero.g(0.5) == std::sin(0.5));
  CHECK(DriftSplit(PolyOdd{2}).f(2.0) == -32.0);
  CHECK_THROWS_AS(DriftSplit(PolyOdd{0}), std::invalid_argument);
}
