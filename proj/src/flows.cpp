#include "fspde/flows.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fspde {

double poly_flow(double z, double s, int q) {
  if (q < 1) throw std::domain_error("poly_flow requires q >= 1");
  if (s < 0.0) throw std::domain_error("flow time must be >= 0");
  if (q == 1) return z / std::sqrt(1.0 + 2.0 * z * z * s);
  const double p = 2.0 * q;
  return z / std::pow(1.0 + p * std::pow(z, p) * s, 1.0 / p);
}

double cubic_linear_flow(double z, double s) {
  if (s < 0.0) throw std::domain_error("flow time must be >= 0");
  // Written as z / sqrt(e^{-2s} + z^2 (1 - e^{-2s})) to stay finite for large s.
  const double decay = std::exp(-2.0 * s);
  return z / std::sqrt(decay - z * z * std::expm1(-2.0 * s));
}

double ode_oracle(double z, double s, const ScalarMap& f, std::size_t steps) {
  if (steps < 4) throw std::invalid_argument("ode_oracle needs at least 4 steps");
  const double h = s / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double k1 = f(z);
    const double k2 = f(z + 0.5 * h * k1);
    const double k3 = f(z + 0.5 * h * k2);
    const double k4 = f(z + h * k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(std::abs(z) <= 1e8)) {
      throw std::overflow_error("ode_oracle: |z| exceeded 1e8 at substep " +
                                std::to_string(i) + " of " + std::to_string(steps));
    }
  }
  return z;
}

double ode_flow(double z, double s, const ScalarMap& f, double tol) {
  if (s == 0.0) return z;
  std::size_t steps = 8;
  double prev = ode_oracle(z, s, f, steps);
  constexpr std::size_t kMaxSteps = std::size_t{1} << 20;
  while (steps < kMaxSteps) {
    steps *= 2;
    const double next = ode_oracle(z, s, f, steps);
    if (std::abs(next - prev) <= tol * std::max(1.0, std::abs(z))) return next;
    prev = next;
  }
  throw std::runtime_error("ode_flow: substep refinement did not converge");
}

double psi(double z, double s, const FlowMap& flow, const ScalarMap& f) {
  if (s < kPsiMinStep) return f(z);
  return (flow(z, s) - z) / s;
}

PhysicalField apply_pointwise(const PhysicalField& phys, const ScalarMap& map) {
  PhysicalField out = phys;
  for (double& x : out.samples) x = map(x);
  return out;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

DriftSplit::DriftSplit(DriftKind f, LipschitzPart g) : f_(std::move(f)), g_(std::move(g)) {
  if (const auto* p = std::get_if<PolyOdd>(&f_); p && p->q < 1) {
    throw std::invalid_argument("poly_odd drift requires q >= 1");
  }
  if (const auto* c = std::get_if<CustomDrift>(&f_); c && !c->f) {
    throw std::invalid_argument("custom drift needs a callable");
  }
  if (const auto* c = std::get_if<CustomLipschitz>(&g_); c && !c->g) {
    throw std::invalid_argument("custom g needs a callable");
  }
}

double DriftSplit::f(double z) const {
  return std::visit(overloaded{
                        [z](const PolyOdd& p) { return p.q == 1 ? -z * z * z : -std::pow(z, 2 * p.q + 1); },
                        [z](const CubicLinear&) { return z - z * z * z; },
                        [](const ZeroDrift&) { return 0.0; },
                        [z](const CustomDrift& c) { return c.f(z); },
                    },
                    f_);
}

double DriftSplit::flow(double z, double s) const {
  return std::visit(overloaded{
                        [=](const PolyOdd& p) { return poly_flow(z, s, p.q); },
                        [=](const CubicLinear&) { return cubic_linear_flow(z, s); },
                        [=](const ZeroDrift&) { return z; },
                        [=](const CustomDrift& c) { return ode_flow(z, s, c.f); },
                    },
                    f_);
}

double DriftSplit::psi(double z, double s) const {
  return fspde::psi(
      z, s, [this](double x, double t) { return flow(x, t); },
      [this](double x) { return f(x); });
}

double DriftSplit::g(double z) const {
  return std::visit(overloaded{
                        [z](LipschitzKind k) {
                          switch (k) {
                            case LipschitzKind::zero:
                              return 0.0;
                            case LipschitzKind::identity:
                              return z;
                            case LipschitzKind::sine:
                              return std::sin(z);
                            case LipschitzKind::affine_sine:
                              return z + std::sin(z) + 1.0;
                          }
                          return 0.0;
                        },
                        [z](const CustomLipschitz& c) { return c.g(z); },
                    },
                    g_);
}

bool DriftSplit::g_is_zero() const {
  const auto* k = std::get_if<LipschitzKind>(&g_);
  return k && *k == LipschitzKind::zero;
}

std::string DriftSplit::f_name() const {
  return std::visit(overloaded{
                        [](const PolyOdd& p) { return std::string("poly_odd(q=") + std::to_string(p.q) + ")"; },
                        [](const CubicLinear&) { return std::string("cubic_linear"); },
                        [](const ZeroDrift&) { return std::string("zero"); },
                        [](const CustomDrift&) { return std::string("custom"); },
                    },
                    f_);
}

std::string DriftSplit::g_name() const {
  return std::visit(overloaded{
                        [](LipschitzKind k) -> std::string {
                          switch (k) {
                            case LipschitzKind::zero:
                              return "zero";
                            case LipschitzKind::identity:
                              return "identity";
                            case LipschitzKind::sine:
                              return "sine";
                            case LipschitzKind::affine_sine:
                              return "affine_sine";
                          }
                          return "unknown";
                        },
                        [](const CustomLipschitz&) -> std::string { return "custom"; },
                    },
                    g_);
}

}  // namespace fspde
