#pragma once

#include <functional>
#include <string>
#include <variant>

#include "fspde/spectral.hpp"

namespace fspde {

using ScalarMap = std::function<double(double)>;
using FlowMap = std::function<double(double, double)>;

/// Exact flow of z' = -z^{2q+1}: z / (1 + 2q z^{2q} s)^{1/(2q)}.
double poly_flow(double z, double s, int q);

/// Exact flow of z' = z - z^3: z e^s / sqrt(1 + z^2 (e^{2s} - 1)).
double cubic_linear_flow(double z, double s);

/// Classical RK4 with `steps` uniform substeps over [0, s]. Throws
/// std::overflow_error if the state leaves |z| <= 1e8.
double ode_oracle(double z, double s, const ScalarMap& f, std::size_t steps);

/// Flow of z' = f(z) by RK4, doubling the substep count from 8 until two
/// successive results agree to `tol * max(1, |z|)`.
double ode_flow(double z, double s, const ScalarMap& f, double tol = 1e-9);

inline constexpr double kPsiMinStep = 1e-10;

/// (flow(z, s) - z) / s, and f(z) for s below kPsiMinStep.
double psi(double z, double s, const FlowMap& flow, const ScalarMap& f);

PhysicalField apply_pointwise(const PhysicalField& phys, const ScalarMap& map);

/// f(z) = -z^{2q+1}.
struct PolyOdd {
  int q = 1;
};
/// f(z) = z - z^3.
struct CubicLinear {};
/// f = 0; the flow is the identity.
struct ZeroDrift {};
/// User-supplied f; its flow is integrated numerically.
struct CustomDrift {
  ScalarMap f;
};
using DriftKind = std::variant<PolyOdd, CubicLinear, ZeroDrift, CustomDrift>;

enum class LipschitzKind { zero, identity, sine, affine_sine };
/// User-supplied globally Lipschitz g.
struct CustomLipschitz {
  ScalarMap g;
};
using LipschitzPart = std::variant<LipschitzKind, CustomLipschitz>;

/// Split of the reaction term into a one-sided Lipschitz part f, handled by
/// its exact flow, and a globally Lipschitz part g, handled explicitly.
class DriftSplit {
 public:
  DriftSplit(DriftKind f = PolyOdd{1}, LipschitzPart g = LipschitzKind::zero);

  double f(double z) const;
  double flow(double z, double s) const;
  double psi(double z, double s) const;
  double g(double z) const;

  /// True when g is identically zero, so the explicit term can be skipped.
  bool g_is_zero() const;

  const DriftKind& f_kind() const { return f_; }
  const LipschitzPart& g_kind() const { return g_; }

  std::string f_name() const;
  std::string g_name() const;

 private:
  DriftKind f_;
  LipschitzPart g_;
};

}  // namespace fspde
