#pragma once

#include <string_view>

namespace fspde {

enum class HurstRegime { rough, standard, smooth };

std::string_view to_string(HurstRegime regime);

/// Hurst index H of a fractional Brownian motion with the constants derived
/// from it. H < 1/2 is anti-correlated (rough), H > 1/2 long-range positively
/// correlated (smooth), H = 1/2 is standard Brownian motion.
class HurstModel {
 public:
  /// Throws std::domain_error unless 0 < H < 1.
  explicit HurstModel(double H);

  double value() const { return H_; }
  HurstRegime regime() const { return regime_; }

  /// Normalising constant of the Volterra kernel K_H. Negative for H < 1/2,
  /// positive for H > 1/2; throws std::logic_error at H = 1/2 where the
  /// kernel representation is not used.
  double c_H() const;

  /// Upper end 2H - 1/2 of the admissible regularity range for the stochastic
  /// convolution; the solution has positive spatial regularity iff H > 1/4.
  double max_regularity() const { return 2.0 * H_ - 0.5; }
  bool admits_positive_regularity() const { return H_ > 0.25; }

  /// Strong convergence order H - 1/4 of the splitting scheme.
  double theory_rate() const { return H_ - 0.25; }

  friend bool operator==(const HurstModel&, const HurstModel&) = default;

 private:
  double H_;
  HurstRegime regime_;
  double c_H_ = 0.0;
};

}  // namespace fspde
