#include "fspde/hurst.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fspde {

std::string_view to_string(HurstRegime regime) {
  switch (regime) {
    case HurstRegime::rough:
      return "rough";
    case HurstRegime::standard:
      return "standard";
    case HurstRegime::smooth:
      return "smooth";
  }
  return "unknown";
}

HurstModel::HurstModel(double H) : H_(H) {
  if (!(H > 0.0 && H < 1.0)) {
    throw std::domain_error("Hurst index must lie in (0,1), got " +
                            std::to_string(H));
  }
  if (H == 0.5) {
    regime_ = HurstRegime::standard;
  } else if (H > 0.5) {
    regime_ = HurstRegime::smooth;
    c_H_ = std::sqrt(H * (2.0 * H - 1.0) / std::beta(2.0 - 2.0 * H, H - 0.5));
  } else {
    regime_ = HurstRegime::rough;
    c_H_ = -std::sqrt(H * (1.0 - 2.0 * H) /
                      (2.0 * std::beta(1.0 - 2.0 * H, H + 0.5)));
  }
}

double HurstModel::c_H() const {
  if (regime_ == HurstRegime::standard) {
    throw std::logic_error("c_H is undefined for H = 1/2");
  }
  return c_H_;
}

}  // namespace fspde
