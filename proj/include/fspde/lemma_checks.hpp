#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace fspde {

/// One scaling-exponent check of the fractional OU bounds: a parameter sweep,
/// the oracle values along it and the fitted log-log exponent.
struct LemmaCheck {
  enum class Comparison { within, at_least };

  std::string id;
  std::string statement;
  std::string sweep_variable;
  std::vector<double> sweep;
  std::vector<double> values;
  double fitted_exponent = 0.0;
  double expected_exponent = 0.0;
  Comparison comparison = Comparison::within;
  double tolerance = 0.1;
  bool pass = false;
};

/// sup_t Var Z(t) against lambda; expected exponent -2H.
LemmaCheck check_moment_bound(double H);
/// sup over dt and n of Var Z_n against lambda; expected exponent -2H.
LemmaCheck check_discrete_moment_bound(double H);
/// Var(Z(t1 + gap) - Z(t1)) against the gap at lambda = 10; expected 2H.
LemmaCheck check_temporal_regularity(double H);
/// Var(Z(1) - Z_n) against dt at lambda = 20. For H >= 1/2 the exponent is
/// 2 on the lambda dt < 1 points; for H < 1/2 it must be at least 2 alpha
/// with alpha = 3H/2.
LemmaCheck check_discretization_error(double H);

std::vector<LemmaCheck> verify_lemmas(double H);

nlohmann::json to_json(const LemmaCheck& check);
nlohmann::json lemma_report(double H, const std::vector<LemmaCheck>& checks);

}  // namespace fspde
