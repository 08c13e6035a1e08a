#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fspde/fit.hpp"
#include "fspde/scheme.hpp"
#include "json.hpp"

namespace fspde {

/// Multi-resolution strong-error study. Every realization samples one noise
/// lattice on the reference grid T / L_ref; coarse runs use the summed
/// increments of the same path.
struct StudyConfig {
  SchemeConfig base;
  std::vector<std::size_t> L_list;
  std::size_t L_ref = 0;
  std::size_t M = 2;
  std::string output_path;
  /// Optional acceptance band for the fitted slope.
  std::optional<std::pair<double, double>> expected_slope;
  /// Upper bound on per-point standard error relative to the rms value.
  double max_relative_standard_error = 0.2;
  /// 0 means FSPDE_THREADS or the hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

struct RateEntry {
  std::size_t L = 0;
  double dt = 0.0;
  double rms_error = 0.0;
  double standard_error = 0.0;
};

struct ConvergenceReport {
  std::vector<RateEntry> entries;  ///< sorted by dt descending
  std::optional<RateFit> fit;      ///< over entries with rms_error > 0, if >= 2
  std::optional<RateFit> coarse_fit;  ///< over the larger-dt half
  double theory_slope = 0.0;
  nlohmann::json config;
  std::uint64_t seed = 0;

  /// Slope inside the configured band and every standard error within the
  /// configured fraction of its rms value.
  bool passes(const StudyConfig& study) const;
};

/// Worker count: FSPDE_THREADS if set, else the hardware concurrency.
std::size_t worker_count(std::size_t requested = 0);

ConvergenceReport convergence_study(const StudyConfig& study);

/// Writes rates.csv, report.json and rates.gp into `dir`.
void emit_report(const ConvergenceReport& report, const std::filesystem::path& dir);

/// CSV body with header `dt,rms_error,std_error`, LF endings, shortest
/// round-trip decimal formatting independent of the global locale.
std::string rates_csv(const ConvergenceReport& report);

nlohmann::json to_json(const ConvergenceReport& report);
ConvergenceReport report_from_json(const nlohmann::json& j);

/// JSON config:
///   {"T":1, "N":64, "eps":1, "hurst":0.7, "seed":42,
///    "drift":{"f":"poly_odd","q":1,"g":"identity"}, "x0":"sin_pi" | [samples],
///    "L_list":[8,16], "L_ref":2048, "M":100, "output_path":"out",
///    "expected_slope":[0.3,0.6], "threads":0}
StudyConfig study_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StudyConfig& study);

}  // namespace fspde
