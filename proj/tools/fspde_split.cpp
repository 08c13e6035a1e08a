#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fspde/experiments.hpp"
#include "fspde/fbm_noise.hpp"
#include "fspde/lemma_checks.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kToleranceFailure = 2;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void print_rates(const fspde::ConvergenceReport& report, std::ostream& os) {
  os << "      L          dt         rms     std.err\n";
  char line[128];
  for (const auto& e : report.entries) {
    std::snprintf(line, sizeof line, "%7zu  %10.4e  %10.4e  %10.4e\n", e.L, e.dt, e.rms_error,
                  e.standard_error);
    os << line;
  }
  if (report.fit) {
    os << "slope " << report.fit->slope << " (theory " << report.theory_slope << ")";
    if (report.coarse_fit) os << ", large-dt slope " << report.coarse_fit->slope;
    os << "\n";
  } else {
    os << "slope unavailable: fewer than two nonzero errors\n";
  }
}

int run_study(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir) {
  auto study = fspde::study_config_from_json(read_json(config_path));
  if (seed) study.base.seed = *seed;
  if (!out_dir.empty()) study.output_path = out_dir;

  const auto report = fspde::convergence_study(study);
  if (!study.output_path.empty()) fspde::emit_report(report, study.output_path);
  print_rates(report, std::cout);

  const bool ok = report.passes(study);
  std::cout << (ok ? "PASS" : "FAIL: slope outside band or standard error too large") << "\n";
  return ok ? kPass : kToleranceFailure;
}

int run_verify(double H, const std::string& out) {
  const auto checks = fspde::verify_lemmas(H);
  const auto report = fspde::lemma_report(H, checks);
  const std::string text = report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
  return report.at("pass").get<bool>() ? kPass : kToleranceFailure;
}

int run_sample(double H, std::size_t steps, std::size_t modes, double dt, std::uint64_t seed,
               const std::string& out) {
  if (!(dt > 0.0)) dt = 1.0 / static_cast<double>(steps);
  const auto lattice = fspde::NoiseLattice::sample(seed, fspde::HurstModel(H), modes, steps, dt);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out);
  lattice.write_csv(os);
  if (!os) throw std::runtime_error("write failed for " + out);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Splitting scheme for SPDEs driven by fractional Brownian motion"};
  app.require_subcommand(1);

  auto* study = app.add_subcommand("study", "Monte Carlo strong convergence study");
  std::string config_path, study_out;
  std::optional<std::uint64_t> seed;
  study->add_option("--config", config_path, "JSON study configuration")->required();
  study->add_option("--seed", seed, "Override the configured seed");
  study->add_option("--out", study_out, "Output directory (overrides output_path)");

  auto* verify = app.add_subcommand("verify-lemmas", "Check the fractional OU moment bounds");
  double verify_H = 0.0;
  std::string verify_out;
  verify->add_option("--hurst", verify_H, "Hurst index in (0,1)")->required();
  verify->add_option("--out", verify_out, "Write the JSON report here instead of stdout");

  auto* sample = app.add_subcommand("sample-noise", "Sample fBm increments to CSV");
  double sample_H = 0.0, sample_dt = 0.0;
  std::size_t steps = 0, modes = 1;
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  sample->add_option("--hurst", sample_H, "Hurst index in (0,1)")->required();
  sample->add_option("--steps", steps, "Number of time steps")->required()->check(CLI::PositiveNumber);
  sample->add_option("--out", sample_out, "CSV output path")->required();
  sample->add_option("--modes", modes, "Number of independent modes")->check(CLI::PositiveNumber);
  sample->add_option("--dt", sample_dt, "Step size (default 1/steps)");
  sample->add_option("--seed", sample_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kError;
  }

  try {
    if (*study) return run_study(config_path, seed, study_out);
    if (*verify) return run_verify(verify_H, verify_out);
    return run_sample(sample_H, steps, modes, sample_dt, sample_seed, sample_out);
  } catch (const std::exception& e) {
    std::cerr << "fspde-split: " << e.what() << "\n";
    return kError;
  }
}
