#include "fspde/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fspde {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json fit_to_json(const RateFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"max_residual", f.max_residual}};
}

RateFit fit_from_json(const nlohmann::json& j) {
  return RateFit{j.at("slope").get<double>(), j.at("intercept").get<double>(),
                 j.at("max_residual").get<double>()};
}

std::optional<RateFit> fit_entries(std::span<const RateEntry> entries) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : entries) {
    if (e.rms_error > 0.0) pts.emplace_back(e.dt, e.rms_error);
  }
  if (pts.size() < 2) return std::nullopt;
  return fit_rate(pts);
}

}  // namespace

void StudyConfig::validate() const {
  base.validate();
  if (L_list.empty()) throw std::invalid_argument("L_list must not be empty");
  if (L_ref == 0) throw std::invalid_argument("L_ref must be >= 1");
  if (M < 2) throw std::invalid_argument("M must be >= 2");
  for (std::size_t L : L_list) {
    if (L == 0 || L_ref % L != 0) {
      throw std::invalid_argument("L = " + std::to_string(L) + " does not divide L_ref = " +
                                  std::to_string(L_ref));
    }
  }
  if (expected_slope && expected_slope->first > expected_slope->second) {
    throw std::invalid_argument("expected_slope band is empty");
  }
}

bool ConvergenceReport::passes(const StudyConfig& study) const {
  for (const auto& e : entries) {
    if (e.rms_error > 0.0 &&
        e.standard_error > study.max_relative_standard_error * e.rms_error) {
      return false;
    }
  }
  if (study.expected_slope) {
    if (!fit) return false;
    return fit->slope >= study.expected_slope->first && fit->slope <= study.expected_slope->second;
  }
  return true;
}

std::size_t worker_count(std::size_t requested) {
  std::size_t n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FSPDE_THREADS")) {
    std::size_t cap = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (res.ec == std::errc() && cap > 0) n = std::min(n, cap);
  }
  return n;
}

ConvergenceReport convergence_study(const StudyConfig& study) {
  study.validate();
  const SchemeConfig& base = study.base;
  const std::size_t n_levels = study.L_list.size();
  std::vector<double> sq_err(study.M * n_levels, 0.0);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::string error_context;

  auto worker = [&] {
    for (;;) {
      const std::size_t m = next.fetch_add(1);
      if (m >= study.M) return;
      std::size_t current_L = study.L_ref;
      try {
        const NoiseLattice noise =
            NoiseLattice::sample(derive_seed(base.seed, m), base.hurst, base.N, study.L_ref,
                                 base.T / static_cast<double>(study.L_ref));
        SchemeConfig cfg = base;
        cfg.L = study.L_ref;
        const TrajectoryState ref = run_to_final(cfg, noise);
        for (std::size_t i = 0; i < n_levels; ++i) {
          current_L = study.L_list[i];
          cfg.L = current_L;
          double e2 = 0.0;
          if (current_L != study.L_ref) {
            const TrajectoryState x = run_to_final(cfg, noise);
            for (std::size_t k = 0; k < base.N; ++k) {
              const double d = x.spectral.coeffs[k] - ref.spectral.coeffs[k];
              e2 += d * d;
            }
          }
          sq_err[m * n_levels + i] = e2;
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
          error_context = "realization " + std::to_string(m) + ", L = " + std::to_string(current_L);
        }
        next.store(study.M);
        return;
      }
    }
  };

  const std::size_t n_threads = std::min(worker_count(study.threads), study.M);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      throw std::runtime_error("convergence study failed at " + error_context + ": " + e.what());
    }
  }

  ConvergenceReport report;
  const double M = static_cast<double>(study.M);
  for (std::size_t i = 0; i < n_levels; ++i) {
    std::vector<double> col(study.M);
    for (std::size_t m = 0; m < study.M; ++m) col[m] = sq_err[m * n_levels + i];
    const double mean = pairwise_sum(col) / M;
    std::vector<double> dev(study.M);
    for (std::size_t m = 0; m < study.M; ++m) dev[m] = (col[m] - mean) * (col[m] - mean);
    const double var = pairwise_sum(dev) / (M - 1.0);
    RateEntry e;
    e.L = study.L_list[i];
    e.dt = base.T / static_cast<double>(e.L);
    e.rms_error = std::sqrt(mean);
    // Delta method: se(sqrt(m)) = se(m) / (2 sqrt(m)).
    e.standard_error = e.rms_error > 0.0 ? std::sqrt(var / M) / (2.0 * e.rms_error) : 0.0;
    report.entries.push_back(e);
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const RateEntry& a, const RateEntry& b) { return a.dt > b.dt; });

  report.fit = fit_entries(report.entries);
  std::vector<RateEntry> positive;
  for (const auto& e : report.entries)
    if (e.rms_error > 0.0) positive.push_back(e);
  const std::size_t coarse_n = (positive.size() + 1) / 2;
  if (coarse_n >= 2 && coarse_n < positive.size()) {
    report.coarse_fit = fit_entries(std::span<const RateEntry>(positive).first(coarse_n));
  }
  report.theory_slope = base.hurst.theory_rate();
  report.config = to_json(study);
  report.seed = base.seed;
  return report;
}

std::string rates_csv(const ConvergenceReport& report) {
  std::string out = "dt,rms_error,std_error\n";
  for (const auto& e : report.entries) {
    out += format_double(e.dt) + ',' + format_double(e.rms_error) + ',' +
           format_double(e.standard_error) + '\n';
  }
  return out;
}

nlohmann::json to_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) {
    j["entries"].push_back(
        {{"L", e.L}, {"dt", e.dt}, {"rms_error", e.rms_error}, {"std_error", e.standard_error}});
  }
  j["fit"] = report.fit ? fit_to_json(*report.fit) : nlohmann::json(nullptr);
  j["coarse_fit"] = report.coarse_fit ? fit_to_json(*report.coarse_fit) : nlohmann::json(nullptr);
  j["slope"] = report.fit ? nlohmann::json(report.fit->slope) : nlohmann::json(nullptr);
  j["theory_slope"] = report.theory_slope;
  j["seed"] = report.seed;
  j["config"] = report.config;
  return j;
}

ConvergenceReport report_from_json(const nlohmann::json& j) {
  ConvergenceReport r;
  for (const auto& e : j.at("entries")) {
    r.entries.push_back(RateEntry{e.at("L").get<std::size_t>(), e.at("dt").get<double>(),
                                  e.at("rms_error").get<double>(),
                                  e.at("std_error").get<double>()});
  }
  if (!j.at("fit").is_null()) r.fit = fit_from_json(j.at("fit"));
  if (!j.at("coarse_fit").is_null()) r.coarse_fit = fit_from_json(j.at("coarse_fit"));
  r.theory_slope = j.at("theory_slope").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.at("config");
  return r;
}

void emit_report(const ConvergenceReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  auto write = [](const std::filesystem::path& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << body;
    if (!os) throw std::runtime_error("write failed for " + path.string());
  };

  write(dir / "rates.csv", rates_csv(report));
  write(dir / "report.json", to_json(report).dump(2) + "\n");

  std::ostringstream gp;
  gp.imbue(std::locale::classic());
  gp << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'dt'\n"
     << "set ylabel 'rms strong error'\n"
     << "set key top left\n";
  std::string plot = "plot 'rates.csv' skip 1 using 1:2:3 with yerrorlines title 'error'";
  if (report.fit) {
    gp << "a = " << format_double(std::exp(report.fit->intercept)) << "\n"
       << "p = " << format_double(report.fit->slope) << "\n";
    plot += ", a * x**p title sprintf('fit %.3f', p)";
  }
  if (!report.entries.empty()) {
    const auto& first = report.entries.front();
    gp << "r = " << format_double(report.theory_slope) << "\n"
       << "b = " << format_double(first.rms_error / std::pow(first.dt, report.theory_slope))
       << "\n";
    plot += ", b * x**r title 'order H-1/4' dashtype 2";
  }
  gp << plot << "\n";
  write(dir / "rates.gp", gp.str());
}

namespace {

DriftSplit drift_from_json(const nlohmann::json& j) {
  const std::string f = j.value("f", "poly_odd");
  const std::string g = j.value("g", "zero");
  DriftKind fk;
  if (f == "poly_odd") {
    fk = PolyOdd{j.value("q", 1)};
  } else if (f == "cubic_linear") {
    fk = CubicLinear{};
  } else if (f == "zero") {
    fk = ZeroDrift{};
  } else {
    throw std::invalid_argument("unknown drift f kind '" + f + "'");
  }
  LipschitzPart gk;
  if (g == "zero") {
    gk = LipschitzKind::zero;
  } else if (g == "identity") {
    gk = LipschitzKind::identity;
  } else if (g == "sine") {
    gk = LipschitzKind::sine;
  } else if (g == "affine_sine") {
    gk = LipschitzKind::affine_sine;
  } else {
    throw std::invalid_argument("unknown drift g kind '" + g + "'");
  }
  return DriftSplit(fk, gk);
}

nlohmann::json drift_to_json(const DriftSplit& d) {
  nlohmann::json j;
  std::visit(overloaded{
                 [&](const PolyOdd& p) {
                   j["f"] = "poly_odd";
                   j["q"] = p.q;
                 },
                 [&](const CubicLinear&) { j["f"] = "cubic_linear"; },
                 [&](const ZeroDrift&) { j["f"] = "zero"; },
                 [&](const CustomDrift&) { j["f"] = "custom"; },
             },
             d.f_kind());
  j["g"] = d.g_name();
  return j;
}

}  // namespace

StudyConfig study_config_from_json(const nlohmann::json& j) {
  StudyConfig s;
  SchemeConfig& b = s.base;
  b.T = j.value("T", 1.0);
  b.N = j.at("N").get<std::size_t>();
  b.eps = j.value("eps", 1.0);
  b.hurst = HurstModel(j.at("hurst").get<double>());
  b.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("drift")) b.drift = drift_from_json(j.at("drift"));
  if (j.contains("x0")) {
    const auto& x0 = j.at("x0");
    if (x0.is_string()) {
      if (x0.get<std::string>() != "sin_pi") {
        throw std::invalid_argument("unknown x0 '" + x0.get<std::string>() + "'");
      }
      b.x0 = SinPiInitial{};
    } else if (x0.is_array()) {
      b.x0 = TabulatedInitial{x0.get<std::vector<double>>()};
    } else if (x0.is_object() && x0.contains("coeffs")) {
      b.x0 = SpectralInitial{x0.at("coeffs").get<std::vector<double>>()};
    } else {
      throw std::invalid_argument("x0 must be \"sin_pi\", a sample array or {\"coeffs\": [...]}");
    }
  }
  s.L_list = j.at("L_list").get<std::vector<std::size_t>>();
  s.L_ref = j.at("L_ref").get<std::size_t>();
  s.M = j.at("M").get<std::size_t>();
  b.L = s.L_ref;
  s.output_path = j.value("output_path", std::string());
  if (j.contains("expected_slope") && !j.at("expected_slope").is_null()) {
    const auto band = j.at("expected_slope").get<std::vector<double>>();
    if (band.size() != 2) throw std::invalid_argument("expected_slope must be [lo, hi]");
    s.expected_slope = std::make_pair(band[0], band[1]);
  }
  s.max_relative_standard_error = j.value("max_relative_standard_error", 0.2);
  s.threads = j.value("threads", std::size_t{0});
  s.validate();
  return s;
}

nlohmann::json to_json(const StudyConfig& s) {
  const SchemeConfig& b = s.base;
  nlohmann::json j;
  j["T"] = b.T;
  j["N"] = b.N;
  j["eps"] = b.eps;
  j["hurst"] = b.hurst.value();
  j["seed"] = b.seed;
  j["drift"] = drift_to_json(b.drift);
  std::visit(overloaded{
                 [&](const SinPiInitial&) { j["x0"] = "sin_pi"; },
                 [&](const TabulatedInitial& t) { j["x0"] = t.samples; },
                 [&](const SpectralInitial& c) { j["x0"] = {{"coeffs", c.coeffs}}; },
             },
             b.x0);
  j["L_list"] = s.L_list;
  j["L_ref"] = s.L_ref;
  j["M"] = s.M;
  j["error_norm"] = "L2";
  j["output_path"] = s.output_path;
  j["expected_slope"] = s.expected_slope
                            ? nlohmann::json::array({s.expected_slope->first, s.expected_slope->second})
                            : nlohmann::json(nullptr);
  j["max_relative_standard_error"] = s.max_relative_standard_error;
  return j;
}

}  // namespace fspde
