#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "fspde/experiments.hpp"
#include "fspde/fbm_noise.hpp"
#include "fspde/flows.hpp"
#include "fspde/frac_ou.hpp"
#include "fspde/hurst.hpp"
#include "fspde/lemma_checks.hpp"
#include "fspde/rng.hpp"
#include "fspde/scheme.hpp"
#include "fspde/spectral.hpp"

namespace py = pybind11;
using namespace fspde;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

DriftKind parse_f(const py::object& f, int q) {
  if (py::isinstance<py::str>(f)) {
    const auto name = f.cast<std::string>();
    if (name == "poly_odd") return PolyOdd{q};
    if (name == "cubic_linear") return CubicLinear{};
    if (name == "zero") return ZeroDrift{};
    throw std::invalid_argument("unknown f kind '" + name + "'");
  }
  return CustomDrift{f.cast<ScalarMap>()};
}

LipschitzPart parse_g(const py::object& g) {
  if (py::isinstance<py::str>(g)) {
    const auto name = g.cast<std::string>();
    if (name == "zero") return LipschitzKind::zero;
    if (name == "identity") return LipschitzKind::identity;
    if (name == "sine") return LipschitzKind::sine;
    if (name == "affine_sine") return LipschitzKind::affine_sine;
    throw std::invalid_argument("unknown g kind '" + name + "'");
  }
  return CustomLipschitz{g.cast<ScalarMap>()};
}

InitialData parse_x0(const py::object& x0) {
  if (py::isinstance<py::str>(x0)) {
    if (x0.cast<std::string>() != "sin_pi") throw std::invalid_argument("x0 must be 'sin_pi' or samples");
    return SinPiInitial{};
  }
  return TabulatedInitial{to_vector(x0.cast<Array>())};
}

nlohmann::json to_nlohmann(const py::object& obj) {
  auto json = py::module_::import("json");
  return nlohmann::json::parse(json.attr("dumps")(obj).cast<std::string>());
}

py::object from_nlohmann(const nlohmann::json& j) {
  auto json = py::module_::import("json");
  return json.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core numerics: fGN sampling, sine-spectral splitting scheme, fractional OU oracle";

  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

  py::enum_<HurstRegime>(m, "HurstRegime")
      .value("rough", HurstRegime::rough)
      .value("standard", HurstRegime::standard)
      .value("smooth", HurstRegime::smooth);

  py::class_<HurstModel>(m, "HurstModel")
      .def(py::init<double>(), py::arg("H"))
      .def_property_readonly("value", &HurstModel::value)
      .def_property_readonly("regime", &HurstModel::regime)
      .def("c_H", &HurstModel::c_H)
      .def("max_regularity", &HurstModel::max_regularity)
      .def("admits_positive_regularity", &HurstModel::admits_positive_regularity)
      .def("theory_rate", &HurstModel::theory_rate)
      .def("__repr__", [](const HurstModel& h) {
        std::ostringstream os;
        os << "HurstModel(" << h.value() << ")";
        return os.str();
      });

  // fBm noise
  m.def("fgn_autocovariance", &fgn_autocovariance, py::arg("lag"), py::arg("H"), py::arg("dt"));
  m.def("exact_covariance_matrix", &exact_covariance_matrix, py::arg("n_steps"), py::arg("H"),
        py::arg("dt"));
  m.def(
      "sample_fgn_path",
      [](std::size_t n, double H, double dt, std::uint64_t seed, std::uint64_t stream) {
        RngStream rng(seed, stream);
        return to_array(sample_fgn_path(n, H, dt, rng));
      },
      py::arg("n_steps"), py::arg("H"), py::arg("dt"), py::arg("seed") = 0, py::arg("stream") = 0,
      "One path of n consecutive fGN increments from the Philox stream (seed, stream).");
  m.def(
      "coarsen", [](const Array& a, std::size_t factor) { return to_array(coarsen(to_vector(a), factor)); },
      py::arg("increments"), py::arg("factor"));

  py::class_<NoiseLattice>(m, "NoiseLattice")
      .def_static(
          "sample",
          [](std::uint64_t seed, double H, std::size_t n_modes, std::size_t n_steps, double dt) {
            return NoiseLattice::sample(seed, HurstModel(H), n_modes, n_steps, dt);
          },
          py::arg("seed"), py::arg("H"), py::arg("n_modes"), py::arg("n_steps"), py::arg("dt_fine"))
      .def_property_readonly("dt_fine", &NoiseLattice::dt_fine)
      .def_property_readonly("n_modes", &NoiseLattice::n_modes)
      .def_property_readonly("n_steps", &NoiseLattice::n_steps)
      .def_property_readonly("seed", &NoiseLattice::seed)
      .def("coarsened", &NoiseLattice::coarsened, py::arg("factor"))
      .def("to_numpy",
           [](const NoiseLattice& l) {
             const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(l.n_modes()),
                                                  static_cast<py::ssize_t>(l.n_steps())};
             return py::array_t<double>(shape, l.data().data());
           })
      .def("to_csv", [](const NoiseLattice& l) {
        std::ostringstream os;
        l.write_csv(os);
        return os.str();
      });

  // Spectral space
  m.def(
      "dst_forward", [](const Array& x) { return to_array(dst_forward(PhysicalField{to_vector(x)}).coeffs); },
      py::arg("samples"), "Interior grid samples to sine coefficients.");
  m.def(
      "dst_inverse",
      [](const Array& c) { return to_array(dst_inverse(SpectralField{to_vector(c), 1.0}).samples); },
      py::arg("coeffs"), "Sine coefficients to interior grid samples.");
  m.def("grid_points", [](std::size_t n) { return to_array(grid_points(n)); }, py::arg("n"));
  m.def("laplacian_eigenvalue", &laplacian_eigenvalue, py::arg("k"));
  m.def("semigroup_factor", &semigroup_factor, py::arg("k"), py::arg("eps"), py::arg("dt"));
  m.def("smoothed_increment_factor", &smoothed_increment_factor, py::arg("k"), py::arg("eps"),
        py::arg("dt"));

  // Flows
  m.def("poly_flow", &poly_flow, py::arg("z"), py::arg("s"), py::arg("q") = 1);
  m.def("cubic_linear_flow", &cubic_linear_flow, py::arg("z"), py::arg("s"));
  m.def("ode_oracle", &ode_oracle, py::arg("z"), py::arg("s"), py::arg("f"), py::arg("steps"));

  // Scheme
  m.def(
      "run_trajectory",
      [](double T, std::size_t L, std::size_t N, double eps, const NoiseLattice& noise,
         const py::object& f, int q, const py::object& g, const py::object& x0, std::size_t save_every) {
        SchemeConfig cfg;
        cfg.T = T;
        cfg.L = L;
        cfg.N = N;
        cfg.eps = eps;
        cfg.hurst = noise.hurst();
        cfg.drift = DriftSplit(parse_f(f, q), parse_g(g));
        cfg.x0 = parse_x0(x0);
        cfg.seed = noise.seed();
        const auto states = run_trajectory(cfg, noise, save_every);
        py::list steps, coeffs;
        for (const auto& s : states) {
          steps.append(s.step_index);
          coeffs.append(to_array(s.spectral.coeffs));
        }
        return py::make_tuple(steps, coeffs);
      },
      py::arg("T"), py::arg("L"), py::arg("N"), py::arg("eps"), py::arg("noise"),
      py::arg("f") = "poly_odd", py::arg("q") = 1, py::arg("g") = "zero", py::arg("x0") = "sin_pi",
      py::arg("save_every") = 0,
      "Runs the splitting scheme; f and g are kind names or Python callables. Returns (steps, coefficients).");
  m.def(
      "run_linear",
      [](double T, std::size_t L, std::size_t N, double eps, const NoiseLattice& noise) {
        SchemeConfig cfg;
        cfg.T = T;
        cfg.L = L;
        cfg.N = N;
        cfg.eps = eps;
        cfg.hurst = noise.hurst();
        py::list out;
        for (const auto& z : run_linear(cfg, noise)) out.append(to_array(z.coeffs));
        return out;
      },
      py::arg("T"), py::arg("L"), py::arg("N"), py::arg("eps"), py::arg("noise"));

  // Fractional OU oracle
  m.def(
      "discrete_fou_variance",
      [](double lambda, double H, double dt, std::size_t n) {
        return discrete_fou_variance({lambda, HurstModel(H), dt, n});
      },
      py::arg("lam"), py::arg("H"), py::arg("dt"), py::arg("n"));
  m.def("continuous_fou_variance_oracle", &continuous_fou_variance_oracle, py::arg("lam"), py::arg("t"),
        py::arg("H"), py::arg("fine_m"));
  m.def(
      "scheme_error_variance_oracle",
      [](double lambda, double H, double dt, std::size_t n, std::size_t per_step) {
        return scheme_error_variance_oracle({lambda, HurstModel(H), dt, n}, per_step);
      },
      py::arg("lam"), py::arg("H"), py::arg("dt"), py::arg("n"), py::arg("fine_m_per_step") = 64);
  m.def("temporal_increment_variance", &temporal_increment_variance, py::arg("lam"), py::arg("t1"),
        py::arg("t2"), py::arg("H"), py::arg("fine_m"));
  m.def("kernel_KH", &kernel_KH, py::arg("t"), py::arg("s"), py::arg("H"));
  m.def(
      "verify_lemmas",
      [](double H) {
        std::vector<LemmaCheck> checks;
        {
          py::gil_scoped_release release;
          checks = verify_lemmas(H);
        }
        return from_nlohmann(lemma_report(H, checks));
      },
      py::arg("H"), "Scaling-exponent checks of the fractional OU bounds as a dict.");

  // Convergence study
  m.def(
      "convergence_study",
      [](const py::dict& config) {
        const StudyConfig study = study_config_from_json(to_nlohmann(config));
        ConvergenceReport report;
        {
          py::gil_scoped_release release;
          report = convergence_study(study);
        }
        auto out = from_nlohmann(to_json(report));
        out["passes"] = report.passes(study);
        return out;
      },
      py::arg("config"), "Monte Carlo strong-error study; config uses the CLI JSON schema.");
  m.def("worker_count", &worker_count, py::arg("requested") = 0);
}
