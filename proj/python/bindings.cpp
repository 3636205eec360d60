#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <bit>
#include <cmath>
#include <sstream>

#include "levy/besov.hpp"
#include "levy/error.hpp"
#include "levy/harness.hpp"
#include "levy/sampling.hpp"
#include "levy/spectral.hpp"
#include "levy/wavelets.hpp"

namespace py = pybind11;
using namespace levy;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v, const GridSpec& g) {
  const auto n = static_cast<py::ssize_t>(g.cells_per_axis());
  std::vector<py::ssize_t> shape = g.d == 1 ? std::vector<py::ssize_t>{n} : std::vector<py::ssize_t>{n, n};
  Array out(shape);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

// Grid implied by a 1-d or square 2-d array with a power-of-two side.
GridSpec grid_of(const Array& a) {
  if (a.ndim() < 1 || a.ndim() > 2) throw ShapeError("field must be 1-d or 2-d");
  const auto n = static_cast<std::size_t>(a.shape(0));
  if (a.ndim() == 2 && static_cast<std::size_t>(a.shape(1)) != n) throw ShapeError("2-d field must be square");
  if (n < 2 || !std::has_single_bit(n)) throw ShapeError("field side must be a power of two");
  GridSpec g{int(a.ndim()), std::countr_zero(n)};
  g.validate();
  return g;
}

OperatorSymbol make_symbol(const std::string& op, double gamma) {
  if (op == "fractional_laplacian") return OperatorSymbol::fractional_laplacian(gamma);
  if (op == "matern") return OperatorSymbol::matern(gamma);
  throw ParameterError("unknown operator '" + op + "' (fractional_laplacian, matern)");
}

py::dict prediction_dict(const KappaPrediction& p) {
  py::dict d;
  d["kind"] = std::string(kappa_kind_name(p.kind));
  d["lower"] = p.lower;
  d["upper"] = p.upper;
  d["condition_satisfied"] = p.condition_satisfied;
  return d;
}

py::dict fit_dict(const KappaFit& f) {
  py::dict d;
  d["kappa"] = f.kappa;
  d["stderr"] = f.std_error;
  d["points"] = f.points;
  d["infinite"] = f.infinite;
  return d;
}

py::object json_loads(const std::string& s) { return py::module_::import("json").attr("loads")(s); }

}  // namespace

PYBIND11_MODULE(levycomp, m) {
  m.doc() = "Compressibility of periodic Levy processes: noises, spectral synthesis, wavelets, n-term rates";
  m.attr("__version__") = kVersion;

  static py::exception<Error> base(m, "LevyError", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<FitError>(m, "FitError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<LevyExponent>(m, "LevyExponent")
      .def(py::init([](const std::string& family, const std::map<std::string, double>& params) {
             return LevyExponent::from_named(family, params);
           }),
           py::arg("family"), py::arg("params") = std::map<std::string, double>{})
      .def_property_readonly("name", &LevyExponent::name)
      .def_property_readonly("params", &LevyExponent::named_parameters)
      .def("tag", &LevyExponent::tag)
      .def("__repr__", [](const LevyExponent& e) { return "LevyExponent(" + e.tag() + ")"; });

  m.def(
      "psi",
      [](const LevyExponent& e, py::array_t<double, py::array::forcecast> xi) {
        py::array_t<std::complex<double>> out(xi.request().shape);
        auto* dst = out.mutable_data();
        const double* in = xi.data();
        for (py::ssize_t i = 0; i < xi.size(); ++i) dst[i] = e.psi(in[i]);
        return out;
      },
      py::arg("exponent"), py::arg("xi"), "Levy exponent psi(xi), elementwise.");

  m.def(
      "bg_indices", [](const LevyExponent& e) { return py::make_tuple(e.bg_indices().beta, e.bg_indices().beta_prime); },
      py::arg("exponent"), "Blumenthal-Getoor indices (beta, beta').");

  m.def(
      "theoretical_kappa",
      [](const LevyExponent& e, double gamma, int d, double p0, double tau0) {
        return prediction_dict(theoretical_kappa(e, gamma, d, p0, tau0));
      },
      py::arg("exponent"), py::arg("gamma"), py::arg("d"), py::arg("p0") = 2.0, py::arg("tau0") = 0.0);

  m.def(
      "generate_noise",
      [](const LevyExponent& e, int d, int J, std::uint64_t seed) {
        const GridSpec g{d, J};
        NoiseField f;
        {
          py::gil_scoped_release release;
          f = generate_noise(e, g, seed);
        }
        return to_array(f.values, g);
      },
      py::arg("exponent"), py::arg("d"), py::arg("J"), py::arg("seed"),
      "Zero-mean white-noise samples on the 2^J grid (per unit volume).");

  m.def(
      "synthesize_process",
      [](const LevyExponent& e, int d, int J, std::uint64_t seed, const std::string& op, double gamma) {
        const GridSpec g{d, J};
        const auto sym = make_symbol(op, gamma);
        ProcessField p;
        {
          py::gil_scoped_release release;
          p = synthesize_process(e, g, sym, seed);
        }
        return to_array(p.values, g);
      },
      py::arg("exponent"), py::arg("d"), py::arg("J"), py::arg("seed"), py::arg("operator") = "fractional_laplacian",
      py::arg("gamma") = 1.0, "Sample of s = L^{-1} w on the 2^J grid.");

  m.def(
      "dwt",
      [](const Array& field, int k, int levels) {
        const GridSpec g = grid_of(field);
        const auto c = dwt_periodic(g, std::span<const double>(field.data(), std::size_t(field.size())), WaveletSpec(k),
                                    levels);
        py::array_t<double> values(py::ssize_t(c.size()));
        py::array_t<int> j(py::ssize_t(c.size())), gender(py::ssize_t(c.size()));
        std::copy(c.values().begin(), c.values().end(), values.mutable_data());
        for (const auto& b : c.bands()) {
          std::fill_n(j.mutable_data() + b.offset, b.count, b.j);
          std::fill_n(gender.mutable_data() + b.offset, b.count, b.gender);
        }
        py::dict out;
        out["values"] = values;
        out["j"] = j;
        out["gender"] = gender;
        out["zeta"] = WaveletSpec(k).zeta();
        return out;
      },
      py::arg("field"), py::arg("k") = 4, py::arg("levels") = -1,
      "Periodic Daubechies-k transform; returns coefficient values with their level j and gender.");

  m.def(
      "sigma_curve",
      [](const Array& field, std::vector<std::size_t> n_grid, int k, double tau, double p) {
        const GridSpec g = grid_of(field);
        const auto c = dwt_periodic(g, std::span<const double>(field.data(), std::size_t(field.size())), WaveletSpec(k));
        if (n_grid.empty()) n_grid = dyadic_grid(2, g.level * g.d - 2);
        const auto curve = sigma_curve(c, BesovParams{tau, p, p, g.d}, n_grid);
        return py::make_tuple(py::array_t<std::size_t>(py::ssize_t(curve.n.size()), curve.n.data()),
                              py::array_t<double>(py::ssize_t(curve.sigma.size()), curve.sigma.data()));
      },
      py::arg("field"), py::arg("n_grid") = std::vector<std::size_t>{}, py::arg("k") = 4, py::arg("tau") = 0.0,
      py::arg("p") = 2.0, "Best n-term errors sigma_n in b^tau_{p,p}; returns (n, sigma).");

  m.def(
      "estimate_kappa",
      [](std::vector<std::size_t> n, std::vector<double> sigma, double n_lo, double n_hi) {
        DecayCurve curve;
        curve.n = std::move(n);
        curve.sigma = std::move(sigma);
        return fit_dict(estimate_kappa(curve, FitRange{n_lo, n_hi}));
      },
      py::arg("n"), py::arg("sigma"), py::arg("n_lo") = 16.0, py::arg("n_hi") = 1024.0);

  m.def(
      "run_experiment",
      [](const std::string& config_text, int threads) {
        std::istringstream is(config_text);
        const auto cfg = parse_config(is, "<python>");
        ExperimentReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg, threads);
        }
        return json_loads(summary_json(r));
      },
      py::arg("config"), py::arg("threads") = 0,
      "Runs an experiment from config text (key = value lines); returns the summary record as a dict.");

  m.def("selftest", [] {
    py::list out;
    for (const auto& r : run_selftest()) out.append(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  });
}
