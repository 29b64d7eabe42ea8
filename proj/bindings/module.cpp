#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wassreg/errors.hpp"
#include "wassreg/d2d.hpp"
#include "wassreg/d2s.hpp"
#include "wassreg/io.hpp"
#include "wassreg/simulate.hpp"
#include "wassreg/war.hpp"

namespace py = pybind11;
using namespace wassreg;

namespace {

TruncationChoice parse_trunc(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "fve") return TruncationChoice::fve(rest.empty() ? 0.95 : std::stod(rest));
  if (head == "cv") return TruncationChoice::cv(rest.empty() ? 5 : std::stoi(rest));
  if (head == "fixed") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw invalid_input("fixed truncation expects 'fixed:J,K'");
    return TruncationChoice::fixed(std::stoi(rest.substr(0, comma)),
                                   std::stoi(rest.substr(comma + 1)));
  }
  throw invalid_input("unknown truncation spec: " + s);
}

}  // namespace

PYBIND11_MODULE(_wassreg, m) {
  m.doc() = "Wasserstein-space regression for one-dimensional distributions";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  // pybind cannot hold shared_ptr<const T>; the grid is immutable, so
  // const-casting at the boundary is safe.
  using PyGridPtr = std::shared_ptr<ProbGrid>;
  py::class_<ProbGrid, PyGridPtr>(m, "ProbGrid")
      .def_static(
          "midpoint",
          [](int mm) { return std::const_pointer_cast<ProbGrid>(ProbGrid::midpoint(mm)); },
          py::arg("m"))
      .def_property_readonly("points", &ProbGrid::points)
      .def_property_readonly("weights", &ProbGrid::weights)
      .def("__len__", &ProbGrid::size);

  py::class_<DistributionQ>(m, "DistributionQ")
      .def(py::init([](const PyGridPtr& grid, Eigen::VectorXd q) {
             return DistributionQ(grid, std::move(q));
           }),
           py::arg("grid"), py::arg("qvals"))
      .def_static(
          "from_samples",
          [](const std::vector<double>& xs, const PyGridPtr& grid) {
            return estimate_distribution(SampleSet(xs), grid);
          },
          py::arg("samples"), py::arg("grid"))
      .def_property_readonly("qvals", &DistributionQ::qvals)
      .def_property_readonly(
          "grid",
          [](const DistributionQ& d) { return std::const_pointer_cast<ProbGrid>(d.grid()); })
      .def("atomless", &DistributionQ::atomless)
      .def("__len__", &DistributionQ::size);

  py::class_<TangentVector>(m, "TangentVector")
      .def_property_readonly("vals", &TangentVector::vals)
      .def_property_readonly("base", &TangentVector::base);

  m.def("wasserstein_distance", &wasserstein_distance);
  m.def("log_map", &log_map, py::arg("base"), py::arg("target"));
  m.def("exp_map", &exp_map, py::arg("v"));
  m.def("inner_product", &inner_product);
  m.def("parallel_transport", &parallel_transport, py::arg("v"), py::arg("dest"));
  m.def("frechet_mean",
        [](const std::vector<DistributionQ>& ds) { return frechet_mean(ds).mean; });

  py::class_<EigenSystem>(m, "EigenSystem")
      .def_property_readonly("eigenvalues", [](const EigenSystem& e) { return e.eigenvalues; })
      .def_property_readonly("eigenfunctions",
                             [](const EigenSystem& e) { return e.eigenfunctions; })
      .def_property_readonly("fve", [](const EigenSystem& e) { return e.fve; })
      .def_property_readonly("rank", &EigenSystem::rank);

  m.def(
      "wfpca",
      [](const std::vector<DistributionQ>& ds, int max_components) {
        const FrechetMean fm = frechet_mean(ds);
        std::vector<TangentVector> logs;
        for (const auto& d : ds) logs.push_back(log_map(fm.mean, d));
        return py::make_tuple(fm.mean, eigensystem_from_logs(logs, max_components));
      },
      py::arg("distributions"), py::arg("max_components") = 50);

  py::class_<D2DFit>(m, "D2DFit")
      .def_property_readonly("trunc_j", [](const D2DFit& f) { return f.trunc_j; })
      .def_property_readonly("trunc_k", [](const D2DFit& f) { return f.trunc_k; })
      .def_property_readonly("coeff", [](const D2DFit& f) { return f.coeff; })
      .def_property_readonly("train_eta", [](const D2DFit& f) { return f.train_eta; })
      .def("save", [](const D2DFit& f, const std::string& path) {
        save_d2d_model(path, f, 0, "python");
      });

  m.def(
      "fit_d2d",
      [](const std::vector<DistributionQ>& x, const std::vector<DistributionQ>& y,
         const std::string& trunc) { return fit_d2d(x, y, parse_trunc(trunc)); },
      py::arg("predictors"), py::arg("responses"), py::arg("trunc") = "cv:5");
  m.def("load_d2d", &load_d2d_model, py::arg("path"));
  m.def("predict_d2d", &predict_d2d, py::arg("fit"), py::arg("predictor"));

  py::class_<ScalarFit>(m, "ScalarFit")
      .def_property_readonly("trunc_j", [](const ScalarFit& f) { return f.trunc_j; })
      .def_property_readonly("intercept", [](const ScalarFit& f) { return f.intercept; })
      .def("save", [](const ScalarFit& f, const std::string& path) {
        save_d2s_model(path, f, 0, "python");
      });

  m.def(
      "fit_d2s",
      [](const std::vector<DistributionQ>& x, const std::vector<double>& y,
         const std::string& trunc) { return fit_d2s(x, y, parse_trunc(trunc)); },
      py::arg("predictors"), py::arg("y"), py::arg("trunc") = "cv:5");
  m.def("load_d2s", &load_d2s_model, py::arg("path"));
  m.def("predict_d2s", &predict_d2s, py::arg("fit"), py::arg("predictor"));

  py::class_<ARFit>(m, "ARFit")
      .def_property_readonly("trunc_j", [](const ARFit& f) { return f.trunc_j; })
      .def_property_readonly("coeff", [](const ARFit& f) { return f.coeff; })
      .def_property_readonly("test_error", [](const ARFit& f) { return f.test_error; })
      .def("save", [](const ARFit& f, const std::string& path) {
        save_ar_model(path, f, 0, "python");
      });

  m.def(
      "fit_ar",
      [](const std::vector<DistributionQ>& series, const std::string& trunc) {
        ARFitOptions opts;
        opts.trunc = parse_trunc(trunc);
        return fit_ar(series, opts);
      },
      py::arg("series"), py::arg("trunc") = "cv:5");
  m.def("load_ar", &load_ar_model, py::arg("path"));
  m.def("forecast_one", &forecast_one, py::arg("fit"), py::arg("current"));
  m.def(
      "forecast",
      [](const ARFit& fit, const DistributionQ& start, int horizon) {
        const RollingForecast rf = forecast_rolling(fit, start, horizon);
        return py::make_tuple(rf.steps, rf.etas);
      },
      py::arg("fit"), py::arg("start"), py::arg("horizon") = 1);

  m.def(
      "simulate_d2d",
      [](const std::string& scase, int n, std::uint64_t seed, int m_samples,
         bool powerlaw, const PyGridPtr& grid) {
        SimConfig cfg;
        cfg.scase = parse_sim_case(scase);
        cfg.n = n;
        cfg.seed = seed;
        cfg.m_samples = m_samples;
        cfg.powerlaw = powerlaw;
        const D2DSample s = generate_d2d(cfg, grid);
        return py::make_tuple(s.predictors, s.responses, s.oracle);
      },
      py::arg("case"), py::arg("n"), py::arg("seed") = 1, py::arg("m_samples") = 0,
      py::arg("powerlaw") = false, py::arg("grid"));

  m.def(
      "simulate_ar",
      [](int n, std::uint64_t seed, const PyGridPtr& grid) {
        return simulate_ar_process(ARProcessSpec::default_spec(grid), n, seed);
      },
      py::arg("n"), py::arg("seed") = 1, py::arg("grid"));
}
