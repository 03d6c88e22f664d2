#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phosphene/crossval.hpp"
#include "phosphene/errors.hpp"
#include "phosphene/metrics.hpp"
#include "phosphene/models.hpp"
#include "phosphene/report.hpp"
#include "phosphene/serialize.hpp"

namespace py = pybind11;
using namespace phosphene;

namespace {

// Parameters and reports cross the boundary as JSON text; the Python side
// decodes them into plain dicts.
FitOptions options(std::uint64_t seed, int restarts) {
  FitOptions o;
  o.seed = seed;
  o.restarts = restarts;
  return o;
}

std::vector<std::size_t> select(const Dataset& ds, std::optional<int> subject, std::optional<double> freq,
                                std::optional<double> dur) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Trial& t = ds[i];
    if (subject && t.subject_id != *subject) continue;
    if (freq && t.stimulus.freq_pps != *freq) continue;
    if (dur && t.stimulus.duration_s != *dur) continue;
    out.push_back(i);
  }
  if (out.empty()) throw ArgumentError("no trial matches the selection");
  return out;
}

py::dict trial_dict(const Trial& t) {
  py::dict d;
  d["subject_id"] = t.subject_id;
  d["freq_pps"] = t.stimulus.freq_pps;
  d["duration_s"] = t.stimulus.duration_s;
  d["t0"] = t.observed.t0();
  d["dt"] = t.observed.dt();
  d["samples"] = std::vector<double>(t.observed.samples().begin(), t.observed.samples().end());
  return d;
}

}  // namespace

PYBIND11_MODULE(_phosphene, m) {
  m.doc() = "Phosphene brightness models";

  py::register_exception<DegenerateVarianceError>(m, "DegenerateVarianceError", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ArgumentError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const FormatError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ParameterError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const DataError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Dataset>(m, "Dataset")
      .def_static("load", [](const std::string& path) { return load_dataset(path); }, py::arg("path"))
      .def("__len__", &Dataset::size)
      .def("subjects", &Dataset::subjects)
      .def("conditions",
           [](const Dataset& ds) {
             std::vector<std::pair<double, double>> out;
             for (const Condition& c : ds.conditions()) out.emplace_back(c.freq_pps, c.duration_s);
             return out;
           })
      .def("trial", [](const Dataset& ds, std::size_t i) {
        if (i >= ds.size()) throw py::index_error("trial index out of range");
        return trial_dict(ds[i]);
      });

  m.def("mse", [](const std::vector<double>& a, const std::vector<double>& b) { return mse(a, b); });
  m.def("pearson_r", [](const std::vector<double>& a, const std::vector<double>& b) { return pearson_r(a, b); });
  m.def("dft", [](const std::vector<double>& x) { return dft(x); });

  m.def(
      "fit",
      [](const Dataset& ds, const std::string& model, int m_components, const std::string& mode,
         std::optional<int> subject, std::optional<double> freq, std::optional<double> dur, std::uint64_t seed,
         int restarts) {
        const ModelKind kind = parse_model_kind(model);
        const auto chosen = select(ds, subject, freq, dur);
        const FitOptions opts = options(seed, restarts);
        Json out = Json::array();
        py::gil_scoped_release release;
        if (mode == "descriptive") {
          for (std::size_t i : chosen) {
            const Trial& t = ds[i];
            out.push_back(to_json(FitRecord{fit_descriptive(kind, t, m_components, opts), t.subject_id,
                                            t.stimulus.freq_pps, t.stimulus.duration_s}));
          }
        } else if (mode == "predictive") {
          std::vector<TrialRef> training;
          for (std::size_t i : chosen) training.push_back(std::cref(ds[i]));
          out.push_back(to_json(FitRecord{fit_predictive(kind, training, m_components, opts), {}, {}, {}}));
        } else {
          throw ArgumentError("mode must be descriptive or predictive");
        }
        return out.dump();
      },
      py::arg("dataset"), py::arg("model"), py::arg("m") = 2, py::arg("mode") = "descriptive",
      py::arg("subject") = py::none(), py::arg("freq") = py::none(), py::arg("dur") = py::none(),
      py::arg("seed") = 0, py::arg("restarts") = 8);

  m.def(
      "predict",
      [](const std::string& record_json, double freq, double dur, double t0, double dt, std::size_t n) {
        const FitRecord rec = fit_record_from_json(Json::parse(record_json));
        const TimeCourse tc = predict(rec.result.params, Stimulus{freq, dur, {}}, Grid{t0, dt, n});
        return std::vector<double>(tc.samples().begin(), tc.samples().end());
      },
      py::arg("record"), py::arg("freq"), py::arg("dur"), py::arg("t0") = 0.0, py::arg("dt") = kCanonicalDt,
      py::arg("n"));

  m.def(
      "evaluate",
      [](const Dataset& ds, const std::string& model, const std::string& protocol, int m_components,
         std::uint64_t seed, int restarts, unsigned threads) {
        EvalConfig config;
        config.m = m_components;
        config.fit = options(seed, restarts);
        config.threads = threads;
        const ModelKind kind = parse_model_kind(model);
        const Protocol p = parse_protocol(protocol);
        py::gil_scoped_release release;
        return to_json(evaluate(ds, kind, p, config)).dump();
      },
      py::arg("dataset"), py::arg("model"), py::arg("protocol") = "subject", py::arg("m") = 2,
      py::arg("seed") = 0, py::arg("restarts") = 8, py::arg("threads") = 0);

  m.def(
      "sweep",
      [](const Dataset& ds, int m_min, int m_max, std::uint64_t seed, unsigned threads) {
        EvalConfig config;
        config.fit = options(seed, 8);
        config.threads = threads;
        py::gil_scoped_release release;
        return to_json(sweep_m(ds, m_min, m_max, config)).dump();
      },
      py::arg("dataset"), py::arg("m_min") = 1, py::arg("m_max") = 8, py::arg("seed") = 0, py::arg("threads") = 0);
}
