/*
 * Copyright 2026 The EEAC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// Python bindings. Structured records cross the boundary as plain dicts in the
// same layout as the files the CLI writes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "eeac/errors.h"
#include "eeac/experiment.h"
#include "eeac/explanation.h"
#include "eeac/json_text.h"
#include "eeac/oracle.h"
#include "eeac/records.h"
#include "eeac/selftest.h"
#include "eeac/shapley.h"
#include "eeac/training.h"

namespace py = pybind11;

namespace {

using eeac::Json;

py::object ToPy(const Json& j) {
  return py::module_::import("json").attr("loads")(eeac::DumpCanonical(j));
}

Json FromPy(const py::handle& obj) {
  const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return Json::parse(text);
}

eeac::OracleCase CaseArg(const py::handle& obj) { return eeac::CaseFromJson(FromPy(obj)); }

eeac::TrainConfig MakeTrainConfig(int epochs, double learning_rate, int batch_size,
                                  int train_samples, int holdout_samples) {
  eeac::TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.learning_rate = learning_rate;
  cfg.batch_size = batch_size;
  cfg.n_train_samples = train_samples;
  cfg.n_holdout_samples = holdout_samples;
  return cfg;
}

eeac::ShapleyEstimate Estimate(const eeac::GameView& game, const std::string& method,
                               int samples, std::uint64_t seed, int jobs) {
  if (eeac::ParseShapleyMethod(method) == eeac::ShapleyMethod::kExact) {
    return eeac::ExactShapley(game);
  }
  return eeac::MonteCarloShapley(game, samples, seed, jobs);
}

py::dict EstimateDict(const eeac::ShapleyEstimate& est) {
  py::dict d;
  d["values"] = est.values;
  d["std_errors"] = est.std_errors;
  d["method"] = std::string(eeac::ShapleyMethodName(est.method));
  d["samples_per_concept"] = est.samples_per_concept;
  d["seed"] = est.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Concept-level Shapley explanations through a per-input surrogate";

  static py::exception<eeac::SchemaError> schema_error(m, "SchemaError", PyExc_ValueError);
  static py::exception<eeac::NumericalError> numerical_error(m, "NumericalError",
                                                             PyExc_ArithmeticError);
  static py::exception<eeac::MissingEntryError> missing_error(m, "MissingEntryError",
                                                              PyExc_LookupError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const eeac::MissingEntryError& e) {
      std::vector<std::string> missing;
      for (const eeac::Coalition& s : e.missing()) missing.push_back(s.ToText());
      // args: (message, case_id, missing coalitions in text form)
      py::tuple args = py::make_tuple(e.what(), e.case_id(), missing);
      PyErr_SetObject(missing_error.ptr(), args.ptr());
    } catch (const eeac::SchemaError& e) {
      py::set_error(schema_error, e.what());
    } catch (const eeac::NumericalError& e) {
      py::set_error(numerical_error, e.what());
    }
  });

  m.attr("FORMAT_VERSION") = eeac::kFormatVersion;
  m.attr("DEFAULT_SAMPLES_PER_CONCEPT") = eeac::kDefaultSamplesPerConcept;

  m.def(
      "synth_case",
      [](int n_concepts, int n_classes, int feature_dim, double nonlinearity,
         std::uint64_t seed, const std::string& case_id) {
        eeac::SyntheticOracleSpec spec;
        spec.n_concepts = n_concepts;
        spec.n_classes = n_classes;
        spec.feature_dim = feature_dim;
        spec.nonlinearity = nonlinearity;
        return ToPy(eeac::CaseToJson(eeac::SynthCase(spec, seed, case_id)));
      },
      py::arg("n_concepts") = 12, py::arg("n_classes") = 10, py::arg("feature_dim") = 16,
      py::arg("nonlinearity") = 1.0, py::arg("seed") = 0, py::arg("case_id") = "",
      "Deterministic synthetic case as a dict in case-file layout.");

  m.def("load_case", [](const std::string& path) {
    return ToPy(eeac::CaseToJson(eeac::LoadCase(path)));
  });
  m.def("save_case", [](const py::object& c, const std::string& path) {
    eeac::SaveCase(CaseArg(c), path);
  });
  m.def("merge_response", [](const py::object& c, const py::object& response) {
    eeac::OracleCase oc = CaseArg(c);
    eeac::MergeEntries(oc, eeac::ResponseFromJson(FromPy(response), oc.n_concepts).entries);
    return ToPy(eeac::CaseToJson(oc));
  });

  m.def(
      "train_surrogate",
      [](const py::object& c, const std::string& variant, int epochs, double learning_rate,
         int batch_size, int train_samples, int holdout_samples, std::uint64_t seed) {
        const eeac::OracleCase oc = CaseArg(c);
        eeac::TrainConfig cfg =
            MakeTrainConfig(epochs, learning_rate, batch_size, train_samples, holdout_samples);
        cfg.seed = seed;
        const auto v = eeac::SurrogateVariant::Parse(variant);
        eeac::TrainedSurrogate t;
        {
          py::gil_scoped_release release;
          t = eeac::Train(oc, v, cfg);
        }
        py::dict out;
        out["surrogate"] = ToPy(eeac::SurrogateToJson(t.weights, cfg));
        out["report"] = ToPy(eeac::TrainReportToJson(oc.case_id, v, t.report));
        out["pie_time_seconds"] = t.report.pie_time_seconds;
        return out;
      },
      py::arg("case"), py::arg("variant") = "tanh", py::arg("epochs") = 50,
      py::arg("learning_rate") = 1e-3, py::arg("batch_size") = 64,
      py::arg("train_samples") = 0, py::arg("holdout_samples") = 0, py::arg("seed") = 0);

  m.def(
      "shapley",
      [](const py::object& c, const py::object& surrogate, const std::string& method,
         int samples, std::uint64_t seed, int jobs) {
        const eeac::OracleCase oc = CaseArg(c);
        std::optional<eeac::SurrogateWeights> w;
        if (!surrogate.is_none()) w = eeac::SurrogateFromJson(FromPy(surrogate));
        eeac::ShapleyEstimate est;
        {
          py::gil_scoped_release release;
          eeac::GameView game = w ? eeac::SurrogateGame(oc, *w) : eeac::OracleGame(oc);
          if (w && oc.n_concepts <= eeac::kMaxTableConcepts) game = eeac::Tabulate(game);
          est = Estimate(game, method, samples, seed, jobs);
        }
        return EstimateDict(est);
      },
      py::arg("case"), py::arg("surrogate") = py::none(), py::arg("method") = "monte_carlo",
      py::arg("samples") = eeac::kDefaultSamplesPerConcept, py::arg("seed") = 0,
      py::arg("jobs") = 1,
      "Shapley values of the oracle game, or of the surrogate game when given.");

  m.def(
      "shapley_table",
      [](std::vector<double> table, const std::string& method, int samples, std::uint64_t seed) {
        int n = 0;
        while ((std::size_t{1} << n) < table.size()) ++n;
        if ((std::size_t{1} << n) != table.size()) {
          throw std::invalid_argument("table size must be a power of two");
        }
        return EstimateDict(Estimate(eeac::TableGame(n, std::move(table)), method, samples, seed, 1));
      },
      py::arg("table"), py::arg("method") = "exact",
      py::arg("samples") = eeac::kDefaultSamplesPerConcept, py::arg("seed") = 0,
      "Shapley values of a game given as u[bits], concept i = bit i.");

  m.def(
      "evaluate",
      [](const py::object& c, const std::vector<double>& values, bool at_least_one) {
        const eeac::OracleCase oc = CaseArg(c);
        eeac::ShapleyEstimate est;
        est.values = values;
        est.std_errors.assign(values.size(), 0.0);
        const auto report = eeac::Evaluate(est, eeac::OracleGame(oc), at_least_one);
        py::dict out = ToPy(eeac::ExplanationToJson(oc.case_id, report));
        std::vector<double> ins, del;
        for (const auto& p : report.insertion_curve) ins.push_back(p.utility);
        for (const auto& p : report.deletion_curve) del.push_back(p.utility);
        out["insertion_curve"] = ins;
        out["deletion_curve"] = del;
        return out;
      },
      py::arg("case"), py::arg("values"), py::arg("at_least_one") = false);

  m.def(
      "explain",
      [](const py::object& c, const std::string& variant, const std::string& method,
         int samples, std::uint64_t seed, bool pie_curves, int jobs) {
        const eeac::OracleCase oc = CaseArg(c);
        eeac::ExplainOptions options;
        options.variant = eeac::SurrogateVariant::Parse(variant);
        options.method = eeac::ParseShapleyMethod(method);
        options.samples_per_concept = samples;
        options.seed = seed;
        options.pie_curves = pie_curves;
        options.jobs = jobs;
        eeac::ExplainResult r;
        {
          py::gil_scoped_release release;
          r = eeac::RunExplain(oc, options);
        }
        py::dict out;
        out["surrogate"] = ToPy(eeac::SurrogateToJson(r.surrogate.weights, r.train_config));
        out["report"] = ToPy(eeac::TrainReportToJson(oc.case_id, options.variant, r.surrogate.report));
        out["shapley"] = EstimateDict(r.shapley);
        out["explanation"] = ToPy(eeac::ExplanationToJson(oc.case_id, r.report));
        return out;
      },
      py::arg("case"), py::arg("variant") = "tanh", py::arg("method") = "monte_carlo",
      py::arg("samples") = eeac::kDefaultSamplesPerConcept, py::arg("seed") = 0,
      py::arg("pie_curves") = false, py::arg("jobs") = 1);

  m.def(
      "compare",
      [](const std::vector<py::object>& cases, const std::vector<std::string>& variants,
         int repetitions, int samples, std::uint64_t seed, int jobs) {
        std::vector<eeac::OracleCase> oc;
        for (const auto& c : cases) oc.push_back(CaseArg(c));
        eeac::ExperimentConfig cfg;
        cfg.variants.clear();
        for (const auto& v : variants) cfg.variants.push_back(eeac::SurrogateVariant::Parse(v));
        cfg.repetitions = repetitions;
        cfg.samples_per_concept = samples;
        cfg.base_seed = seed;
        cfg.jobs = jobs;
        eeac::CompareResult r;
        {
          py::gil_scoped_release release;
          r = eeac::Compare(oc, cfg);
        }
        py::dict out;
        out["runs"] = ToPy(eeac::RunsJson(r.runs))["runs"];
        out["summary"] = ToPy(eeac::SummaryJson(r.summary))["summary"];
        out["summary_text"] = eeac::SummaryText(r.summary);
        py::list failures;
        for (const auto& f : r.failures) failures.append(py::make_tuple(f.case_id, f.message));
        out["failures"] = failures;
        return out;
      },
      py::arg("cases"), py::arg("variants") = std::vector<std::string>{"linear", "tanh"},
      py::arg("repetitions") = 3, py::arg("samples") = eeac::kDefaultSamplesPerConcept,
      py::arg("seed") = 0, py::arg("jobs") = 1);

  m.def("synthesize_cases", [](int count, std::uint64_t seed, int n_concepts, int n_classes,
                               int feature_dim) {
    eeac::SyntheticOracleSpec spec;
    spec.n_concepts = n_concepts;
    spec.n_classes = n_classes;
    spec.feature_dim = feature_dim;
    py::list out;
    for (const auto& c : eeac::SynthesizeCases(spec, count, seed)) out.append(ToPy(eeac::CaseToJson(c)));
    return out;
  }, py::arg("count"), py::arg("seed") = 0, py::arg("n_concepts") = 12,
     py::arg("n_classes") = 10, py::arg("feature_dim") = 16);

  m.def("auc", [](const std::vector<double>& fractions, const std::vector<double>& values) {
    return eeac::Auc(fractions, values);
  });

  m.def("selftest", [] {
    py::list out;
    for (const auto& r : eeac::RunSelftest()) out.append(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  });
}
